#pragma once

// Norms on the extended exponent scale, evaluated on grid functions.
//
// Lebesgue norms use the midpoint rule with every node standing for one cell,
// so the distribution function and the L^1 norm satisfy the layer-cake
// identity up to rounding.

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "ilab/exponent.hpp"
#include "ilab/grid_function.hpp"
#include "ilab/holder.hpp"

namespace ilab {

enum class NormKind { lebesgue, sup, weak_lorentz, holder };
enum class NormMethod { exact_sum, naive_pairs, branch_and_bound };

std::string_view to_string(NormKind k);
std::string_view to_string(NormMethod m);

struct NormValue {
  double value = 0.0;
  NormKind kind = NormKind::lebesgue;
  NormMethod method = NormMethod::exact_sum;
  std::string exponent;           // p for lebesgue, q for weak-lorentz
  std::int64_t s = 0;             // holder: derivative order of the semi-norm
  std::string ptilde;             // holder: "inf" when the sup branch applies
  std::string alpha;              // holder: -n/p~
  int derivative_order = 0;       // derivatives applied before the norm
  GridGeometry grid;
  std::optional<HolderResult> pairs;  // pair statistics for the semi-norm branch

  nlohmann::json to_json() const;
};

/// (sum |u_i|^p * cell volume)^(1/p); p = inf gives max |u_i|. Throws
/// OutOfScaleError for p < 1.
NormValue lebesgue_norm(const GridFunction& u, double p);
NormValue sup_norm(const GridFunction& u);

/// |{|u| > t}| = (number of nodes with |u| > t) * cell volume.
double distribution_function(const GridFunction& u, double t);

/// sup_t t |{|u| > t}|^(1/q), computed exactly by a sweep over the sorted
/// magnitudes: max_i v_i (i * cell volume)^(1/q). q = inf gives the sup norm.
/// Throws OutOfScaleError for q < 1.
NormValue weak_lorentz_norm(const GridFunction& u, double q);

enum class HolderMethod { naive, branch_and_bound };

struct ExtendedNormOptions {
  HolderMethod method = HolderMethod::branch_and_bound;
  /// Accept p in (-n, 0) through the Hoelder decomposition.
  bool allow_below_holder_range = false;
  int max_derivative_order = kDefaultMaxDerivativeOrder;
};

/// Norm of the extended scale. p >= 1 and p = inf are Lebesgue norms; p < 0
/// is decomposed into s = floor(-n/p) and p~, then evaluated as the
/// Hoelder-(-n/p~) semi-norm of the s-th derivative tensor, or the sup norm of
/// its magnitude when p~ = inf.
NormValue extended_norm(const GridFunction& u, const ExtendedExponent& p,
                        const ExtendedNormOptions& options = {});

/// Same dispatch applied to the derivative tensor of order `order` (order 0
/// is u itself). Lebesgue and sup norms act on the pointwise magnitude.
NormValue extended_norm_of_derivative(const GridFunction& u, int order, const ExtendedExponent& p,
                                      const ExtendedNormOptions& options = {});

struct ScalingReport {
  double norm_before = 0.0;
  double norm_after = 0.0;
  double predicted_log_shift = 0.0;  // -(n/p) log lambda
  double residual = 0.0;             // |log after - log before - predicted|
  bool degenerate = false;           // a zero norm leaves the law untestable
};

/// Checks ||dilate(u, lambda)||_p = lambda^(-n/p) ||u||_p.
ScalingReport scaling_exponent_check(const GridFunction& u, const ExtendedExponent& p,
                                     const Rational& lambda, const ExtendedNormOptions& options = {});

}  // namespace ilab
