#pragma once

// Numerical counterparts of the constructive steps behind the interpolation
// inequality ||u||_p <= C ||u||_r^theta ||u||_{q,inf}^(1-theta):
//
//  * truncation u_s = sgn(u) min(|u|, s) and its tail u - u_s,
//  * the layer-cake bound on the tail when r is a Hoelder exponent,
//  * the moment bound on the truncated part,
//  * the balancing level s at which both bounds coincide,
//  * the pointwise estimate, the ball-inclusion claim and the near/far pair
//    split used when p and r are both Hoelder exponents.
//
// Throughout, ||u||_r for r <= -n is the pairwise Hoelder semi-norm with
// exponent -n/r over grid nodes (see holder_branch_norm).

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ilab/exponent.hpp"
#include "ilab/grid_function.hpp"

namespace ilab {

class DegenerateInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Hoelder semi-norm of u with exponent -n/r over node pairs (branch and
/// bound). Requires r in the Hoelder range (-inf, -n].
double holder_branch_norm(const GridFunction& u, const ExtendedExponent& r);

struct TruncationPair {
  GridFunction u;
  double s = 0.0;
  GridFunction truncated;  // sgn(u) min(|u|, s)
  GridFunction tail;       // u - truncated
  double superlevel_measure = 0.0;  // |{|u| > s}|
};

TruncationPair truncate(const GridFunction& u, double s);

/// lhs <= rhs style comparison with ratio = lhs / rhs.
struct BoundCheck {
  std::string check;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  nlohmann::json params;
  GridGeometry grid;

  nlohmann::json to_json() const;
};

/// ||u||_p^p against 2^(p-1) (||u - u_s||_p^p + ||u_s||_p^p) (convexity of t^p).
BoundCheck truncation_split_check(const GridFunction& u, double s, const ExtendedExponent& p);

/// ||u - u_s||_p^p against ||u||_r^p |E_s|^(1 - p/r) for a Hoelder r and p >= 1.
/// Throws DegenerateInputError when E_s = {|u| > s} is empty.
BoundCheck layer_cake_tail_bound(const GridFunction& u, double s, const ExtendedExponent& p,
                                 const ExtendedExponent& r);

/// ||u_s||_p^p against p/(p-q) s^(p-q) ||u||_{q,inf}^q for p > q >= 1.
BoundCheck tail_moment_bound(const GridFunction& u, double s, const ExtendedExponent& p,
                             const ExtendedExponent& q);

struct BalanceResult {
  double s = 0.0;
  double lhs = 0.0;         // ||u||_r^p / ||u||_{q,inf}^q
  double rhs = 0.0;         // s^(p-q) |{|u|>s}|^(p/r - 1) at s
  double residual = 0.0;    // |log lhs - log rhs(s)|
  double step = 0.0;        // |log rhs(s_hi) - log rhs(s_lo)| at convergence
  double s_lo = 0.0;
  double s_hi = 0.0;
  bool boundary = false;    // lhs outside the range of rhs over (0, max|u|)
  bool monotone_verified = false;
  std::size_t evaluations = 0;

  nlohmann::json to_json() const;
};

/// s -> s^(p-q) |{|u|>s}|^(p/r-1); +inf once the superlevel set is empty.
double balance_rhs(const GridFunction& u, double s, const ExtendedExponent& p,
                   const ExtendedExponent& q, const ExtendedExponent& r);

/// Bisection on log s for the level where lhs meets the nondecreasing map
/// balance_rhs. Requires 1 <= q < p < inf and r in the Hoelder range.
BalanceResult balance_s(const GridFunction& u, const ExtendedExponent& p, const ExtendedExponent& q,
                        const ExtendedExponent& r);

struct PointwiseReport {
  double max_value = 0.0;
  double weak_norm = 0.0;    // ||u||_{q,inf}
  double holder_norm = 0.0;  // ||u||_r
  double bound = 0.0;        // weak^(q/(q-r)) holder^(r/(r-q))
  double empirical_constant = 0.0;
  bool degenerate = false;

  nlohmann::json to_json() const;
};

/// max|u| against ||u||_{q,inf}^(q/(q-r)) ||u||_r^(r/(r-q)) for q in [1,inf)
/// and a Hoelder r. Throws DegenerateInputError for the zero function.
PointwiseReport pointwise_estimate_check(const GridFunction& u, const ExtendedExponent& q,
                                         const ExtendedExponent& r);

struct BallInclusionReport {
  std::size_t node = 0;
  double radius = 0.0;
  std::size_t checked = 0;
  std::size_t violations = 0;
  bool degenerate = false;  // ||u||_r = 0
};

/// Counts nodes y with |x - y| < radius_scale * (|u(x)|/2)^(-r/n) ||u||_r^(r/n)
/// and |u(y)| <= |u(x)|/2. `holder_norm` is ||u||_r; pass a negative value to
/// have it computed. Requires u(x) != 0.
BallInclusionReport ball_inclusion_check(const GridFunction& u, const ExtendedExponent& r,
                                         std::size_t node, double holder_norm = -1.0,
                                         double radius_scale = 1.0);

struct SplitReport {
  double s = 0.0;
  double near = 0.0;        // I: sup over |x-y| <= s
  double far = 0.0;         // II: sup over |x-y| > s
  double near_bound = 0.0;  // ||u||_r s^(-n/r + n/p)
  double far_bound = 0.0;   // s^(n/p) ||u||_{q,inf}^(q/(q-r)) ||u||_r^(r/(r-q))
  double far_constant = 0.0;  // far / far_bound
  double full = 0.0;        // semi-norm over all pairs
  bool near_empty = false;  // s below the grid spacing
  bool far_vacuous = false; // s at or above the box diameter

  double optimal_s = 0.0;
  double optimal_near = 0.0;
  double optimal_far = 0.0;
  double interpolation_rhs = 0.0;  // ||u||_r^theta ||u||_{q,inf}^(1-theta)
  double optimal_factor = 0.0;     // (I + II) / interpolation_rhs at optimal_s

  nlohmann::json to_json() const;
};

/// Near/far split of the Hoelder-p semi-norm at distance s for p, r in the
/// Hoelder range and q in [1, inf).
SplitReport split_seminorm_check(const GridFunction& u, const ExtendedExponent& p,
                                 const ExtendedExponent& r, const ExtendedExponent& q, double s);

}  // namespace ilab
