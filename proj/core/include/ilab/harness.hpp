#pragma once

// Inequality instances and their empirical ratios lhs / rhs over corpora.
//
//   interpolation:  ||u||_p        vs  ||u||_r^theta       ||u||_{q,inf}^(1-theta)
//   gn:             ||grad^j u||_p vs  ||grad^k u||_r^theta ||u||_q^(1-theta)
//
// Sup ratios are empirical lower bounds on the constant, nothing more.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ilab/exponent.hpp"
#include "ilab/family.hpp"
#include "ilab/grid_function.hpp"
#include "ilab/norms.hpp"

namespace ilab {

class InadmissibleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class InequalityKind { interpolation, gn };

std::string_view to_string(InequalityKind k);

class InequalityInstance {
 public:
  static InequalityInstance interpolation(int n, const ExtendedExponent& r, const ExtendedExponent& q,
                                          const Rational& theta);
  static InequalityInstance gn(int n, std::int64_t j, std::int64_t k, const Rational& theta,
                               const ExtendedExponent& r, const ExtendedExponent& q);

  /// {"kind": "interpolation"|"gn", "n", "r", "q", "theta", ["j", "k"], ["p"]}.
  /// Exponents and theta may be JSON numbers or strings in the exponent
  /// grammar. A given "p" must equal the solved one.
  static InequalityInstance from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  InequalityKind kind() const { return kind_; }
  int n() const { return n_; }
  std::int64_t j() const { return j_; }
  std::int64_t k() const { return k_; }
  const Rational& theta() const { return theta_; }
  const ExtendedExponent& r() const { return r_; }
  const ExtendedExponent& q() const { return q_; }
  const ExtendedExponent& p() const { return p_; }
  const Rational& zeta() const { return zeta_; }
  /// Interpolation uses the weak q-norm on the right, gn the Lebesgue one.
  bool rhs_weak() const { return kind_ == InequalityKind::interpolation; }
  const Admissibility& decision() const { return decision_; }
  bool admissible() const { return decision_.admissible; }

 private:
  InequalityKind kind_ = InequalityKind::interpolation;
  int n_ = 1;
  std::int64_t j_ = 0, k_ = 0;
  Rational theta_{0};
  ExtendedExponent r_, q_, p_;
  Rational zeta_{0};
  Admissibility decision_;
};

struct RatioRecord {
  double lhs = 0.0;
  double rhs_first = 0.0;   // ||u||_r or ||grad^k u||_r
  double rhs_second = 0.0;  // ||u||_{q,inf} or ||u||_q
  double rhs = 0.0;         // rhs_first^theta * rhs_second^(1-theta)
  double ratio = 0.0;
  bool degenerate = false;  // rhs == 0

  nlohmann::json to_json() const;
};

struct RatioOptions {
  HolderMethod method = HolderMethod::branch_and_bound;
  int max_derivative_order = kDefaultMaxDerivativeOrder;
  /// Added to theta in the rhs product only; nonzero values break the exponent
  /// relation on purpose (negative control for the invariance suite).
  double theta_shift = 0.0;
};

/// Throws InadmissibleError carrying the decision's reason before touching u.
RatioRecord ratio(const GridFunction& u, const InequalityInstance& inst, const RatioOptions& options = {});

struct SampleRecord {
  ParamValues params;
  std::uint64_t seed = 0;
  double truncation_level = 0.0;
  RatioRecord ratio;
};

struct SweepLevel {
  GridGeometry grid;
  std::vector<SampleRecord> records;
  std::optional<double> sup_ratio;      // empty when every record is degenerate
  std::optional<std::size_t> argmax;    // index into records
  std::size_t degenerate = 0;
};

struct RatioReport {
  InequalityInstance instance;
  SweepLevel coarse;
  std::optional<SweepLevel> fine;  // refined grid, h/2
  std::optional<double> drift;     // |sup_h - sup_h/2| / sup_h
  bool empty = false;              // no nondegenerate sample at some level

  /// sup equals the max over records and each ratio equals lhs / rhs.
  std::vector<std::string> invariant_failures() const;
  nlohmann::json to_json() const;
};

struct SweepOptions {
  RatioOptions ratio;
  bool refine = true;
  /// 0 means INTERP_LAB_THREADS, falling back to the hardware count.
  unsigned threads = 0;
};

/// Thread count from INTERP_LAB_THREADS, else hardware concurrency (>= 1).
unsigned default_thread_count();

/// Ratio over every seed of the family on its grid and, with refine, on the
/// grid with halved spacing. Output is independent of the thread count.
RatioReport sweep(const FamilySpec& family, const InequalityInstance& inst, const SweepOptions& options = {});

/// Summarises records the same way sweep does; exposed for corpus unions.
SweepLevel aggregate(GridGeometry grid, std::vector<SampleRecord> records);

struct InvarianceEntry {
  Rational lambda{1};
  double scalar = 1.0;
  double residual = 0.0;
};

struct InvarianceReport {
  double base_ratio = 0.0;
  double max_residual = 0.0;
  std::vector<InvarianceEntry> entries;
  nlohmann::json to_json() const;
};

/// max over lambda x c of |log ratio(c * dilate(u, lambda)) - log ratio(u)|.
InvarianceReport scale_invariance_suite(const InequalityInstance& inst, const GridFunction& u,
                                        const std::vector<Rational>& lambdas,
                                        const std::vector<double>& scalars,
                                        const RatioOptions& options = {});

}  // namespace ilab
