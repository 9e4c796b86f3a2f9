#pragma once

// Exact arithmetic over the extended exponent scale.
//
// An exponent p is stored through its reciprocal rho = 1/p, so p = inf is the
// ordinary rational 0 and every exponent relation becomes affine in rho:
//
//   rho in (0, 1]      p in [1, inf)        Lebesgue
//   rho == 0           p == inf             sup
//   rho in [-1/n, 0)   p in (-inf, -n]      Hoelder
//   anything else      p in (0,1) or (-n,0) representable, out of scale
//
// Negative exponents encode Hoelder classes through s = floor(-n/p) and
// n/p~ = s + n/p.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

// Boost 1.74 rational vs integer equality recurses forever under C++20
// rewritten-candidate rules. Exact non-template overloads win resolution.
namespace boost {
inline bool operator==(const rational<std::int64_t>& a, std::int64_t b) {
  return a.denominator() == 1 && a.numerator() == b;
}
inline bool operator==(const rational<std::int64_t>& a, int b) { return a == std::int64_t(b); }
}  // namespace boost

namespace ilab {

using Rational = boost::rational<std::int64_t>;

/// Largest integer not exceeding x.
std::int64_t floor(const Rational& x);

/// "a/b" in lowest terms, or "a" when the denominator is 1.
std::string to_string(const Rational& x);

/// Parses an integer or "a/b"; throws std::invalid_argument otherwise.
Rational parse_rational(std::string_view text);

inline double to_double(const Rational& x) {
  return static_cast<double>(x.numerator()) / static_cast<double>(x.denominator());
}

class OutOfScaleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class CriticalExponentError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ExtendedExponent {
 public:
  constexpr ExtendedExponent() = default;

  static ExtendedExponent from_reciprocal(Rational rho) { return ExtendedExponent(rho); }
  static ExtendedExponent infinity() { return ExtendedExponent(Rational(0)); }
  /// p must be nonzero.
  static ExtendedExponent from_p(Rational p);
  static ExtendedExponent from_p(std::int64_t p) { return from_p(Rational(p)); }

  /// Grammar: "inf", an integer, or "a/b" (the value of p, not of 1/p).
  static ExtendedExponent parse(std::string_view text);

  const Rational& rho() const { return rho_; }
  bool is_infinite() const { return rho_ == 0; }
  /// Empty for p = inf.
  std::optional<Rational> p() const;
  /// p as a double; +inf for p = inf.
  double p_value() const;

  /// Exact string form: "inf", integer, or "a/b" in lowest terms.
  std::string to_string() const;

  friend bool operator==(const ExtendedExponent&, const ExtendedExponent&) = default;

 private:
  explicit ExtendedExponent(Rational rho) : rho_(rho) {}
  Rational rho_{0};
};

enum class ExponentClass { lebesgue, sup, holder, out_of_scale };

std::string_view to_string(ExponentClass c);

/// Total over all rationals; the Hoelder band depends on the dimension n.
ExponentClass classify(const ExtendedExponent& e, int n);

struct HolderDecomposition {
  std::int64_t s = 0;         // derivative order
  ExtendedExponent p_tilde;   // inf exactly when s == -n/p
  Rational alpha{0};          // -n/p~; zero (unused) when p~ = inf
};

/// Requires rho < 0; throws std::invalid_argument otherwise.
HolderDecomposition holder_decompose(const ExtendedExponent& e, int n);

/// rho* = rho - 1/n. Throws CriticalExponentError when rho = 1/n.
ExtendedExponent sobolev_conjugate(const ExtendedExponent& e, int n);

struct IteratedConjugate {
  std::optional<ExtendedExponent> value;      // r^(m) on success
  std::optional<std::int64_t> critical_index; // least i < m with r^(i) = n
  ExtendedExponent critical_value;            // r^(i) at the failing index
  bool ok() const { return value.has_value(); }
};

IteratedConjugate iterated_conjugate(const ExtendedExponent& r, int n, std::int64_t m);

/// Outcome of a hypothesis check. Inadmissible tuples carry every failed
/// hypothesis in `reasons`; `notes` carry warnings that do not reject.
struct Admissibility {
  bool admissible = true;
  std::vector<std::string> reasons;
  std::vector<std::string> notes;

  /// Reasons joined with "; ", empty when admissible.
  std::string reason() const;
  void reject(std::string why);
};

struct InterpolationTuple {
  int n = 1;
  ExtendedExponent r;
  ExtendedExponent q;
  Rational theta{0};
  ExtendedExponent p;
};

struct InterpolationSolution {
  InterpolationTuple tuple;
  Admissibility decision;
};

/// Solves 1/p = theta/r + (1 - theta)/q and checks the interpolation
/// theorem's hypotheses (q in [1,inf], theta in (0,1), p and r in scale).
InterpolationSolution interpolation_solve(const ExtendedExponent& r, const ExtendedExponent& q,
                                          const Rational& theta, int n);

struct GnTuple {
  int n = 1;
  std::int64_t j = 1;
  std::int64_t k = 2;
  Rational theta{0};
  ExtendedExponent r;
  ExtendedExponent q;
  ExtendedExponent p;  // derived
  Rational zeta{0};    // derived
};

struct GnSolution {
  GnTuple tuple;
  Admissibility decision;
};

/// zeta = (1 - theta) / (1 - j/k). Requires 1 <= j < k.
Rational zeta_split(const Rational& theta, std::int64_t j, std::int64_t k);

/// Solves 1/p = j/n + theta(1/r - k/n) + (1 - theta)/q together with zeta and
/// checks the corrected Gagliardo-Nirenberg hypotheses including r^(i) != n
/// for 0 <= i <= k-j-1. Throws std::invalid_argument unless 1 <= j < k.
GnSolution gn_solve(int n, std::int64_t j, std::int64_t k, const Rational& theta,
                    const ExtendedExponent& r, const ExtendedExponent& q);

}  // namespace ilab
