#include "ilab/exponent.hpp"

#include <charconv>
#include <limits>

namespace ilab {

std::int64_t floor(const Rational& x) {
  const std::int64_t num = x.numerator();
  const std::int64_t den = x.denominator();  // always > 0 for boost::rational
  std::int64_t q = num / den;
  if (num % den != 0 && num < 0) --q;
  return q;
}

std::string to_string(const Rational& x) {
  if (x.denominator() == 1) return std::to_string(x.numerator());
  return std::to_string(x.numerator()) + "/" + std::to_string(x.denominator());
}

namespace {

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw std::invalid_argument("malformed rational '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text, text));
  const std::int64_t num = parse_int(text.substr(0, slash), text);
  const std::int64_t den = parse_int(text.substr(slash + 1), text);
  if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

ExtendedExponent ExtendedExponent::from_p(Rational p) {
  if (p == 0) throw std::invalid_argument("exponent p = 0 is not on the extended scale");
  return ExtendedExponent(Rational(1) / p);
}

ExtendedExponent ExtendedExponent::parse(std::string_view text) {
  if (text == "inf" || text == "+inf") return infinity();
  return from_p(parse_rational(text));
}

std::optional<Rational> ExtendedExponent::p() const {
  if (rho_ == 0) return std::nullopt;
  return Rational(1) / rho_;
}

double ExtendedExponent::p_value() const {
  if (rho_ == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(rho_.denominator()) / static_cast<double>(rho_.numerator());
}

std::string ExtendedExponent::to_string() const {
  if (rho_ == 0) return "inf";
  return ilab::to_string(Rational(1) / rho_);
}

std::string_view to_string(ExponentClass c) {
  switch (c) {
    case ExponentClass::lebesgue: return "lebesgue";
    case ExponentClass::sup: return "sup";
    case ExponentClass::holder: return "holder";
    case ExponentClass::out_of_scale: return "out-of-scale";
  }
  return "out-of-scale";
}

ExponentClass classify(const ExtendedExponent& e, int n) {
  const Rational& rho = e.rho();
  if (rho == 0) return ExponentClass::sup;
  if (rho > 0) return rho <= 1 ? ExponentClass::lebesgue : ExponentClass::out_of_scale;
  return rho >= Rational(-1, n) ? ExponentClass::holder : ExponentClass::out_of_scale;
}

HolderDecomposition holder_decompose(const ExtendedExponent& e, int n) {
  if (e.rho() >= 0) {
    throw std::invalid_argument("holder_decompose needs p < 0, got p = " + e.to_string());
  }
  const Rational minus_n_over_p = -Rational(n) * e.rho();
  HolderDecomposition d;
  d.s = floor(minus_n_over_p);
  // n/p~ = s + n/p
  const Rational n_over_ptilde = Rational(d.s) - minus_n_over_p;
  d.p_tilde = ExtendedExponent::from_reciprocal(n_over_ptilde / n);
  d.alpha = -n_over_ptilde;
  return d;
}

ExtendedExponent sobolev_conjugate(const ExtendedExponent& e, int n) {
  const Rational step(1, n);
  if (e.rho() == step) {
    throw CriticalExponentError("critical exponent p = n = " + std::to_string(n));
  }
  return ExtendedExponent::from_reciprocal(e.rho() - step);
}

IteratedConjugate iterated_conjugate(const ExtendedExponent& r, int n, std::int64_t m) {
  if (m < 0) throw std::invalid_argument("iteration count must be nonnegative");
  IteratedConjugate out;
  ExtendedExponent current = r;
  for (std::int64_t i = 0; i < m; ++i) {
    if (current.rho() == Rational(1, n)) {
      out.critical_index = i;
      out.critical_value = current;
      return out;
    }
    current = sobolev_conjugate(current, n);
  }
  out.value = current;
  return out;
}

std::string Admissibility::reason() const {
  std::string joined;
  for (const auto& r : reasons) {
    if (!joined.empty()) joined += "; ";
    joined += r;
  }
  return joined;
}

void Admissibility::reject(std::string why) {
  admissible = false;
  reasons.push_back(std::move(why));
}

namespace {

bool is_holder_boundary(const ExtendedExponent& e, int n) {
  return e.rho() == Rational(-1, n);
}

}  // namespace

InterpolationSolution interpolation_solve(const ExtendedExponent& r, const ExtendedExponent& q,
                                          const Rational& theta, int n) {
  if (n < 1) throw std::invalid_argument("dimension must be positive");
  InterpolationSolution out;
  out.tuple.n = n;
  out.tuple.r = r;
  out.tuple.q = q;
  out.tuple.theta = theta;
  out.tuple.p = ExtendedExponent::from_reciprocal(theta * r.rho() + (Rational(1) - theta) * q.rho());

  auto& d = out.decision;
  if (!(theta > 0 && theta < 1)) d.reject("theta not in (0,1)");
  if (!(q.rho() >= 0 && q.rho() <= 1)) d.reject("q not in [1,inf]");
  if (classify(r, n) == ExponentClass::out_of_scale) {
    d.reject("r out of scale: r = " + r.to_string() + " not in (-inf,-n] u [1,inf]");
  }
  if (classify(out.tuple.p, n) == ExponentClass::out_of_scale) {
    d.reject("p out of scale: p = " + out.tuple.p.to_string() + " not in (-inf,-n] u [1,inf]");
  }

  if (is_holder_boundary(r, n)) d.notes.push_back("r = -n boundary accepted (closed range)");
  if (is_holder_boundary(out.tuple.p, n)) d.notes.push_back("p = -n boundary accepted (closed range)");
  if (q.is_infinite() && r.rho() < 0 && out.tuple.p.rho() < 0) {
    d.notes.push_back("q = inf with Hoelder p and r: the pointwise-estimate route assumes q < inf");
  }
  return out;
}

Rational zeta_split(const Rational& theta, std::int64_t j, std::int64_t k) {
  if (j < 1 || j >= k) throw std::invalid_argument("zeta_split needs 1 <= j < k");
  return (Rational(1) - theta) / (Rational(1) - Rational(j, k));
}

GnSolution gn_solve(int n, std::int64_t j, std::int64_t k, const Rational& theta,
                    const ExtendedExponent& r, const ExtendedExponent& q) {
  if (n < 1) throw std::invalid_argument("dimension must be positive");
  if (j < 1 || j >= k) {
    throw std::invalid_argument("derivative orders need 1 <= j < k, got j = " + std::to_string(j) +
                                ", k = " + std::to_string(k));
  }
  GnSolution out;
  auto& t = out.tuple;
  t.n = n;
  t.j = j;
  t.k = k;
  t.theta = theta;
  t.r = r;
  t.q = q;
  t.p = ExtendedExponent::from_reciprocal(Rational(j, n) + theta * (r.rho() - Rational(k, n)) +
                                          (Rational(1) - theta) * q.rho());
  t.zeta = zeta_split(theta, j, k);

  auto& d = out.decision;
  if (theta < Rational(j, k)) d.reject("theta < j/k");
  if (theta > 1) d.reject("theta > 1");
  if (!(q.rho() >= 0 && q.rho() <= 1)) d.reject("q not in [1,inf]");
  // r in (-inf,0) u [1,inf]  <=>  rho_r <= 1
  if (r.rho() > 1) d.reject("r not in (-inf,0) u [1,inf]: r = " + r.to_string());
  // p in (-inf,0) u (1,inf]  <=>  rho_p < 1
  if (t.p.rho() >= 1) d.reject("p not in (-inf,0) u (1,inf]: p = " + t.p.to_string());

  const auto chain = iterated_conjugate(r, n, k - j);
  if (!chain.ok()) {
    d.reject("critical: r^(" + std::to_string(*chain.critical_index) + ") = " +
             chain.critical_value.to_string() + " = n");
  }

  if (r.rho() < 0 && classify(r, n) == ExponentClass::out_of_scale) {
    d.notes.push_back(
        "r in (-n,0): admissible for Gagliardo-Nirenberg, outside the interpolation "
        "inequality's direct range (handled by Hoelder decomposition)");
  }
  if (t.p.rho() < 0 && classify(t.p, n) == ExponentClass::out_of_scale) {
    d.notes.push_back("p in (-n,0): evaluated through Hoelder decomposition");
  }
  return out;
}

}  // namespace ilab
