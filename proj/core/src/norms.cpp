#include "ilab/norms.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "ilab/derivative.hpp"

namespace ilab {

std::string_view to_string(NormKind k) {
  switch (k) {
    case NormKind::lebesgue: return "lebesgue";
    case NormKind::sup: return "sup";
    case NormKind::weak_lorentz: return "weak-lorentz";
    case NormKind::holder: return "holder";
  }
  return "lebesgue";
}

std::string_view to_string(NormMethod m) {
  switch (m) {
    case NormMethod::exact_sum: return "exact-sum";
    case NormMethod::naive_pairs: return "naive-pairs";
    case NormMethod::branch_and_bound: return "branch-and-bound";
  }
  return "exact-sum";
}

nlohmann::json NormValue::to_json() const {
  nlohmann::json j;
  j["kind"] = std::string(to_string(kind));
  switch (kind) {
    case NormKind::lebesgue: j["p"] = exponent; break;
    case NormKind::weak_lorentz: j["q"] = exponent; break;
    case NormKind::holder:
      j["s"] = s;
      j["ptilde"] = ptilde;
      if (!alpha.empty()) j["alpha"] = alpha;
      break;
    case NormKind::sup: break;
  }
  if (derivative_order != 0) j["derivative_order"] = derivative_order;
  j["value"] = value;
  j["method"] = std::string(to_string(method));
  nlohmann::json shape = nlohmann::json::array(), spacing = nlohmann::json::array();
  for (int a = 0; a < grid.n; ++a) {
    shape.push_back(grid.shape[a]);
    spacing.push_back(grid.spacing[a]);
  }
  j["grid"] = {{"shape", shape}, {"spacing", spacing}};
  if (pairs) {
    j["pairs"] = {{"evaluated", pairs->evaluated_pairs},
                  {"total", pairs->total_pairs},
                  {"box_pairs", pairs->box_pairs}};
  }
  return j;
}

namespace {

std::string format_exponent(double p) {
  if (std::isinf(p)) return "inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, p);
  return std::string(buf, res.ptr);
}

double max_sample(std::span<const double> s) {
  double m = 0.0;
  for (double v : s) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

NormValue lebesgue_norm(const GridFunction& u, double p) {
  if (std::isnan(p) || p < 1.0) {
    throw OutOfScaleError("Lebesgue exponent p = " + format_exponent(p) +
                          " is outside [1, inf]; quasi-norms are not evaluated");
  }
  if (std::isinf(p)) return sup_norm(u);
  NormValue out;
  out.kind = NormKind::lebesgue;
  out.exponent = format_exponent(p);
  out.grid = u.geometry();
  const auto samples = u.samples();
  const double m = max_sample(samples);
  if (m == 0.0 || u.factor() == 0.0) return out;
  double sum = 0.0;
  for (double v : samples) sum += std::pow(std::abs(v) / m, p);
  out.value = std::abs(u.factor()) * (m * std::pow(sum * u.geometry().cell_volume(), 1.0 / p));
  return out;
}

NormValue sup_norm(const GridFunction& u) {
  NormValue out;
  out.kind = NormKind::sup;
  out.exponent = "inf";
  out.grid = u.geometry();
  out.value = u.max_abs();
  return out;
}

double distribution_function(const GridFunction& u, double t) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (std::abs(u.value(i)) > t) ++count;
  }
  return static_cast<double>(count) * u.geometry().cell_volume();
}

NormValue weak_lorentz_norm(const GridFunction& u, double q) {
  if (std::isnan(q) || q < 1.0) {
    throw OutOfScaleError("weak Lorentz exponent q = " + format_exponent(q) + " must be >= 1");
  }
  if (std::isinf(q)) {
    NormValue out = sup_norm(u);
    out.kind = NormKind::weak_lorentz;
    return out;
  }
  NormValue out;
  out.kind = NormKind::weak_lorentz;
  out.exponent = format_exponent(q);
  out.grid = u.geometry();

  std::vector<double> mags;
  mags.reserve(u.size());
  for (double v : u.samples()) {
    if (v != 0.0) mags.push_back(std::abs(v));
  }
  std::sort(mags.begin(), mags.end(), std::greater<>());
  const double vol = u.geometry().cell_volume();
  double best = 0.0;
  for (std::size_t i = 0; i < mags.size(); ++i) {
    best = std::max(best, mags[i] * std::pow(static_cast<double>(i + 1) * vol, 1.0 / q));
  }
  out.value = std::abs(u.factor()) * best;
  return out;
}

NormValue extended_norm_of_derivative(const GridFunction& u, int order, const ExtendedExponent& p,
                                      const ExtendedNormOptions& options) {
  if (order < 0) throw std::invalid_argument("derivative order must be nonnegative");
  const int n = u.dim();
  const ExponentClass cls = classify(p, n);
  const Rational& rho = p.rho();

  auto magnitude_of = [&](int k) {
    return k == 0 ? u : gradient(u, k, options.max_derivative_order).magnitude();
  };

  if (rho > 1) {
    throw OutOfScaleError("p = " + p.to_string() + " lies in (0,1): outside the norm scale");
  }
  if (rho >= 0) {
    NormValue out = lebesgue_norm(magnitude_of(order), p.p_value());
    if (out.kind == NormKind::lebesgue) out.exponent = p.to_string();
    out.derivative_order = order;
    return out;
  }
  if (cls == ExponentClass::out_of_scale && !options.allow_below_holder_range) {
    throw OutOfScaleError("p = " + p.to_string() + " lies in (-n,0) for n = " + std::to_string(n) +
                          ": out-of-scale for the extended norm");
  }

  const HolderDecomposition d = holder_decompose(p, n);
  const int total = order + static_cast<int>(d.s);
  NormValue out;
  out.kind = NormKind::holder;
  out.s = d.s;
  out.ptilde = d.p_tilde.to_string();
  out.derivative_order = order;
  out.grid = u.geometry();

  if (d.p_tilde.is_infinite()) {
    out.value = magnitude_of(total).max_abs();
    out.method = NormMethod::exact_sum;
    return out;
  }

  out.alpha = to_string(d.alpha);
  const double alpha = to_double(d.alpha);
  HolderResult r;
  if (total == 0) {
    const FieldRef f = FieldRef::of(u);
    r = options.method == HolderMethod::naive ? holder_seminorm_naive(f, alpha)
                                              : holder_seminorm_bb(f, alpha);
  } else {
    const DerivativeTensor t = gradient(u, total, options.max_derivative_order);
    const FieldRef f = FieldRef::of(t);
    r = options.method == HolderMethod::naive ? holder_seminorm_naive(f, alpha)
                                              : holder_seminorm_bb(f, alpha);
  }
  out.value = r.value;
  out.method = options.method == HolderMethod::naive ? NormMethod::naive_pairs
                                                     : NormMethod::branch_and_bound;
  out.pairs = r;
  return out;
}

NormValue extended_norm(const GridFunction& u, const ExtendedExponent& p,
                        const ExtendedNormOptions& options) {
  return extended_norm_of_derivative(u, 0, p, options);
}

ScalingReport scaling_exponent_check(const GridFunction& u, const ExtendedExponent& p,
                                     const Rational& lambda, const ExtendedNormOptions& options) {
  ScalingReport rep;
  rep.norm_before = extended_norm(u, p, options).value;
  rep.norm_after = extended_norm(dilate(u, lambda), p, options).value;
  const double log_lambda = std::log(static_cast<double>(lambda.numerator())) -
                            std::log(static_cast<double>(lambda.denominator()));
  rep.predicted_log_shift = -to_double(Rational(u.dim()) * p.rho()) * log_lambda;
  if (rep.norm_before == 0.0 || rep.norm_after == 0.0) {
    rep.degenerate = true;
    rep.residual = (rep.norm_before == rep.norm_after) ? 0.0 : std::numeric_limits<double>::infinity();
    return rep;
  }
  rep.residual = std::abs(std::log(rep.norm_after) - std::log(rep.norm_before) - rep.predicted_log_shift);
  return rep;
}

}  // namespace ilab
