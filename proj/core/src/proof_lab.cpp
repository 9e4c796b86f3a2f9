#include "ilab/proof_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ilab/holder.hpp"
#include "ilab/norms.hpp"

namespace ilab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

nlohmann::json grid_json(const GridGeometry& g) {
  nlohmann::json shape = nlohmann::json::array(), spacing = nlohmann::json::array();
  for (int a = 0; a < g.n; ++a) {
    shape.push_back(g.shape[a]);
    spacing.push_back(g.spacing[a]);
  }
  return {{"n", g.n}, {"shape", shape}, {"spacing", spacing}};
}

void require_holder(const ExtendedExponent& r, int n, const char* name) {
  if (classify(r, n) != ExponentClass::holder) {
    throw OutOfScaleError(std::string(name) + " = " + r.to_string() + " must lie in (-inf, -n] for n = " +
                          std::to_string(n));
  }
}

void require_finite_lebesgue(const ExtendedExponent& p, const char* name) {
  if (p.rho() <= 0 || p.rho() > 1) {
    throw OutOfScaleError(std::string(name) + " = " + p.to_string() + " must lie in [1, inf)");
  }
}

double holder_alpha(const ExtendedExponent& r, int n) { return -to_double(Rational(n) * r.rho()); }

// sum |v_i|^p * cell volume over logical values
double power_sum(const GridFunction& u, double p) {
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += std::pow(std::abs(u.value(i)), p);
  return sum * u.geometry().cell_volume();
}

BoundCheck make_check(std::string name, double lhs, double rhs, nlohmann::json params,
                      const GridGeometry& g) {
  BoundCheck c;
  c.check = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? kInf : 0.0);
  c.params = std::move(params);
  c.grid = g;
  return c;
}

// Ascending magnitudes, for O(log N) superlevel measures.
struct SortedMagnitudes {
  std::vector<double> mags;
  double vol = 0.0;

  explicit SortedMagnitudes(const GridFunction& u) : vol(u.geometry().cell_volume()) {
    mags.reserve(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) mags.push_back(std::abs(u.value(i)));
    std::sort(mags.begin(), mags.end());
  }
  double superlevel(double s) const {
    const auto it = std::upper_bound(mags.begin(), mags.end(), s);
    return static_cast<double>(mags.end() - it) * vol;
  }
  double max() const { return mags.empty() ? 0.0 : mags.back(); }
};

struct BalanceMap {
  const SortedMagnitudes& m;
  double p, q, rho_r;
  // log of s^(p-q) lambda(s)^(p/r - 1)
  double log_rhs(double s) const {
    const double lambda = m.superlevel(s);
    if (lambda == 0.0) return kInf;
    return (p - q) * std::log(s) + (p * rho_r - 1.0) * std::log(lambda);
  }
};

}  // namespace

double holder_branch_norm(const GridFunction& u, const ExtendedExponent& r) {
  require_holder(r, u.dim(), "r");
  return holder_seminorm_bb(FieldRef::of(u), holder_alpha(r, u.dim())).value;
}

TruncationPair truncate(const GridFunction& u, double s) {
  if (!(s > 0.0) || std::isinf(s)) throw std::invalid_argument("truncation level must be positive and finite");
  std::vector<double> low(u.size()), high(u.size());
  std::size_t above = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double v = u.value(i);
    const double a = std::abs(v);
    if (a > s) {
      low[i] = std::copysign(s, v);
      high[i] = v - low[i];
      ++above;
    } else {
      low[i] = v;
      high[i] = 0.0;
    }
  }
  TruncationPair out{u, s, GridFunction(u.geometry(), std::move(low)),
                     GridFunction(u.geometry(), std::move(high)),
                     static_cast<double>(above) * u.geometry().cell_volume()};
  return out;
}

nlohmann::json BoundCheck::to_json() const {
  return {{"check", check}, {"params", params}, {"lhs", lhs}, {"rhs", rhs}, {"ratio", ratio},
          {"grid", grid_json(grid)}};
}

BoundCheck truncation_split_check(const GridFunction& u, double s, const ExtendedExponent& p) {
  require_finite_lebesgue(p, "p");
  const double pv = p.p_value();
  const TruncationPair t = truncate(u, s);
  const double lhs = power_sum(u, pv);
  const double rhs = std::pow(2.0, pv - 1.0) * (power_sum(t.tail, pv) + power_sum(t.truncated, pv));
  return make_check("truncation-split", lhs, rhs, {{"s", s}, {"p", p.to_string()}}, u.geometry());
}

BoundCheck layer_cake_tail_bound(const GridFunction& u, double s, const ExtendedExponent& p,
                                 const ExtendedExponent& r) {
  require_finite_lebesgue(p, "p");
  require_holder(r, u.dim(), "r");
  const TruncationPair t = truncate(u, s);
  if (t.superlevel_measure == 0.0) {
    throw DegenerateInputError("superlevel set {|u| > s} is empty at s = " + std::to_string(s));
  }
  const double pv = p.p_value();
  const double lhs = power_sum(t.tail, pv);
  const double hr = holder_branch_norm(u, r);
  const double expo = 1.0 - to_double(r.rho() / p.rho());  // 1 - p/r
  const double rhs = std::pow(hr, pv) * std::pow(t.superlevel_measure, expo);
  return make_check("layer-cake-tail", lhs, rhs,
                    {{"s", s}, {"p", p.to_string()}, {"r", r.to_string()}, {"holder_norm", hr},
                     {"superlevel_measure", t.superlevel_measure}},
                    u.geometry());
}

BoundCheck tail_moment_bound(const GridFunction& u, double s, const ExtendedExponent& p,
                             const ExtendedExponent& q) {
  require_finite_lebesgue(p, "p");
  require_finite_lebesgue(q, "q");
  if (p.rho() >= q.rho()) throw std::invalid_argument("tail moment bound needs p > q");
  const TruncationPair t = truncate(u, s);
  const double pv = p.p_value(), qv = q.p_value();
  const double lhs = power_sum(t.truncated, pv);
  const double w = weak_lorentz_norm(u, qv).value;
  const double rhs = pv / (pv - qv) * std::pow(s, pv - qv) * std::pow(w, qv);
  return make_check("tail-moment", lhs, rhs,
                    {{"s", s}, {"p", p.to_string()}, {"q", q.to_string()}, {"weak_norm", w}},
                    u.geometry());
}

nlohmann::json BalanceResult::to_json() const {
  return {{"check", "balance-s"}, {"s", s},           {"lhs", lhs},
          {"rhs", rhs},           {"residual", residual}, {"step", step},
          {"bracket", {s_lo, s_hi}}, {"boundary", boundary},
          {"monotone_verified", monotone_verified}, {"evaluations", evaluations}};
}

double balance_rhs(const GridFunction& u, double s, const ExtendedExponent& p,
                   const ExtendedExponent& q, const ExtendedExponent& r) {
  const SortedMagnitudes m(u);
  const BalanceMap f{m, p.p_value(), q.p_value(), to_double(r.rho())};
  return std::exp(f.log_rhs(s));
}

BalanceResult balance_s(const GridFunction& u, const ExtendedExponent& p, const ExtendedExponent& q,
                        const ExtendedExponent& r) {
  require_finite_lebesgue(p, "p");
  require_finite_lebesgue(q, "q");
  require_holder(r, u.dim(), "r");
  if (p.rho() >= q.rho()) throw std::invalid_argument("balance needs p > q");
  if (u.is_zero()) throw DegenerateInputError("balance is undefined for the zero function");

  const double pv = p.p_value(), qv = q.p_value();
  const double hr = holder_branch_norm(u, r);
  const double w = weak_lorentz_norm(u, qv).value;
  if (hr == 0.0 || w == 0.0) throw DegenerateInputError("a zero norm leaves the balance undefined");

  const SortedMagnitudes m(u);
  const BalanceMap f{m, pv, qv, to_double(r.rho())};
  const double log_lhs = pv * std::log(hr) - qv * std::log(w);

  BalanceResult out;
  out.lhs = std::exp(log_lhs);
  std::vector<std::pair<double, double>> trace;
  auto eval = [&](double s) {
    const double g = f.log_rhs(s);
    trace.emplace_back(s, g);
    ++out.evaluations;
    return g;
  };

  double positive_min = kInf;
  for (double v : m.mags) {
    if (v > 0.0) {
      positive_min = v;
      break;
    }
  }
  const double top = m.max();
  double hi = top;  // superlevel set empty: rhs = +inf
  double lo = positive_min * 0.5;
  double g_lo = eval(lo);
  for (int i = 0; i < 2000 && g_lo > log_lhs; ++i) {
    lo *= 0.5;
    g_lo = eval(lo);
  }
  if (g_lo > log_lhs) {
    out.boundary = true;
  }
  // Largest finite value of the map sits just below the top magnitude.
  const double below_top = std::nextafter(top, 0.0);
  if (eval(below_top) < log_lhs) out.boundary = true;

  double g_hi = kInf;
  if (!out.boundary) {
    for (int i = 0; i < 400; ++i) {
      const double mid = std::sqrt(lo) * std::sqrt(hi);
      if (!(mid > lo && mid < hi)) break;
      const double g = eval(mid);
      if (g <= log_lhs) {
        lo = mid;
        g_lo = g;
      } else {
        hi = mid;
        g_hi = g;
      }
    }
  } else {
    g_hi = f.log_rhs(hi);
  }

  out.s_lo = lo;
  out.s_hi = hi;
  const double r_lo = std::abs(g_lo - log_lhs);
  const double r_hi = std::abs(g_hi - log_lhs);
  if (r_hi < r_lo) {
    out.s = hi;
    out.rhs = std::exp(g_hi);
    out.residual = r_hi;
  } else {
    out.s = lo;
    out.rhs = std::exp(g_lo);
    out.residual = r_lo;
  }
  out.step = std::abs(g_hi - g_lo);

  std::sort(trace.begin(), trace.end());
  out.monotone_verified = std::adjacent_find(trace.begin(), trace.end(), [](const auto& a, const auto& b) {
                            return b.second < a.second;
                          }) == trace.end();
  return out;
}

nlohmann::json PointwiseReport::to_json() const {
  return {{"check", "pointwise-estimate"}, {"lhs", max_value},
          {"rhs", bound},                  {"ratio", empirical_constant},
          {"weak_norm", weak_norm},        {"holder_norm", holder_norm},
          {"degenerate", degenerate}};
}

PointwiseReport pointwise_estimate_check(const GridFunction& u, const ExtendedExponent& q,
                                         const ExtendedExponent& r) {
  require_finite_lebesgue(q, "q");
  require_holder(r, u.dim(), "r");
  if (u.is_zero()) throw DegenerateInputError("pointwise estimate is vacuous for the zero function");
  PointwiseReport rep;
  rep.max_value = u.max_abs();
  rep.weak_norm = weak_lorentz_norm(u, q.p_value()).value;
  rep.holder_norm = holder_branch_norm(u, r);
  // q/(q-r) = rho_r/(rho_r - rho_q), r/(r-q) = rho_q/(rho_q - rho_r)
  const Rational gap = r.rho() - q.rho();
  const double a = to_double(r.rho() / gap);
  const double b = to_double(-q.rho() / gap);
  if (rep.holder_norm == 0.0) {
    rep.degenerate = true;
    rep.bound = 0.0;
    rep.empirical_constant = kInf;
    return rep;
  }
  rep.bound = std::pow(rep.weak_norm, a) * std::pow(rep.holder_norm, b);
  rep.empirical_constant = rep.max_value / rep.bound;
  return rep;
}

BallInclusionReport ball_inclusion_check(const GridFunction& u, const ExtendedExponent& r,
                                         std::size_t node, double holder_norm, double radius_scale) {
  require_holder(r, u.dim(), "r");
  if (node >= u.size()) throw std::out_of_range("node index outside the grid");
  const double ux = u.value(node);
  if (ux == 0.0) throw std::invalid_argument("ball inclusion needs u(x) != 0");
  if (holder_norm < 0.0) holder_norm = holder_branch_norm(u, r);

  BallInclusionReport rep;
  rep.node = node;
  if (holder_norm == 0.0) {
    rep.degenerate = true;
    return rep;
  }
  const GridGeometry& g = u.geometry();
  const double alpha = holder_alpha(r, g.n);
  const double half = std::abs(ux) / 2.0;
  rep.radius = radius_scale * std::pow(half / holder_norm, 1.0 / alpha);

  const Index x = g.unravel(node);
  Index lo{0, 0, 0}, hi{0, 0, 0};
  for (int a = 0; a < g.n; ++a) {
    const double reach = std::floor(rep.radius / g.spacing[a]);
    const std::size_t k = reach >= double(g.shape[a]) ? g.shape[a] : static_cast<std::size_t>(reach);
    lo[a] = x[a] >= k ? x[a] - k : 0;
    hi[a] = std::min(g.shape[a] - 1, x[a] + k);
  }
  Index y{0, 0, 0};
  for (y[0] = lo[0]; y[0] <= hi[0]; ++y[0]) {
    for (y[1] = lo[1]; y[1] <= hi[1]; ++y[1]) {
      for (y[2] = lo[2]; y[2] <= hi[2]; ++y[2]) {
        if (node_distance(g, x, y) >= rep.radius) continue;
        ++rep.checked;
        if (std::abs(u.at(y)) <= half) ++rep.violations;
      }
    }
  }
  return rep;
}

nlohmann::json SplitReport::to_json() const {
  return {{"check", "split-seminorm"},
          {"s", s},
          {"near", near},
          {"far", far},
          {"near_bound", near_bound},
          {"far_bound", far_bound},
          {"far_constant", far_constant},
          {"full", full},
          {"near_empty", near_empty},
          {"far_vacuous", far_vacuous},
          {"optimal_s", optimal_s},
          {"optimal_near", optimal_near},
          {"optimal_far", optimal_far},
          {"interpolation_rhs", interpolation_rhs},
          {"optimal_factor", optimal_factor}};
}

SplitReport split_seminorm_check(const GridFunction& u, const ExtendedExponent& p,
                                 const ExtendedExponent& r, const ExtendedExponent& q, double s) {
  const GridGeometry& g = u.geometry();
  require_holder(p, g.n, "p");
  require_holder(r, g.n, "r");
  require_finite_lebesgue(q, "q");
  if (!(s > 0.0)) throw std::invalid_argument("split distance must be positive");
  if (u.is_zero()) throw DegenerateInputError("split is vacuous for the zero function");

  const FieldRef f = FieldRef::of(u);
  const double alpha_p = holder_alpha(p, g.n);
  const double alpha_r = holder_alpha(r, g.n);
  const double hr = holder_branch_norm(u, r);
  const double w = weak_lorentz_norm(u, q.p_value()).value;
  if (hr == 0.0 || w == 0.0) throw DegenerateInputError("a zero norm leaves the split undefined");

  const Rational gap = r.rho() - q.rho();
  const double a = to_double(r.rho() / gap);
  const double b = to_double(-q.rho() / gap);
  const double pointwise = std::pow(w, a) * std::pow(hr, b);

  auto halves = [&](double at, double& near, double& far) {
    near = holder_seminorm_bb(f, alpha_p, PairWindow{0.0, at}).value;
    far = holder_seminorm_bb(f, alpha_p, PairWindow{at, kInf}).value;
  };

  SplitReport rep;
  rep.s = s;
  halves(s, rep.near, rep.far);
  rep.full = holder_seminorm_bb(f, alpha_p).value;
  rep.near_bound = hr * std::pow(s, alpha_r - alpha_p);
  rep.far_bound = std::pow(s, -alpha_p) * pointwise;
  rep.far_constant = rep.far / rep.far_bound;
  rep.near_empty = s < g.min_spacing();
  rep.far_vacuous = s >= g.diameter();

  // s* = (w / hr)^(1 / (n (rho_q - rho_r)))
  const double e = 1.0 / to_double(Rational(g.n) * (q.rho() - r.rho()));
  rep.optimal_s = std::pow(w / hr, e);
  halves(rep.optimal_s, rep.optimal_near, rep.optimal_far);
  const double theta = to_double((p.rho() - q.rho()) / gap);
  rep.interpolation_rhs = std::pow(hr, theta) * std::pow(w, 1.0 - theta);
  rep.optimal_factor = (rep.optimal_near + rep.optimal_far) / rep.interpolation_rhs;
  return rep;
}

}  // namespace ilab
