#include "ilab/extremizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace ilab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

class Evaluator {
 public:
  Evaluator(const std::function<double(const std::vector<double>&)>& f, std::vector<double> lo,
            std::vector<double> hi, std::size_t budget, SearchResult& out)
      : f_(f), lo_(std::move(lo)), hi_(std::move(hi)), budget_(budget), out_(out) {}

  bool exhausted() const { return out_.evaluations + held_ >= budget_; }
  std::size_t remaining() const { return budget_ - out_.evaluations - held_; }
  /// Keeps `k` evaluations back from the search until release().
  void hold(std::size_t k) { held_ = std::min(k, budget_ - out_.evaluations); }
  void release() { held_ = 0; }

  std::optional<SearchPoint> operator()(std::vector<double> x) {
    if (exhausted()) return std::nullopt;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo_[i], hi_[i]);
    double v = kNegInf;
    try {
      v = f_(x);
      if (std::isnan(v)) v = kNegInf;
    } catch (const std::invalid_argument&) {
      v = kNegInf;
    } catch (const std::domain_error&) {
      v = kNegInf;
    }
    ++out_.evaluations;
    SearchPoint p{std::move(x), v};
    out_.trace.push_back(p);
    if (out_.trace.size() == 1 || v > out_.best.value) out_.best = p;
    return p;
  }

 private:
  const std::function<double(const std::vector<double>&)>& f_;
  std::vector<double> lo_, hi_;
  std::size_t budget_;
  std::size_t held_ = 0;
  SearchResult& out_;
};

std::vector<double> affine(const std::vector<double>& a, const std::vector<double>& b, double t) {
  // a + t (b - a)
  std::vector<double> x(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) x[i] = a[i] + t * (b[i] - a[i]);
  return x;
}

double relative_spread(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) return std::numeric_limits<double>::infinity();
  const double scale = std::max(std::abs(lo), std::abs(hi));
  return scale == 0.0 ? 0.0 : (hi - lo) / scale;
}

}  // namespace

SearchResult maximize(const std::function<double(const std::vector<double>&)>& f,
                      const std::vector<double>& x0, const std::vector<double>& lo,
                      const std::vector<double>& hi, const SearchOptions& options) {
  if (options.budget < 1) throw std::invalid_argument("search budget must be at least 1");
  if (x0.size() != lo.size() || x0.size() != hi.size()) {
    throw std::invalid_argument("search bounds and start point differ in length");
  }
  const std::size_t d = x0.size();
  SearchResult out;
  out.flat.assign(d, false);
  Evaluator eval(f, lo, hi, options.budget, out);
  // Two probes per coordinate for the flatness test, when the budget still
  // leaves room for a simplex step beyond the start.
  if (options.budget >= 3 * d + 2) eval.hold(2 * d);

  std::vector<SearchPoint> simplex;
  simplex.push_back(*eval(x0));
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<double> x = simplex[0].x;
    const double step = 0.25 * (hi[i] - lo[i]);
    x[i] = x[i] + step <= hi[i] ? x[i] + step : x[i] - step;
    auto p = eval(x);
    if (!p) break;
    simplex.push_back(*p);
  }

  const auto by_value = [](const SearchPoint& a, const SearchPoint& b) { return a.value > b.value; };
  while (simplex.size() == d + 1 && d > 0 && !eval.exhausted()) {
    std::stable_sort(simplex.begin(), simplex.end(), by_value);
    std::vector<double> centroid(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t c = 0; c < d; ++c) centroid[c] += simplex[i].x[c] / double(d);
    }
    SearchPoint& worst = simplex[d];
    auto reflected = eval(affine(centroid, worst.x, -1.0));
    if (!reflected) break;
    if (reflected->value > simplex[0].value) {
      auto expanded = eval(affine(centroid, worst.x, -2.0));
      worst = (expanded && expanded->value > reflected->value) ? *expanded : *reflected;
      continue;
    }
    if (reflected->value > simplex[d - 1].value) {
      worst = *reflected;
      continue;
    }
    const bool outside = reflected->value > worst.value;
    auto contracted = eval(affine(centroid, outside ? reflected->x : worst.x, 0.5));
    if (!contracted) break;
    if (contracted->value > std::max(worst.value, outside ? reflected->value : kNegInf)) {
      worst = *contracted;
      continue;
    }
    for (std::size_t i = 1; i <= d; ++i) {
      auto shrunk = eval(affine(simplex[0].x, simplex[i].x, 0.5));
      if (!shrunk) break;
      simplex[i] = *shrunk;
    }
    // A simplex that has collapsed to a point cannot move any further.
    double extent = 0.0;
    for (std::size_t i = 1; i <= d; ++i) {
      for (std::size_t c = 0; c < d; ++c) {
        const double range = hi[c] - lo[c];
        if (range > 0.0) extent = std::max(extent, std::abs(simplex[i].x[c] - simplex[0].x[c]) / range);
      }
    }
    if (extent < 1e-9) break;
  }

  // Flatness: vary one coordinate at a time around the best point.
  eval.release();
  const SearchPoint best = out.best;
  for (std::size_t c = 0; c < d; ++c) {
    if (eval.remaining() < 2) {
      // Fall back to the spread of the whole trace.
      double mn = std::numeric_limits<double>::infinity(), mx = kNegInf;
      bool varied = false;
      for (const auto& p : out.trace) {
        mn = std::min(mn, p.value);
        mx = std::max(mx, p.value);
        varied = varied || p.x[c] != best.x[c];
      }
      out.flat[c] = varied && relative_spread(mn, mx) <= options.flat_tolerance;
      continue;
    }
    std::vector<double> a = best.x, b = best.x;
    a[c] = lo[c];
    b[c] = hi[c];
    const double va = eval(a)->value, vb = eval(b)->value;
    const double mn = std::min({va, vb, best.value}), mx = std::max({va, vb, best.value});
    out.flat[c] = lo[c] < hi[c] && relative_spread(mn, mx) <= options.flat_tolerance;
  }
  return out;
}

nlohmann::json ExtremizerResult::to_json() const {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& p : search.trace) {
    nlohmann::json params;
    for (std::size_t i = 0; i < names.size(); ++i) params[names[i]] = p.x[i];
    trace.push_back({{"params", params},
                     {"ratio", std::isfinite(p.value) ? nlohmann::json(p.value) : nlohmann::json(nullptr)}});
  }
  return {{"best_params", best_params},
          {"best", best.to_json()},
          {"evaluations", search.evaluations},
          {"flat_directions", flat_directions},
          {"trace", trace},
          {"note", "best ratio is an empirical lower bound on the inequality constant"}};
}

ExtremizerResult extremizer_search(const InequalityInstance& inst, const FamilySpec& family,
                                   const SearchOptions& options) {
  if (!inst.admissible()) throw InadmissibleError("inadmissible instance: " + inst.decision().reason());
  family.validate();
  ExtremizerResult res;
  std::vector<double> lo, hi, x0;
  ParamValues fixed;
  for (const auto& [name, range] : family.params) {
    if (range.fixed()) {
      fixed[name] = range.lo;
      continue;
    }
    res.names.push_back(name);
    lo.push_back(range.lo);
    hi.push_back(range.hi);
    x0.push_back(0.5 * (range.lo + range.hi));
  }
  auto params_of = [&](const std::vector<double>& x) {
    ParamValues p = fixed;
    for (std::size_t i = 0; i < x.size(); ++i) p[res.names[i]] = x[i];
    return p;
  };
  auto objective = [&](const std::vector<double>& x) {
    const GeneratedSample g = generate_with(family, params_of(x), options.seed);
    const RatioRecord r = ratio(g.u, inst);
    return r.degenerate ? kNegInf : r.ratio;
  };
  res.search = maximize(objective, x0, lo, hi, options);
  res.best_params = params_of(res.search.best.x);
  res.best = ratio(generate_with(family, res.best_params, options.seed).u, inst);
  for (std::size_t i = 0; i < res.names.size(); ++i) {
    if (res.search.flat[i]) res.flat_directions.push_back(res.names[i]);
  }
  return res;
}

}  // namespace ilab
