#include "ilab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace ilab {

namespace {

std::string text_of(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("instance is missing \"") + key + "\"");
  const auto& v = j.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  throw std::invalid_argument(std::string("\"") + key +
                              "\" must be an integer or a string such as \"3/2\" or \"inf\"");
}

nlohmann::json grid_json(const GridGeometry& g) {
  nlohmann::json shape = nlohmann::json::array(), spacing = nlohmann::json::array();
  for (int a = 0; a < g.n; ++a) {
    shape.push_back(g.shape[a]);
    spacing.push_back(g.spacing[a]);
  }
  return {{"n", g.n}, {"shape", shape}, {"spacing", spacing}};
}

}  // namespace

std::string_view to_string(InequalityKind k) {
  return k == InequalityKind::interpolation ? "interpolation" : "gn";
}

InequalityInstance InequalityInstance::interpolation(int n, const ExtendedExponent& r,
                                                     const ExtendedExponent& q, const Rational& theta) {
  const InterpolationSolution s = interpolation_solve(r, q, theta, n);
  InequalityInstance inst;
  inst.kind_ = InequalityKind::interpolation;
  inst.n_ = n;
  inst.theta_ = theta;
  inst.r_ = r;
  inst.q_ = q;
  inst.p_ = s.tuple.p;
  inst.decision_ = s.decision;
  return inst;
}

InequalityInstance InequalityInstance::gn(int n, std::int64_t j, std::int64_t k, const Rational& theta,
                                          const ExtendedExponent& r, const ExtendedExponent& q) {
  const GnSolution s = gn_solve(n, j, k, theta, r, q);
  InequalityInstance inst;
  inst.kind_ = InequalityKind::gn;
  inst.n_ = n;
  inst.j_ = j;
  inst.k_ = k;
  inst.theta_ = theta;
  inst.r_ = r;
  inst.q_ = q;
  inst.p_ = s.tuple.p;
  inst.zeta_ = s.tuple.zeta;
  inst.decision_ = s.decision;
  return inst;
}

InequalityInstance InequalityInstance::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("instance must be a JSON object");
  const std::string kind = j.value("kind", std::string("interpolation"));
  if (!j.contains("n") || !j.at("n").is_number_integer()) {
    throw std::invalid_argument("instance needs an integer \"n\"");
  }
  const int n = j.at("n").get<int>();
  if (n < 1 || n > kMaxDim) throw std::invalid_argument("instance dimension must be 1..3");
  const ExtendedExponent r = ExtendedExponent::parse(text_of(j, "r"));
  const ExtendedExponent q = ExtendedExponent::parse(text_of(j, "q"));
  const Rational theta = parse_rational(text_of(j, "theta"));

  InequalityInstance inst;
  if (kind == "interpolation") {
    inst = interpolation(n, r, q, theta);
  } else if (kind == "gn") {
    if (!j.contains("j") || !j.contains("k")) throw std::invalid_argument("gn instance needs \"j\" and \"k\"");
    inst = gn(n, j.at("j").get<std::int64_t>(), j.at("k").get<std::int64_t>(), theta, r, q);
  } else {
    throw std::invalid_argument("unknown instance kind '" + kind + "' (expected interpolation or gn)");
  }
  if (j.contains("p")) {
    const ExtendedExponent given = ExtendedExponent::parse(text_of(j, "p"));
    if (!(given == inst.p_)) {
      throw std::invalid_argument("given p = " + given.to_string() + " differs from the solved p = " +
                                  inst.p_.to_string());
    }
  }
  return inst;
}

nlohmann::json InequalityInstance::to_json() const {
  nlohmann::json j;
  j["kind"] = std::string(to_string(kind_));
  j["n"] = n_;
  if (kind_ == InequalityKind::gn) {
    j["j"] = j_;
    j["k"] = k_;
    j["zeta"] = ilab::to_string(zeta_);
  }
  j["theta"] = ilab::to_string(theta_);
  j["r"] = r_.to_string();
  j["q"] = q_.to_string();
  j["p"] = p_.to_string();
  j["rhs_weak"] = rhs_weak();
  j["admissible"] = decision_.admissible;
  if (!decision_.admissible) j["reason"] = decision_.reason();
  if (!decision_.notes.empty()) j["notes"] = decision_.notes;
  return j;
}

nlohmann::json RatioRecord::to_json() const {
  return {{"lhs", lhs},     {"rhs_first", rhs_first}, {"rhs_second", rhs_second},
          {"rhs", rhs},     {"ratio", ratio},         {"degenerate", degenerate}};
}

RatioRecord ratio(const GridFunction& u, const InequalityInstance& inst, const RatioOptions& options) {
  if (!inst.admissible()) throw InadmissibleError("inadmissible instance: " + inst.decision().reason());
  if (u.dim() != inst.n()) {
    throw std::invalid_argument("grid dimension " + std::to_string(u.dim()) +
                                " does not match instance dimension " + std::to_string(inst.n()));
  }
  ExtendedNormOptions norm_options;
  norm_options.method = options.method;
  norm_options.max_derivative_order = options.max_derivative_order;

  RatioRecord rec;
  if (inst.kind() == InequalityKind::interpolation) {
    rec.lhs = extended_norm(u, inst.p(), norm_options).value;
    rec.rhs_first = extended_norm(u, inst.r(), norm_options).value;
    rec.rhs_second = weak_lorentz_norm(u, inst.q().p_value()).value;
  } else {
    if (inst.k() > options.max_derivative_order) {
      throw std::invalid_argument("derivative order k = " + std::to_string(inst.k()) +
                                  " exceeds the configured maximum " +
                                  std::to_string(options.max_derivative_order));
    }
    // p in (-n, 0) is admissible here and goes through the Hoelder decomposition.
    ExtendedNormOptions lhs_options = norm_options;
    lhs_options.allow_below_holder_range = true;
    rec.lhs = extended_norm_of_derivative(u, static_cast<int>(inst.j()), inst.p(), lhs_options).value;
    rec.rhs_first = extended_norm_of_derivative(u, static_cast<int>(inst.k()), inst.r(), lhs_options).value;
    rec.rhs_second = extended_norm(u, inst.q(), norm_options).value;
  }
  const double theta = to_double(inst.theta()) + options.theta_shift;
  rec.rhs = std::pow(rec.rhs_first, theta) * std::pow(rec.rhs_second, 1.0 - theta);
  if (rec.rhs == 0.0) {
    rec.degenerate = true;
    rec.ratio = std::numeric_limits<double>::quiet_NaN();
  } else {
    rec.ratio = rec.lhs / rec.rhs;
  }
  return rec;
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("INTERP_LAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

SweepLevel aggregate(GridGeometry grid, std::vector<SampleRecord> records) {
  SweepLevel level;
  level.grid = grid;
  level.records = std::move(records);
  for (std::size_t i = 0; i < level.records.size(); ++i) {
    const RatioRecord& r = level.records[i].ratio;
    if (r.degenerate) {
      ++level.degenerate;
      continue;
    }
    if (!level.sup_ratio || r.ratio > *level.sup_ratio) {
      level.sup_ratio = r.ratio;
      level.argmax = i;
    }
  }
  return level;
}

namespace {

SweepLevel sweep_level(const FamilySpec& family, const InequalityInstance& inst, const SweepOptions& options) {
  std::vector<SampleRecord> records(family.seeds.size());
  std::vector<std::exception_ptr> errors(family.seeds.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++) {
      try {
        const GeneratedSample g = generate(family, family.seeds[i]);
        records[i] = SampleRecord{g.params, g.seed, g.truncation_level, ratio(g.u, inst, options.ratio)};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads =
      std::max(1u, std::min<unsigned>(options.threads ? options.threads : default_thread_count(),
                                      static_cast<unsigned>(records.size())));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  // Report the error of the lowest seed index so failures are deterministic too.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return aggregate(family.grid, std::move(records));
}

nlohmann::json level_json(const SweepLevel& level) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : level.records) {
    nlohmann::json row = r.ratio.to_json();
    row["seed"] = r.seed;
    row["params"] = r.params;
    row["truncation_level"] = r.truncation_level;
    rows.push_back(row);
  }
  nlohmann::json j{{"grid", grid_json(level.grid)},
                   {"samples", level.records.size()},
                   {"degenerate", level.degenerate},
                   {"records", rows}};
  j["sup_ratio"] = level.sup_ratio ? nlohmann::json(*level.sup_ratio) : nlohmann::json(nullptr);
  if (level.argmax) j["argmax_seed"] = level.records[*level.argmax].seed;
  return j;
}

void check_level(const SweepLevel& level, const char* name, std::vector<std::string>& out) {
  std::optional<double> best;
  for (const auto& r : level.records) {
    const RatioRecord& x = r.ratio;
    if (x.degenerate) continue;
    if (!std::isfinite(x.ratio)) {
      out.push_back(std::string(name) + ": non-finite ratio at seed " + std::to_string(r.seed));
    }
    if (x.ratio != x.lhs / x.rhs) {
      out.push_back(std::string(name) + ": ratio != lhs / rhs at seed " + std::to_string(r.seed));
    }
    if (!best || x.ratio > *best) best = x.ratio;
  }
  if (best != level.sup_ratio) out.push_back(std::string(name) + ": sup ratio differs from max over records");
}

}  // namespace

RatioReport sweep(const FamilySpec& family, const InequalityInstance& inst, const SweepOptions& options) {
  if (!inst.admissible()) throw InadmissibleError("inadmissible instance: " + inst.decision().reason());
  family.validate();
  RatioReport rep{inst, sweep_level(family, inst, options), std::nullopt, std::nullopt, false};
  rep.empty = !rep.coarse.sup_ratio;
  if (options.refine) {
    rep.fine = sweep_level(family.refined(), inst, options);
    rep.empty = rep.empty || !rep.fine->sup_ratio;
    if (rep.coarse.sup_ratio && rep.fine->sup_ratio) {
      rep.drift = std::abs(*rep.coarse.sup_ratio - *rep.fine->sup_ratio) / *rep.coarse.sup_ratio;
    }
  }
  return rep;
}

std::vector<std::string> RatioReport::invariant_failures() const {
  std::vector<std::string> out;
  check_level(coarse, "coarse", out);
  if (fine) check_level(*fine, "fine", out);
  return out;
}

nlohmann::json RatioReport::to_json() const {
  nlohmann::json j;
  j["instance"] = instance.to_json();
  j["note"] = "sup_ratio is an empirical lower bound on the inequality constant";
  j["coarse"] = level_json(coarse);
  if (fine) j["fine"] = level_json(*fine);
  j["drift"] = drift ? nlohmann::json(*drift) : nlohmann::json(nullptr);
  j["empty"] = empty;
  j["invariant_failures"] = invariant_failures();
  return j;
}

nlohmann::json InvarianceReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& e : entries) {
    rows.push_back({{"lambda", to_string(e.lambda)}, {"scalar", e.scalar}, {"residual", e.residual}});
  }
  return {{"base_ratio", base_ratio}, {"max_residual", max_residual}, {"entries", rows}};
}

InvarianceReport scale_invariance_suite(const InequalityInstance& inst, const GridFunction& u,
                                        const std::vector<Rational>& lambdas,
                                        const std::vector<double>& scalars, const RatioOptions& options) {
  InvarianceReport rep;
  const RatioRecord base = ratio(u, inst, options);
  if (base.degenerate) throw std::invalid_argument("invariance suite needs a nondegenerate base sample");
  rep.base_ratio = base.ratio;
  const double log_base = std::log(base.ratio);
  for (const Rational& lambda : lambdas) {
    const GridFunction dilated = dilate(u, lambda);
    for (double c : scalars) {
      const RatioRecord r = ratio(scale(dilated, c), inst, options);
      InvarianceEntry e{lambda, c, r.degenerate ? std::numeric_limits<double>::infinity()
                                                : std::abs(std::log(r.ratio) - log_base)};
      rep.max_residual = std::max(rep.max_residual, e.residual);
      rep.entries.push_back(e);
    }
  }
  return rep;
}

}  // namespace ilab
