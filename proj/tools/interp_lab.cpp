// interp_lab: command line front end for the inequality lab.
//
// Exit codes: 0 success, 1 a check was violated, 2 usage or input error.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "ilab/extremizer.hpp"
#include "ilab/family.hpp"
#include "ilab/grid_io.hpp"
#include "ilab/harness.hpp"
#include "ilab/isoperimetry.hpp"
#include "ilab/norms.hpp"
#include "ilab/proof_lab.hpp"

using namespace ilab;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return json::parse(in);
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

json admissibility_json(const Admissibility& a) {
  return {{"admissible", a.admissible}, {"reasons", a.reasons}, {"notes", a.notes}};
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size()) throw std::invalid_argument("bad number in list: " + item);
  }
  return out;
}

// check-exponents ----------------------------------------------------------

struct ExponentArgs {
  std::string theorem = "interpolation";
  int n = 1;
  std::int64_t j = 1, k = 2, m = 1;
  std::string theta = "1/2", r = "1", q = "1", p = "1";
};

int run_check_exponents(const ExponentArgs& a) {
  const auto E = [](const std::string& s) { return ExtendedExponent::parse(s); };
  if (a.theorem == "decompose") {
    const auto e = E(a.p);
    const auto cls = classify(e, a.n);
    json out{{"p", e.to_string()}, {"n", a.n}, {"class", std::string(to_string(cls))}};
    // the decomposition is defined for every negative p, in range or not
    if (e.rho() < 0) {
      const auto d = holder_decompose(e, a.n);
      out["s"] = d.s;
      out["p_tilde"] = d.p_tilde.to_string();
      out["alpha"] = to_string(d.alpha);
    }
    emit(out);
    if (cls == ExponentClass::out_of_scale) {
      std::cerr << "out of scale: p = " << e.to_string() << '\n';
      return kViolation;
    }
    return kOk;
  }
  if (a.theorem == "conjugate") {
    const auto c = iterated_conjugate(E(a.r), a.n, a.m);
    json out{{"r", a.r}, {"n", a.n}, {"m", a.m}, {"ok", c.ok()}};
    if (c.ok()) {
      out["value"] = c.value->to_string();
      emit(out);
      return kOk;
    }
    out["critical_index"] = *c.critical_index;
    out["critical_value"] = c.critical_value.to_string();
    emit(out);
    std::cerr << "critical: r^(" << *c.critical_index << ") = " << c.critical_value.to_string() << " = n\n";
    return kViolation;
  }
  Admissibility decision;
  json out;
  if (a.theorem == "interpolation") {
    const auto s = interpolation_solve(E(a.r), E(a.q), parse_rational(a.theta), a.n);
    decision = s.decision;
    out = {{"theorem", "interpolation"}, {"n", a.n},          {"r", s.tuple.r.to_string()},
           {"q", s.tuple.q.to_string()},  {"theta", to_string(s.tuple.theta)}, {"p", s.tuple.p.to_string()}};
  } else if (a.theorem == "gn") {
    const auto s = gn_solve(a.n, a.j, a.k, parse_rational(a.theta), E(a.r), E(a.q));
    decision = s.decision;
    out = {{"theorem", "gn"},
           {"n", a.n},
           {"j", a.j},
           {"k", a.k},
           {"theta", to_string(s.tuple.theta)},
           {"r", s.tuple.r.to_string()},
           {"q", s.tuple.q.to_string()},
           {"p", s.tuple.p.to_string()},
           {"zeta", to_string(s.tuple.zeta)}};
  } else {
    throw std::invalid_argument("unknown theorem: " + a.theorem);
  }
  out["decision"] = admissibility_json(decision);
  emit(out);
  if (!decision.admissible) {
    std::cerr << "inadmissible instance: " << decision.reason() << '\n';
    return kViolation;
  }
  return kOk;
}

// norm ---------------------------------------------------------------------

struct NormArgs {
  std::string file, p, weak;
  int derivative = 0;
  std::string method = "bb";
  bool allow_below = false;
};

int run_norm(const NormArgs& a) {
  const auto u = read_gfn(std::filesystem::path(a.file));
  if (!a.weak.empty()) {
    if (!a.p.empty() || a.derivative != 0) throw std::invalid_argument("--weak excludes --p and --derivative");
    emit(weak_lorentz_norm(u, ExtendedExponent::parse(a.weak).p_value()).to_json());
    return kOk;
  }
  if (a.p.empty()) throw std::invalid_argument("one of --p or --weak is required");
  ExtendedNormOptions opts;
  if (a.method == "naive") opts.method = HolderMethod::naive;
  else if (a.method != "bb") throw std::invalid_argument("method must be naive or bb");
  opts.allow_below_holder_range = a.allow_below;
  const auto e = ExtendedExponent::parse(a.p);
  emit((a.derivative == 0 ? extended_norm(u, e, opts) : extended_norm_of_derivative(u, a.derivative, e, opts)).to_json());
  return kOk;
}

// truncate, balance --------------------------------------------------------

struct TruncateArgs {
  std::string file, p, out_truncated, out_tail;
  double s = 0.0;
};

int run_truncate(const TruncateArgs& a) {
  const auto u = read_gfn(std::filesystem::path(a.file));
  const auto t = truncate(u, a.s);
  json out{{"s", t.s}, {"superlevel_measure", t.superlevel_measure}, {"max_abs", u.max_abs()}};
  if (!a.p.empty()) out["split"] = truncation_split_check(u, a.s, ExtendedExponent::parse(a.p)).to_json();
  if (!a.out_truncated.empty()) write_gfn(std::filesystem::path(a.out_truncated), t.truncated);
  if (!a.out_tail.empty()) write_gfn(std::filesystem::path(a.out_tail), t.tail);
  emit(out);
  return kOk;
}

struct BalanceArgs {
  std::string file, p, q, r;
};

int run_balance(const BalanceArgs& a) {
  const auto u = read_gfn(std::filesystem::path(a.file));
  emit(balance_s(u, ExtendedExponent::parse(a.p), ExtendedExponent::parse(a.q), ExtendedExponent::parse(a.r)).to_json());
  return kOk;
}

// isoperimetric -------------------------------------------------------------

struct IsoArgs {
  std::string raster, gfn, ts;
  double level = 0.0, t_max = 0.0;
  int t_count = 16;
};

int run_isoperimetric(const IsoArgs& a) {
  RasterSet s;
  if (!a.raster.empty()) {
    s = read_rsn(std::filesystem::path(a.raster));
  } else {
    s = superlevel_set(read_gfn(std::filesystem::path(a.gfn)), a.level);
  }
  std::vector<double> ts;
  if (!a.ts.empty()) {
    ts = parse_list(a.ts);
  } else {
    if (a.t_count < 1) throw std::invalid_argument("--t-count must be positive");
    const double hi = a.t_max > 0 ? a.t_max : std::cbrt(s.measure());
    for (int i = 0; i < a.t_count; ++i) ts.push_back(hi * i / std::max(1, a.t_count - 1));
  }
  const auto rep = lemma_bmr_check(s, ts);
  emit(rep.to_json());
  return rep.violations() == 0 ? kOk : kViolation;
}

// verify, extremize --------------------------------------------------------

struct VerifyArgs {
  std::string instance, family;
  bool refine = false;
  double drift_threshold = 0.05, scale_tolerance = 1e-8;
  unsigned threads = 0;
};

int run_verify(const VerifyArgs& a) {
  const auto inst = InequalityInstance::from_json(read_json(a.instance));
  const auto fam = FamilySpec::from_json(read_json(a.family));
  SweepOptions opts;
  opts.refine = a.refine;
  opts.threads = a.threads;
  const auto rep = sweep(fam, inst, opts);
  auto out = rep.to_json();
  auto failures = rep.invariant_failures();
  bool violated = !failures.empty();
  if (rep.drift && *rep.drift > a.drift_threshold) violated = true;
  if (rep.coarse.argmax) {
    // invariance is re-checked on the sample that realises the supremum
    const auto& best = rep.coarse.records[*rep.coarse.argmax];
    const auto u = generate(fam, best.seed).u;
    const auto inv = scale_invariance_suite(inst, u, {Rational(1, 2), Rational(2), Rational(3)}, {1.0 / 3.0, 7.0});
    out["invariance"] = inv.to_json();
    if (!(inv.max_residual < a.scale_tolerance)) {
      violated = true;
      failures.push_back("scale invariance residual above tolerance");
    }
  }
  out["thresholds"] = {{"drift", a.drift_threshold}, {"scale_residual", a.scale_tolerance}};
  out["violations"] = failures;
  out["passed"] = !violated;
  emit(out);
  return violated ? kViolation : kOk;
}

struct ExtremizeArgs {
  std::string instance, family;
  std::size_t budget = 60;
  std::uint64_t seed = 0;
};

int run_extremize(const ExtremizeArgs& a) {
  const auto inst = InequalityInstance::from_json(read_json(a.instance));
  const auto fam = FamilySpec::from_json(read_json(a.family));
  SearchOptions opts;
  opts.budget = a.budget;
  opts.seed = a.seed;
  emit(extremizer_search(inst, fam, opts).to_json());
  return kOk;
}

// plot-data, generate ------------------------------------------------------

struct PlotArgs {
  std::string series, file, instance, family, p, q, r;
  int points = 64;
};

int run_plot(const PlotArgs& a) {
  if (a.series == "ratios") {
    const auto inst = InequalityInstance::from_json(read_json(a.instance));
    SweepOptions opts;
    opts.refine = false;
    const auto rep = sweep(FamilySpec::from_json(read_json(a.family)), inst, opts);
    std::cout << "sample,seed,ratio,degenerate\n";
    for (std::size_t i = 0; i < rep.coarse.records.size(); ++i) {
      const auto& rec = rep.coarse.records[i];
      std::cout << i << ',' << rec.seed << ',' << rec.ratio.ratio << ',' << int(rec.ratio.degenerate) << '\n';
    }
    return kOk;
  }
  if (a.points < 2) throw std::invalid_argument("--points must be at least 2");
  const auto u = read_gfn(std::filesystem::path(a.file));
  const double top = u.max_abs();
  if (a.series == "distribution") {
    std::cout << "t,lambda\n";
    for (int i = 0; i < a.points; ++i) {
      const double t = top * i / (a.points - 1);
      std::cout << t << ',' << distribution_function(u, t) << '\n';
    }
    return kOk;
  }
  if (a.series == "balance") {
    const auto P = ExtendedExponent::parse(a.p), Q = ExtendedExponent::parse(a.q), R = ExtendedExponent::parse(a.r);
    std::cout << "s,rhs\n";
    for (int i = 1; i < a.points; ++i) {
      const double s = top * i / a.points;
      std::cout << s << ',' << balance_rhs(u, s, P, Q, R) << '\n';
    }
    return kOk;
  }
  throw std::invalid_argument("series must be distribution, balance or ratios");
}

struct GenerateArgs {
  std::string family, out;
  std::uint64_t seed = 0;
};

int run_generate(const GenerateArgs& a) {
  const auto fam = FamilySpec::from_json(read_json(a.family));
  const auto s = generate(fam, a.seed);
  write_gfn(std::filesystem::path(a.out), s.u);
  emit({{"file", a.out}, {"seed", s.seed}, {"params", s.params}, {"max_abs", s.u.max_abs()}});
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"interp_lab: numerical checks of interpolation inequalities on uniform grids"};
  app.require_subcommand(1);

  ExponentArgs ex;
  auto* cex = app.add_subcommand("check-exponents", "solve and gate an exponent tuple");
  cex->add_option("--theorem", ex.theorem, "interpolation | gn | decompose | conjugate")
      ->check(CLI::IsMember({"interpolation", "gn", "decompose", "conjugate"}));
  cex->add_option("--n", ex.n, "dimension")->check(CLI::Range(1, 64));
  cex->add_option("--j", ex.j, "lhs derivative order (gn)");
  cex->add_option("--k", ex.k, "rhs derivative order (gn)");
  cex->add_option("--m", ex.m, "iteration count (conjugate)");
  cex->add_option("--theta", ex.theta, "rational theta");
  cex->add_option("--r", ex.r, "exponent r");
  cex->add_option("--q", ex.q, "exponent q");
  cex->add_option("--p", ex.p, "exponent p (decompose)");

  NormArgs nm;
  auto* cnorm = app.add_subcommand("norm", "evaluate a norm of a GFN1 grid");
  cnorm->add_option("--file", nm.file, "GFN1 grid")->required();
  cnorm->add_option("--p", nm.p, "extended exponent");
  cnorm->add_option("--weak", nm.weak, "weak Lorentz exponent q");
  cnorm->add_option("--derivative", nm.derivative, "derivative order applied first")->check(CLI::Range(0, 8));
  cnorm->add_option("--method", nm.method, "naive | bb")->check(CLI::IsMember({"naive", "bb"}));
  cnorm->add_flag("--allow-below-holder", nm.allow_below, "accept p in (-n,0)");

  TruncateArgs tr;
  auto* ctr = app.add_subcommand("truncate", "split u at level s");
  ctr->add_option("--file", tr.file, "GFN1 grid")->required();
  ctr->add_option("--s", tr.s, "level")->required();
  ctr->add_option("--p", tr.p, "also check the truncation split for this p");
  ctr->add_option("--out-truncated", tr.out_truncated, "write the truncated part");
  ctr->add_option("--out-tail", tr.out_tail, "write the tail part");

  BalanceArgs bl;
  auto* cbal = app.add_subcommand("balance", "find the balancing level s");
  cbal->add_option("--file", bl.file, "GFN1 grid")->required();
  cbal->add_option("--p", bl.p)->required();
  cbal->add_option("--q", bl.q)->required();
  cbal->add_option("--r", bl.r)->required();

  IsoArgs iso;
  auto* ciso = app.add_subcommand("isoperimetric", "compare inner parallel sets with the equal-measure ball");
  auto* src = ciso->add_option_group("source");
  src->add_option("--raster", iso.raster, "RSN1 raster");
  src->add_option("--file", iso.gfn, "GFN1 grid, thresholded at --level");
  src->require_option(1);
  ciso->add_option("--level", iso.level, "superlevel threshold");
  ciso->add_option("--t", iso.ts, "comma separated erosion distances");
  ciso->add_option("--t-max", iso.t_max, "largest distance for an even ladder");
  ciso->add_option("--t-count", iso.t_count, "ladder length");

  VerifyArgs vf;
  auto* cver = app.add_subcommand("verify", "sweep a family and check invariants");
  cver->add_option("--instance", vf.instance, "instance JSON")->required();
  cver->add_option("--family", vf.family, "family JSON")->required();
  cver->add_flag("--refine", vf.refine, "also sweep at h/2 and report drift");
  cver->add_option("--drift-threshold", vf.drift_threshold)->check(CLI::PositiveNumber);
  cver->add_option("--scale-tolerance", vf.scale_tolerance)->check(CLI::PositiveNumber);
  cver->add_option("--threads", vf.threads, "worker threads (0: INTERP_LAB_THREADS or hardware)");

  ExtremizeArgs xm;
  auto* cext = app.add_subcommand("extremize", "search family parameters for a large ratio");
  cext->add_option("--instance", xm.instance)->required();
  cext->add_option("--family", xm.family)->required();
  cext->add_option("--budget", xm.budget)->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
  cext->add_option("--seed", xm.seed);

  PlotArgs pl;
  auto* cplot = app.add_subcommand("plot-data", "emit CSV series");
  cplot->add_option("--series", pl.series, "distribution | balance | ratios")
      ->required()
      ->check(CLI::IsMember({"distribution", "balance", "ratios"}));
  cplot->add_option("--file", pl.file, "GFN1 grid");
  cplot->add_option("--instance", pl.instance);
  cplot->add_option("--family", pl.family);
  cplot->add_option("--p", pl.p);
  cplot->add_option("--q", pl.q);
  cplot->add_option("--r", pl.r);
  cplot->add_option("--points", pl.points);

  GenerateArgs gn;
  auto* cgen = app.add_subcommand("generate", "sample one family member to a GFN1 file");
  cgen->add_option("--family", gn.family)->required();
  cgen->add_option("--seed", gn.seed);
  cgen->add_option("--out", gn.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*cex) return run_check_exponents(ex);
    if (*cnorm) return run_norm(nm);
    if (*ctr) return run_truncate(tr);
    if (*cbal) return run_balance(bl);
    if (*ciso) return run_isoperimetric(iso);
    if (*cver) return run_verify(vf);
    if (*cext) return run_extremize(xm);
    if (*cplot) return run_plot(pl);
    if (*cgen) return run_generate(gn);
  } catch (const InadmissibleError& e) {
    std::cerr << e.what() << '\n';
    return kViolation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
