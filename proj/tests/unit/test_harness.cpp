#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "fixtures.hpp"
#include "ilab/harness.hpp"
#include "oracles.hpp"

using namespace ilab;

namespace {

ExtendedExponent P(const char* text) { return ExtendedExponent::parse(text); }

InequalityInstance lipschitz_weak_l1() {
  return InequalityInstance::interpolation(1, P("-1"), P("1"), Rational(1, 2));
}

InequalityInstance gn_1d() { return InequalityInstance::gn(1, 1, 2, Rational(1, 2), P("2"), P("2")); }

FamilySpec tent_family(std::size_t nodes, std::size_t count) {
  return fixture::family(Generator::tent, {{"width", {0.3, 1.5}}, {"amplitude", {0.5, 3.0}}, {"center", {-0.3, 0.3}}},
                         GridGeometry::cube(1, -2, 2, nodes), 1, count);
}

FamilySpec gaussian_family(std::size_t nodes, std::size_t count) {
  return fixture::family(Generator::gaussian, {{"width", {0.3, 0.8}}, {"amplitude", {0.5, 2.0}}},
                         GridGeometry::cube(1, -4, 4, nodes), 1, count);
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("instances solve p and carry the right-hand flavour") {
  const auto a = lipschitz_weak_l1();
  CHECK(a.admissible());
  CHECK(a.p().is_infinite());
  CHECK(a.rhs_weak());
  const auto g = gn_1d();
  CHECK(g.admissible());
  CHECK(g.p() == P("2"));
  CHECK_FALSE(g.rhs_weak());
  CHECK(to_string(InequalityKind::gn) == "gn");
}

TEST_CASE("instance json round trip") {
  const auto j = nlohmann::json::parse(R"({"kind": "gn", "n": 3, "j": 1, "k": 2, "theta": "1/2", "r": 2, "q": "2"})");
  const auto inst = InequalityInstance::from_json(j);
  CHECK(inst.p() == P("2"));
  CHECK(inst.zeta() == 1);
  const auto back = InequalityInstance::from_json(inst.to_json());
  CHECK(back.to_json() == inst.to_json());
  auto wrong = j;
  wrong["p"] = "3";
  CHECK_THROWS_AS(InequalityInstance::from_json(wrong), std::invalid_argument);
  CHECK_NOTHROW(InequalityInstance::from_json(
      nlohmann::json::parse(R"({"kind": "interpolation", "n": 1, "r": -1, "q": 1, "theta": "1/2", "p": "inf"})")));
  CHECK_THROWS(InequalityInstance::from_json(nlohmann::json::parse(R"({"kind": "sobolev", "n": 1})")));
}

TEST_CASE("tent ratio for the Lipschitz and weak-L1 instance is sqrt 2") {
  // sup|u| = 1, Lipschitz 1, ||u||_{1,inf} = 1/2.
  const auto rec = ratio(fixture::tent_1d(-2, 2, 1025), lipschitz_weak_l1());
  CHECK(rec.lhs == 1.0);
  CHECK(rec.rhs_first == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(oracle::rel_err(rec.rhs_second, 0.5) < 0.01);
  CHECK(oracle::rel_err(rec.ratio, std::sqrt(2.0)) < 0.02);
  CHECK(rec.ratio == rec.lhs / rec.rhs);
}

TEST_CASE("ratio is invariant under scaling and dilation") {
  for (const auto& inst : {lipschitz_weak_l1(), gn_1d(),
                           InequalityInstance::interpolation(1, P("-2"), P("2"), Rational(1, 3))}) {
    for (const auto& u : fixture::corpus(1, 257, 7)) {
      const double base = ratio(u, inst).ratio;
      for (double c : {5.0, -2.0, 1.0 / 7.0}) CHECK(oracle::ulp_distance(ratio(scale(u, c), inst).ratio, base) <= 4);
      for (Rational l : {Rational(1, 2), Rational(2), Rational(3)}) {
        CHECK(std::abs(ratio(dilate(u, l), inst).ratio / base - 1.0) < 1e-8);
      }
    }
  }
}

TEST_CASE("inadmissible instances are rejected before any norm") {
  // The grid is deliberately in the wrong dimension: the admissibility reason
  // must win over the shape check.
  const auto u = fixture::gaussian(2, -2, 2, 9);
  const auto bad_theta = InequalityInstance::interpolation(1, P("-1"), P("1"), Rational(1));
  CHECK_FALSE(bad_theta.admissible());
  try {
    ratio(u, bad_theta);
    FAIL("expected rejection");
  } catch (const InadmissibleError& e) {
    CHECK(std::string(e.what()).find(bad_theta.decision().reason()) != std::string::npos);
  }
  const auto critical = InequalityInstance::gn(4, 1, 3, Rational(1, 2), P("2"), P("2"));
  CHECK_THROWS_WITH_AS(ratio(u, critical), doctest::Contains("critical: r^(1) = 4 = n"), InadmissibleError);
  CHECK_THROWS_AS(sweep(tent_family(33, 2), bad_theta), InadmissibleError);
  CHECK_THROWS_AS(ratio(u, lipschitz_weak_l1()), std::invalid_argument);  // admissible, wrong dimension
}

TEST_CASE("degenerate samples") {
  const auto z = GridFunction::zeros(GridGeometry::cube(1, -1, 1, 17));
  const auto rec = ratio(z, lipschitz_weak_l1());
  CHECK(rec.degenerate);
  CHECK(std::isnan(rec.ratio));
  // A constant has zero Hoelder norm: the right side vanishes.
  const auto c = GridFunction::sample(GridGeometry::cube(1, -1, 1, 17), [](const Point&) { return 1.0; });
  CHECK(ratio(c, lipschitz_weak_l1()).degenerate);
}

TEST_CASE("tent sweep reaches sqrt 2") {
  const auto rep = sweep(tent_family(1025, 12), lipschitz_weak_l1());
  REQUIRE(rep.coarse.sup_ratio);
  CHECK(*rep.coarse.sup_ratio >= std::sqrt(2.0) * 0.98);
  REQUIRE(rep.drift);
  CHECK(*rep.drift < 0.05);
  CHECK(rep.invariant_failures().empty());
  CHECK(rep.fine->grid.spacing[0] == rep.coarse.grid.spacing[0] / 2);
}

TEST_CASE("gn sweep stays near the integration by parts bound") {
  // ||u'||_2^2 = -<u, u''> <= ||u||_2 ||u''||_2, so the constant is at most 1.
  const auto rep = sweep(gaussian_family(513, 16), gn_1d());
  REQUIRE(rep.coarse.sup_ratio);
  CHECK(*rep.coarse.sup_ratio <= 1.2);
  CHECK(*rep.fine->sup_ratio <= 1.2);
  REQUIRE(rep.drift);
  CHECK(*rep.drift < 0.05);
  CHECK(rep.coarse.degenerate == 0);
  CHECK(rep.invariant_failures().empty());
}

TEST_CASE("sweeps do not depend on the thread count") {
  const auto fam = fixture::corpus_families(1, 129)[5];  // smoothed noise
  auto f = fam;
  for (std::uint64_t s = 1; s <= 24; ++s) f.seeds.push_back(s);
  SweepOptions one, many;
  one.threads = 1;
  many.threads = 5;
  const auto a = sweep(f, lipschitz_weak_l1(), one), b = sweep(f, lipschitz_weak_l1(), many);
  CHECK(a.to_json().dump() == b.to_json().dump());
}

TEST_CASE("sup ratio is monotone under corpus union") {
  const auto inst = lipschitz_weak_l1();
  SweepOptions opts;
  opts.refine = false;
  const auto a = sweep(tent_family(257, 6), inst, opts);
  auto gauss = gaussian_family(257, 6);
  gauss.grid = a.coarse.grid;
  const auto b = sweep(gauss, inst, opts);
  auto all = a.coarse.records;
  all.insert(all.end(), b.coarse.records.begin(), b.coarse.records.end());
  const auto u = aggregate(a.coarse.grid, all);
  REQUIRE(u.sup_ratio);
  CHECK(*u.sup_ratio >= *a.coarse.sup_ratio);
  CHECK(*u.sup_ratio >= *b.coarse.sup_ratio);
  CHECK(*u.sup_ratio == std::max(*a.coarse.sup_ratio, *b.coarse.sup_ratio));
}

TEST_CASE("invariance suite and its negative control") {
  const auto u = fixture::gaussian(1, -4, 4, 513);
  const std::vector<Rational> lambdas{Rational(1, 2), Rational(2), Rational(3)};
  const std::vector<double> scalars{1.0, 5.0, 0.25};
  for (const auto& inst : {lipschitz_weak_l1(), gn_1d()}) {
    const auto rep = scale_invariance_suite(inst, u, lambdas, scalars);
    CHECK(rep.entries.size() == 9);
    CHECK(rep.max_residual < 1e-8);
    // Shifting theta by d leaves scalar homogeneity intact but moves the
    // dilation exponent by d (k + n (1/q - 1/r)), k = 0 for interpolation, so
    // log ratio drifts by that times log lambda.
    RatioOptions shifted;
    shifted.theta_shift = 1e-2;
    const auto neg = scale_invariance_suite(inst, u, lambdas, scalars, shifted);
    const double k = inst.kind() == InequalityKind::gn ? double(inst.k()) : 0.0;
    const double slope = 1e-2 * std::abs(k + inst.n() * to_double(inst.q().rho() - inst.r().rho()));
    for (const auto& e : neg.entries) {
      CHECK(std::abs(e.residual - slope * std::abs(std::log(to_double(e.lambda)))) < 1e-8);
    }
    CHECK(neg.max_residual > 1e-3);
    CHECK(neg.to_json()["entries"].size() == 9);
  }
}

TEST_CASE("thread count from the environment") {
  const char* old = std::getenv("INTERP_LAB_THREADS");
  const std::string saved = old ? old : "";
  setenv("INTERP_LAB_THREADS", "3", 1);
  CHECK(default_thread_count() == 3);
  setenv("INTERP_LAB_THREADS", "junk", 1);
  CHECK(default_thread_count() >= 1);
  if (old) setenv("INTERP_LAB_THREADS", saved.c_str(), 1);
  else unsetenv("INTERP_LAB_THREADS");
}

TEST_CASE("report json") {
  SweepOptions opts;
  opts.refine = false;
  const auto rep = sweep(tent_family(129, 3), lipschitz_weak_l1(), opts);
  const auto j = rep.to_json();
  CHECK(j["drift"].is_null());
  CHECK(j["instance"]["kind"] == "interpolation");
  CHECK(j["coarse"]["records"].size() == 3);
}

}  // TEST_SUITE
