#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fixtures.hpp"
#include "ilab/extremizer.hpp"
#include "ilab/proof_lab.hpp"
#include "oracles.hpp"

using namespace ilab;

TEST_SUITE("extremizer") {

TEST_CASE("finds the top of a concave bowl") {
  auto f = [](const std::vector<double>& x) {
    return -(x[0] - 0.3) * (x[0] - 0.3) - 2 * (x[1] + 0.2) * (x[1] + 0.2);
  };
  SearchOptions opts;
  opts.budget = 200;
  const auto r = maximize(f, {0.0, 0.0}, {-1.0, -1.0}, {1.0, 1.0}, opts);
  CHECK(std::abs(r.best.x[0] - 0.3) < 1e-3);
  CHECK(std::abs(r.best.x[1] + 0.2) < 1e-3);
  CHECK(r.evaluations <= 200);
  CHECK(r.trace.size() == r.evaluations);
  CHECK_FALSE(r.flat[0]);
  CHECK_FALSE(r.flat[1]);
}

TEST_CASE("coordinates stay inside the box") {
  auto f = [](const std::vector<double>& x) { return x[0] + x[1]; };
  SearchOptions opts;
  opts.budget = 120;
  const auto r = maximize(f, {0.5, 0.5}, {0.0, 0.0}, {1.0, 2.0}, opts);
  for (const auto& p : r.trace) {
    CHECK(p.x[0] >= 0.0);
    CHECK(p.x[0] <= 1.0);
    CHECK(p.x[1] >= 0.0);
    CHECK(p.x[1] <= 2.0);
  }
  CHECK(r.best.value == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("a budget of one evaluates only the start") {
  int calls = 0;
  auto f = [&](const std::vector<double>& x) {
    ++calls;
    return x[0];
  };
  SearchOptions opts;
  opts.budget = 1;
  const auto r = maximize(f, {0.25}, {0.0}, {1.0}, opts);
  CHECK(calls == 1);
  CHECK(r.evaluations == 1);
  CHECK(r.best.x == std::vector<double>{0.25});
  CHECK(r.best.value == 0.25);
}

TEST_CASE("failed evaluations score minus infinity") {
  auto f = [](const std::vector<double>& x) {
    if (x[0] > 0.5) throw std::domain_error("out of reach");
    return x[0];
  };
  SearchOptions opts;
  opts.budget = 80;
  const auto r = maximize(f, {0.2}, {0.0}, {1.0}, opts);
  CHECK(r.best.value <= 0.5);
  CHECK(r.best.value > 0.4);
  bool saw_failure = false;
  for (const auto& p : r.trace) saw_failure = saw_failure || std::isinf(p.value);
  CHECK(saw_failure);
}

TEST_CASE("an ignored coordinate is flagged flat") {
  auto f = [](const std::vector<double>& x) { return 1.0 - (x[0] - 0.5) * (x[0] - 0.5); };
  SearchOptions opts;
  opts.budget = 100;
  const auto r = maximize(f, {0.1, 0.1}, {0.0, 0.0}, {1.0, 1.0}, opts);
  CHECK_FALSE(r.flat[0]);
  CHECK(r.flat[1]);
}

TEST_CASE("tent width is a flat direction of the scale invariant ratio") {
  const auto inst = InequalityInstance::interpolation(1, ExtendedExponent::parse("-1"), ExtendedExponent::parse("1"),
                                                      Rational(1, 2));
  const auto fam = fixture::family(Generator::tent, {{"width", {0.3, 1.5}}, {"amplitude", 1.0}, {"center", 0.0}},
                                   GridGeometry::cube(1, -2, 2, 2049), 1, 1);
  const auto res = extremizer_search(inst, fam);
  CHECK(res.names == std::vector<std::string>{"width"});
  CHECK(res.flat_directions == std::vector<std::string>{"width"});
  CHECK(oracle::rel_err(res.best.ratio, std::sqrt(2.0)) < 0.02);
  const auto j = res.to_json();
  CHECK(j["flat_directions"][0] == "width");
  CHECK(j["best_params"]["amplitude"] == 1.0);
}

TEST_CASE("power peak cap search drives the tail moment ratio towards one") {
  // With lambda(t) = 2/t the moment chain is tight up to the box cut-off
  // 1/(2 cap L), so the ratio climbs with the cap.
  const auto fam = fixture::family(Generator::power_peak, {{"exponent", 1.0}, {"cap", {1.0, 32.0}}, {"center", 0.0}},
                                   GridGeometry::cube(1, -4, 4, 32001), 1, 1);
  const auto one = ExtendedExponent::parse("1"), two = ExtendedExponent::parse("2");
  auto f = [&](const std::vector<double>& x) {
    const auto s = generate_with(fam, {{"exponent", 1.0}, {"cap", x[0]}, {"center", 0.0}});
    return tail_moment_bound(s.u, s.u.max_abs(), two, one).ratio;
  };
  SearchOptions opts;
  opts.budget = 30;
  const auto r = maximize(f, {2.0}, {1.0}, {32.0}, opts);
  CHECK(r.best.value > 0.97);
  CHECK(r.best.value <= 1.0 + 1e-12);
  CHECK(r.best.x[0] > 16.0);
  // the trace's running maximum rises from the starting cap
  CHECK(r.best.value > r.trace.front().value);
}

}  // TEST_SUITE
