#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ilab/family.hpp"
#include "ilab/grid_function.hpp"

namespace fixture {

inline ilab::FamilySpec family(ilab::Generator gen, std::map<std::string, ilab::ParamRange> params,
                               const ilab::GridGeometry& grid, std::uint64_t first_seed, std::size_t count) {
  ilab::FamilySpec spec;
  spec.generator = gen;
  spec.params = std::move(params);
  spec.grid = grid;
  for (std::size_t i = 0; i < count; ++i) spec.seeds.push_back(first_seed + i);
  return spec;
}

/// A (1 - |x - c| / w)_+ on a 1D grid.
inline ilab::GridFunction tent_1d(double lo, double hi, std::size_t nodes, double width = 1.0,
                                  double amplitude = 1.0, double center = 0.0) {
  const auto g = ilab::GridGeometry::cube(1, lo, hi, nodes);
  return ilab::GridFunction::sample(g, [&](const ilab::Point& x) {
    return amplitude * std::max(0.0, 1.0 - std::abs(x[0] - center) / width);
  });
}

inline ilab::GridFunction gaussian(int n, double lo, double hi, std::size_t nodes, double width = 1.0) {
  const auto g = ilab::GridGeometry::cube(n, lo, hi, nodes);
  return ilab::GridFunction::sample(g, [&](const ilab::Point& x) {
    double r2 = 0.0;
    for (int a = 0; a < n; ++a) r2 += x[a] * x[a];
    return std::exp(-r2 / (width * width));
  });
}

/// The mixed corpus used by property tests: every generator on a small grid.
inline std::vector<ilab::FamilySpec> corpus_families(int n, std::size_t nodes) {
  using ilab::Generator;
  const auto g = ilab::GridGeometry::cube(n, -2.0, 2.0, nodes);
  return {
      family(Generator::gaussian, {{"amplitude", {0.5, 2.0}}, {"width", {0.3, 0.9}}, {"center", {-0.3, 0.3}}}, g, 1, 1),
      family(Generator::power_peak, {{"exponent", {0.3, 1.0}}, {"cap", {2.0, 6.0}}, {"center", {-0.2, 0.2}}}, g, 1, 1),
      family(Generator::power_tail, {{"width", {0.2, 0.6}}, {"exponent", {1.0, 3.0}}}, g, 1, 1),
      family(Generator::bump, {{"amplitude", {0.5, 2.0}}, {"width", {0.5, 1.5}}, {"center", {-0.3, 0.3}}}, g, 1, 1),
      family(Generator::tent, {{"amplitude", {0.5, 2.0}}, {"width", {0.4, 1.5}}, {"center", {-0.3, 0.3}}}, g, 1, 1),
      family(Generator::smoothed_noise, {{"amplitude", {0.5, 2.0}}, {"width", {0.1, 0.4}}}, g, 1, 1),
      family(Generator::multi_bump, {{"width", {0.3, 0.8}}, {"count", 3.0}}, g, 1, 1),
  };
}

/// `count` functions cycling through corpus_families with consecutive seeds.
inline std::vector<ilab::GridFunction> corpus(int n, std::size_t nodes, std::size_t count,
                                              std::uint64_t seed = 100) {
  const auto fams = corpus_families(n, nodes);
  std::vector<ilab::GridFunction> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(ilab::generate(fams[i % fams.size()], seed + i).u);
  return out;
}

}  // namespace fixture
