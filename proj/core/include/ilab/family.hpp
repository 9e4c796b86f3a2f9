#pragma once

// Parametric generator families used as test corpora.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ilab/grid_function.hpp"

namespace ilab {

enum class Generator { gaussian, power_peak, power_tail, bump, tent, smoothed_noise, multi_bump };

std::string_view to_string(Generator g);
Generator parse_generator(std::string_view name);

/// Closed interval; a fixed value has lo == hi.
struct ParamRange {
  constexpr ParamRange() = default;
  /// A fixed value.
  constexpr ParamRange(double value) : lo(value), hi(value) {}  // NOLINT(google-explicit-constructor)
  constexpr ParamRange(double lo_, double hi_) : lo(lo_), hi(hi_) {}

  double lo = 0.0;
  double hi = 0.0;
  bool fixed() const { return lo == hi; }
  bool contains(double v) const { return v >= lo && v <= hi; }
};

using ParamValues = std::map<std::string, double>;

struct FamilySpec {
  Generator generator = Generator::gaussian;
  std::map<std::string, ParamRange> params;
  GridGeometry grid;
  std::vector<std::uint64_t> seeds;

  /// Checks generator-specific constraints on the declared ranges.
  void validate() const;
  /// Same family on the refined grid (spacing halved).
  FamilySpec refined() const;

  static FamilySpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct GeneratedSample {
  GridFunction u;
  ParamValues params;
  std::uint64_t seed = 0;
  /// Largest |value| on the boundary layer before it was zeroed.
  double truncation_level = 0.0;
};

/// Draws parameters from the declared ranges with a generator seeded by
/// `seed`, then samples the function. Deterministic in (spec, seed).
GeneratedSample generate(const FamilySpec& spec, std::uint64_t seed);

/// Samples with explicit parameter values. Throws std::invalid_argument for
/// values outside the declared ranges or unknown parameter names.
GeneratedSample generate_with(const FamilySpec& spec, const ParamValues& params,
                              std::uint64_t seed = 0);

/// Default value of every parameter a generator reads.
ParamValues generator_defaults(Generator g);

}  // namespace ilab
