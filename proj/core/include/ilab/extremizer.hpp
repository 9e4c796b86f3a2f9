#pragma once

// Derivative-free maximisation over the continuous parameters of a family.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ilab/family.hpp"
#include "ilab/harness.hpp"

namespace ilab {

struct SearchPoint {
  std::vector<double> x;
  double value = 0.0;  // -inf for failed or degenerate evaluations
};

struct SearchOptions {
  std::size_t budget = 60;          // objective evaluations, >= 1
  double flat_tolerance = 1e-2;     // relative spread that counts as flat
  std::uint64_t seed = 0;           // sample seed passed to the generator
};

struct SearchResult {
  SearchPoint best;
  std::vector<SearchPoint> trace;   // every evaluation in order
  std::vector<bool> flat;           // per coordinate, probed at the best point
  std::size_t evaluations = 0;
};

/// Nelder-Mead on the box [lo, hi] (coordinates clamped), maximising f.
/// The initial point is x0; the first evaluation is always f(x0). Flatness
/// probes (two per coordinate) are held back from the search when the budget
/// is at least 3d + 2; otherwise they fall back to the spread of the trace.
SearchResult maximize(const std::function<double(const std::vector<double>&)>& f,
                      const std::vector<double>& x0, const std::vector<double>& lo,
                      const std::vector<double>& hi, const SearchOptions& options = {});

struct ExtremizerResult {
  std::vector<std::string> names;   // free parameters, in coordinate order
  ParamValues best_params;
  RatioRecord best;
  SearchResult search;
  std::vector<std::string> flat_directions;

  nlohmann::json to_json() const;
};

/// Maximises ratio(u, inst) over the non-fixed parameters of the family,
/// starting from the midpoint of every range.
ExtremizerResult extremizer_search(const InequalityInstance& inst, const FamilySpec& family,
                                   const SearchOptions& options = {});

}  // namespace ilab
