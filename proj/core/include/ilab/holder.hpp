#pragma once

// Hoelder semi-norms over grid-node pairs:
//
//   sup_{x != y} |v(x) - v(y)| / |x - y|^alpha,   alpha in (0, 1]
//
// v may be scalar or vector valued (Euclidean norm of the difference). The
// naive evaluator enumerates every unordered pair; the branch-and-bound
// evaluator returns the identical double by visiting box pairs best-first and
// skipping those whose upper bound cannot beat the incumbent.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "ilab/derivative.hpp"
#include "ilab/grid_function.hpp"

namespace ilab {

/// Non-owning view of a (possibly vector valued) field. Logical values are
/// factor * components[c][i].
struct FieldRef {
  GridGeometry geometry;
  std::vector<std::span<const double>> components;
  double factor = 1.0;

  static FieldRef of(const GridFunction& u);
  static FieldRef of(const DerivativeTensor& t);
  std::size_t size() const { return geometry.size(); }
};

/// Restricts the supremum to pairs with min_exclusive < |x - y| <= max_inclusive.
struct PairWindow {
  double min_exclusive = 0.0;
  double max_inclusive = std::numeric_limits<double>::infinity();

  bool admits(double distance) const {
    return distance > min_exclusive && distance <= max_inclusive;
  }
};

struct HolderResult {
  double value = 0.0;
  std::size_t best_first = 0;   // flat indices of the maximizing pair
  std::size_t best_second = 0;  // (both 0 when no pair is admitted)
  bool found_pair = false;
  std::uint64_t evaluated_pairs = 0;  // node pairs whose quotient was computed
  std::uint64_t total_pairs = 0;      // N(N-1)/2
  std::uint64_t box_pairs = 0;        // box pairs popped from the queue (branch-and-bound)

  double explored_fraction() const {
    return total_pairs ? double(evaluated_pairs) / double(total_pairs) : 0.0;
  }
};

/// Euclidean distance between two grid nodes.
double node_distance(const GridGeometry& g, const Index& a, const Index& b);

HolderResult holder_seminorm_naive(const FieldRef& v, double alpha, const PairWindow& window = {});
HolderResult holder_seminorm_bb(const FieldRef& v, double alpha, const PairWindow& window = {});

}  // namespace ilab
