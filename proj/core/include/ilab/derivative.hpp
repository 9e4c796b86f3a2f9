#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ilab/grid_function.hpp"

namespace ilab {

inline constexpr int kDefaultMaxDerivativeOrder = 4;

/// All n^order ordered partial derivatives of a grid function.
///
/// Component c corresponds to the axis tuple (a_1, ..., a_order) with
/// c = sum_i a_i * n^(order - i), i.e. the first axis is most significant.
/// Like GridFunction, logical values are factor() times the stored components.
class DerivativeTensor {
 public:
  DerivativeTensor(GridGeometry geometry, int order, std::vector<std::vector<double>> components,
                   double factor = 1.0);

  const GridGeometry& geometry() const { return geometry_; }
  int order() const { return order_; }
  std::size_t component_count() const { return components_.size(); }
  std::span<const double> component(std::size_t c) const { return components_[c]; }
  const std::vector<std::vector<double>>& components() const { return components_; }
  double factor() const { return factor_; }
  double value(std::size_t c, std::size_t flat) const { return factor_ * components_[c][flat]; }

  /// Component index for the axis tuple `axes` (size == order).
  std::size_t component_index(std::span<const int> axes) const;
  std::vector<int> axes_of(std::size_t c) const;

  /// Pointwise Euclidean norm over all components.
  GridFunction magnitude() const;

 private:
  GridGeometry geometry_;
  int order_;
  std::vector<std::vector<double>> components_;
  double factor_ = 1.0;
};

/// First derivative along `axis`: second-order central differences inside,
/// second-order one-sided closures on the two boundary layers. Needs at least
/// three nodes along the axis.
std::vector<double> difference(const GridGeometry& g, std::span<const double> values, int axis);

/// Iterated first differences up to `order`. Throws std::invalid_argument when
/// order < 1 or order > max_order.
DerivativeTensor gradient(const GridFunction& u, int order,
                          int max_order = kDefaultMaxDerivativeOrder);

}  // namespace ilab
