#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ilab/exponent.hpp"

namespace ilab {

inline constexpr int kMaxDim = 3;

using Index = std::array<std::size_t, kMaxDim>;
using Point = std::array<double, kMaxDim>;

/// Uniform axis-aligned grid in dimension n <= 3. Unused trailing axes have
/// shape 1. Node i along axis a sits at origin[a] + i * spacing[a]; storage is
/// row-major with the last used axis fastest.
struct GridGeometry {
  int n = 1;
  Index shape{1, 1, 1};
  Point spacing{1.0, 1.0, 1.0};
  Point origin{0.0, 0.0, 0.0};

  /// Cube [lo, hi]^n sampled with `nodes` points per axis.
  static GridGeometry cube(int n, double lo, double hi, std::size_t nodes);

  std::size_t size() const { return shape[0] * shape[1] * shape[2]; }
  /// Measure represented by each node (midpoint rule).
  double cell_volume() const;
  Index strides() const { return {shape[1] * shape[2], shape[2], 1}; }
  Index unravel(std::size_t flat) const;
  std::size_t ravel(const Index& idx) const;
  Point position(const Index& idx) const;
  double min_spacing() const;
  /// Euclidean length of the box diagonal.
  double diameter() const;
  /// Same box with spacing halved along every used axis.
  GridGeometry refined() const;

  /// Throws std::invalid_argument on n outside 1..3, nonpositive spacing or
  /// fewer than two nodes on a used axis.
  void validate() const;

  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;
};

/// Real scalar field sampled on a GridGeometry. Immutable after construction.
///
/// The logical value at node i is factor() * samples()[i]. Scalar
/// multiplication only changes the factor and dilation only changes the
/// geometry, so both share the sample array and are exact.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(GridGeometry geometry, std::vector<double> samples, double factor = 1.0);

  static GridFunction sample(const GridGeometry& geometry,
                             const std::function<double(const Point&)>& f);
  static GridFunction zeros(const GridGeometry& geometry) {
    return GridFunction(geometry, std::vector<double>(geometry.size(), 0.0));
  }

  const GridGeometry& geometry() const { return geometry_; }
  int dim() const { return geometry_.n; }
  std::size_t size() const { return samples_ ? samples_->size() : 0; }

  std::span<const double> samples() const { return *samples_; }
  double factor() const { return factor_; }
  double value(std::size_t flat) const { return factor_ * (*samples_)[flat]; }
  double operator[](std::size_t flat) const { return value(flat); }
  double at(const Index& idx) const { return value(geometry_.ravel(idx)); }
  /// Logical values with the factor applied.
  std::vector<double> values() const;

  double max_abs() const;
  bool is_zero() const;
  /// Largest |value| on the outer layer of nodes.
  double boundary_max_abs() const;

  GridFunction with_geometry(const GridGeometry& geometry) const;
  GridFunction with_factor(double factor) const;

 private:
  GridGeometry geometry_;
  std::shared_ptr<const std::vector<double>> samples_;
  double factor_ = 1.0;
};

/// Warning text when the boundary layer is not identically zero.
std::optional<std::string> support_warning(const GridFunction& u);

/// u_lambda(x) = u(lambda x), by reinterpreting spacing and origin (divided by
/// lambda). No resampling: the sample array is shared.
GridFunction dilate(const GridFunction& u, const Rational& lambda);

/// c * u, exact: only the factor changes.
GridFunction scale(const GridFunction& u, double c);

/// Pointwise sum of two functions on the same grid.
GridFunction add(const GridFunction& u, const GridFunction& v);

/// True for nodes on the outer layer of the box along any used axis.
bool on_boundary(const GridGeometry& g, const Index& idx);

}  // namespace ilab
