#pragma once

// Raster geometry for comparing inner parallel sets against balls.
//
//   (M)_t = { x : dist(x, M^c) > t }     inner parallel set
//   (M)^t = { x : dist(x, M)   < t }     outer parallel set
//
// Distances run between cell centers and membership is per cell, so (M)_0 is
// exactly M on a raster.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include <nlohmann/json.hpp>

#include "ilab/grid_function.hpp"

namespace ilab {

class RasterSet {
 public:
  RasterSet() = default;
  /// Throws std::invalid_argument unless the boundary frame holds at least one
  /// cell outside the set.
  RasterSet(GridGeometry geometry, std::vector<std::uint8_t> mask);

  /// Same as the constructor without the boundary-frame requirement; used for
  /// derived sets such as parallel sets, which may be empty or arbitrary.
  static RasterSet unchecked(GridGeometry geometry, std::vector<std::uint8_t> mask);

  const GridGeometry& geometry() const { return geometry_; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }
  bool contains(std::size_t flat) const { return mask_[flat] != 0; }
  std::size_t count() const;
  double measure() const { return static_cast<double>(count()) * geometry_.cell_volume(); }
  bool empty() const { return count() == 0; }
  /// Cells of the set with a face neighbour outside it (or on the box frame).
  std::size_t boundary_cells() const;
  /// boundary_cells() * h^(n-1) with h the largest spacing.
  double perimeter_proxy() const;
  /// Every cell of this set also belongs to `other`.
  bool subset_of(const RasterSet& other) const;

  friend bool operator==(const RasterSet&, const RasterSet&) = default;

 private:
  GridGeometry geometry_;
  std::vector<std::uint8_t> mask_;
};

/// Cells whose center lies within `radius` of `center`.
RasterSet raster_ball(const GridGeometry& g, const Point& center, double radius);
/// Cells where u > level.
RasterSet superlevel_set(const GridFunction& u, double level);

enum class DistanceDirection { to_complement, to_set };

struct DistanceField {
  GridGeometry geometry;
  std::vector<double> distance;
};

/// Exact Euclidean distance from each cell center to the nearest cell center
/// of the complement (to_complement) or of the set (to_set), by separable
/// lower-envelope-of-parabolas passes. Throws std::invalid_argument when the
/// target region is empty.
DistanceField distance_transform(const RasterSet& s, DistanceDirection direction);

RasterSet inner_parallel(const RasterSet& s, double t);
RasterSet outer_parallel(const RasterSet& s, double t);

/// Volume of the unit ball for n <= 3.
double unit_ball_volume(int n);

/// omega_n * max(rho - t, 0)^n with rho the radius of the ball of measure V.
double ball_inner_measure(double volume, double t, int n);

struct BmrRecord {
  double t = 0.0;
  double set_inner = 0.0;   // |(S)_t|
  double ball_inner = 0.0;  // |(B)_t| for the ball with |B| = |S|
  double margin = 0.0;      // set_inner - ball_inner
  double tolerance = 0.0;
  bool violation = false;
};

struct BmrReport {
  double measure = 0.0;
  double perimeter_proxy = 0.0;
  double tolerance = 0.0;
  std::vector<BmrRecord> records;
  std::size_t violations() const;
  nlohmann::json to_json() const;
};

/// Rasterization constant in tolerance = c * perimeter_proxy * h.
inline constexpr double kBmrToleranceConstant = 1.0;

/// Compares |(S)_t| with the inner parallel measure of the equal-measure ball
/// for every t, allowing the perimeter * h rasterization tolerance.
BmrReport lemma_bmr_check(const RasterSet& s, const std::vector<double>& ts);

void write_rsn(std::ostream& os, const RasterSet& s);
RasterSet read_rsn(std::istream& is);
void write_rsn(const std::filesystem::path& path, const RasterSet& s);
RasterSet read_rsn(const std::filesystem::path& path);

}  // namespace ilab
