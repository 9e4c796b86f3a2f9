#include "ilab/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ilab {

GridGeometry GridGeometry::cube(int n, double lo, double hi, std::size_t nodes) {
  GridGeometry g;
  g.n = n;
  for (int a = 0; a < n; ++a) {
    g.shape[a] = nodes;
    g.spacing[a] = (hi - lo) / static_cast<double>(nodes - 1);
    g.origin[a] = lo;
  }
  g.validate();
  return g;
}

double GridGeometry::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < n; ++a) v *= spacing[a];
  return v;
}

Index GridGeometry::unravel(std::size_t flat) const {
  Index idx{0, 0, 0};
  idx[2] = flat % shape[2];
  flat /= shape[2];
  idx[1] = flat % shape[1];
  idx[0] = flat / shape[1];
  return idx;
}

std::size_t GridGeometry::ravel(const Index& idx) const {
  return (idx[0] * shape[1] + idx[1]) * shape[2] + idx[2];
}

Point GridGeometry::position(const Index& idx) const {
  Point x{0.0, 0.0, 0.0};
  for (int a = 0; a < n; ++a) x[a] = origin[a] + static_cast<double>(idx[a]) * spacing[a];
  return x;
}

double GridGeometry::min_spacing() const {
  double h = spacing[0];
  for (int a = 1; a < n; ++a) h = std::min(h, spacing[a]);
  return h;
}

double GridGeometry::diameter() const {
  double d2 = 0.0;
  for (int a = 0; a < n; ++a) {
    const double len = static_cast<double>(shape[a] - 1) * spacing[a];
    d2 += len * len;
  }
  return std::sqrt(d2);
}

GridGeometry GridGeometry::refined() const {
  GridGeometry g = *this;
  for (int a = 0; a < n; ++a) {
    g.shape[a] = 2 * (shape[a] - 1) + 1;
    g.spacing[a] = spacing[a] / 2.0;
  }
  return g;
}

void GridGeometry::validate() const {
  if (n < 1 || n > kMaxDim) {
    throw std::invalid_argument("grid dimension must be 1, 2 or 3; got " + std::to_string(n));
  }
  for (int a = 0; a < kMaxDim; ++a) {
    if (a < n) {
      if (shape[a] < 2) throw std::invalid_argument("grid needs at least 2 nodes per axis");
      if (!(spacing[a] > 0.0) || !std::isfinite(spacing[a])) {
        throw std::invalid_argument("grid spacing must be positive and finite");
      }
      if (!std::isfinite(origin[a])) throw std::invalid_argument("grid origin must be finite");
    } else if (shape[a] != 1) {
      throw std::invalid_argument("unused grid axes must have shape 1");
    }
  }
}

GridFunction::GridFunction(GridGeometry geometry, std::vector<double> samples, double factor)
    : geometry_(geometry),
      samples_(std::make_shared<const std::vector<double>>(std::move(samples))),
      factor_(factor) {
  geometry_.validate();
  if (samples_->size() != geometry_.size()) {
    throw std::invalid_argument("value count " + std::to_string(samples_->size()) +
                                " does not match grid size " + std::to_string(geometry_.size()));
  }
  if (!std::isfinite(factor_)) throw std::invalid_argument("scale factor must be finite");
}

GridFunction GridFunction::sample(const GridGeometry& geometry,
                                  const std::function<double(const Point&)>& f) {
  geometry.validate();
  std::vector<double> values(geometry.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = f(geometry.position(geometry.unravel(i)));
  }
  return GridFunction(geometry, std::move(values));
}

std::vector<double> GridFunction::values() const {
  std::vector<double> out(samples_->begin(), samples_->end());
  if (factor_ != 1.0) {
    for (double& v : out) v *= factor_;
  }
  return out;
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double v : *samples_) m = std::max(m, std::abs(v));
  return std::abs(factor_) * m;
}

bool GridFunction::is_zero() const {
  return factor_ == 0.0 ||
         std::all_of(samples_->begin(), samples_->end(), [](double v) { return v == 0.0; });
}

GridFunction GridFunction::with_geometry(const GridGeometry& geometry) const {
  geometry.validate();
  if (geometry.size() != size()) throw std::invalid_argument("geometry size mismatch");
  GridFunction out = *this;
  out.geometry_ = geometry;
  return out;
}

GridFunction GridFunction::with_factor(double factor) const {
  if (!std::isfinite(factor)) throw std::invalid_argument("scale factor must be finite");
  GridFunction out = *this;
  out.factor_ = factor;
  return out;
}

bool on_boundary(const GridGeometry& g, const Index& idx) {
  for (int a = 0; a < g.n; ++a) {
    if (idx[a] == 0 || idx[a] + 1 == g.shape[a]) return true;
  }
  return false;
}

double GridFunction::boundary_max_abs() const {
  double m = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    if (on_boundary(geometry_, geometry_.unravel(i))) m = std::max(m, std::abs((*samples_)[i]));
  }
  return std::abs(factor_) * m;
}

std::optional<std::string> support_warning(const GridFunction& u) {
  const double level = u.boundary_max_abs();
  if (level == 0.0) return std::nullopt;
  std::ostringstream os;
  os << "non-compact-support: boundary layer reaches |u| = " << level;
  return os.str();
}

GridFunction dilate(const GridFunction& u, const Rational& lambda) {
  if (lambda <= 0) throw std::invalid_argument("dilation factor must be positive");
  GridGeometry g = u.geometry();
  const double num = static_cast<double>(lambda.numerator());
  const double den = static_cast<double>(lambda.denominator());
  for (int a = 0; a < g.n; ++a) {
    g.spacing[a] = g.spacing[a] * den / num;
    g.origin[a] = g.origin[a] * den / num;
  }
  return u.with_geometry(g);
}

GridFunction scale(const GridFunction& u, double c) { return u.with_factor(u.factor() * c); }

GridFunction add(const GridFunction& u, const GridFunction& v) {
  if (!(u.geometry() == v.geometry())) throw std::invalid_argument("add: grids differ");
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = u.value(i) + v.value(i);
  return GridFunction(u.geometry(), std::move(out));
}

}  // namespace ilab
