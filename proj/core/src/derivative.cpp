#include "ilab/derivative.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ilab {

DerivativeTensor::DerivativeTensor(GridGeometry geometry, int order,
                                   std::vector<std::vector<double>> components, double factor)
    : geometry_(geometry), order_(order), components_(std::move(components)), factor_(factor) {
  std::size_t expected = 1;
  for (int i = 0; i < order_; ++i) expected *= static_cast<std::size_t>(geometry_.n);
  if (components_.size() != expected) {
    throw std::invalid_argument("derivative tensor needs n^order components");
  }
}

std::size_t DerivativeTensor::component_index(std::span<const int> axes) const {
  if (axes.size() != static_cast<std::size_t>(order_)) {
    throw std::invalid_argument("axis tuple length must equal the derivative order");
  }
  std::size_t c = 0;
  for (int a : axes) {
    if (a < 0 || a >= geometry_.n) throw std::out_of_range("axis out of range");
    c = c * static_cast<std::size_t>(geometry_.n) + static_cast<std::size_t>(a);
  }
  return c;
}

std::vector<int> DerivativeTensor::axes_of(std::size_t c) const {
  std::vector<int> axes(order_);
  for (int i = order_ - 1; i >= 0; --i) {
    axes[i] = static_cast<int>(c % static_cast<std::size_t>(geometry_.n));
    c /= static_cast<std::size_t>(geometry_.n);
  }
  return axes;
}

GridFunction DerivativeTensor::magnitude() const {
  std::vector<double> mag(geometry_.size(), 0.0);
  for (const auto& comp : components_) {
    for (std::size_t i = 0; i < mag.size(); ++i) mag[i] += comp[i] * comp[i];
  }
  for (double& m : mag) m = std::sqrt(m);
  return GridFunction(geometry_, std::move(mag), std::abs(factor_));
}

std::vector<double> difference(const GridGeometry& g, std::span<const double> values, int axis) {
  const std::size_t len = g.shape[axis];
  if (len < 3) {
    throw std::invalid_argument("finite differences need at least 3 nodes along axis " +
                                std::to_string(axis));
  }
  const std::size_t stride = g.strides()[axis];
  const double inv2h = 1.0 / (2.0 * g.spacing[axis]);
  std::vector<double> out(values.size());

  // Iterate over every line parallel to `axis`.
  const std::size_t total = values.size();
  for (std::size_t base = 0; base < total; ++base) {
    if ((base / stride) % len != 0) continue;  // not the first node of a line
    auto v = [&](std::size_t i) { return values[base + i * stride]; };
    out[base] = (-3.0 * v(0) + 4.0 * v(1) - v(2)) * inv2h;
    for (std::size_t i = 1; i + 1 < len; ++i) {
      out[base + i * stride] = (v(i + 1) - v(i - 1)) * inv2h;
    }
    const std::size_t e = len - 1;
    out[base + e * stride] = (3.0 * v(e) - 4.0 * v(e - 1) + v(e - 2)) * inv2h;
  }
  return out;
}

DerivativeTensor gradient(const GridFunction& u, int order, int max_order) {
  if (order < 1) throw std::invalid_argument("derivative order must be at least 1");
  if (order > max_order) {
    throw std::invalid_argument("derivative order " + std::to_string(order) +
                                " exceeds configured maximum " + std::to_string(max_order));
  }
  const GridGeometry& g = u.geometry();
  std::vector<std::vector<double>> level{std::vector<double>(u.samples().begin(), u.samples().end())};
  for (int m = 0; m < order; ++m) {
    std::vector<std::vector<double>> next;
    next.reserve(level.size() * static_cast<std::size_t>(g.n));
    for (const auto& comp : level) {
      for (int a = 0; a < g.n; ++a) next.push_back(difference(g, comp, a));
    }
    level = std::move(next);
  }
  return DerivativeTensor(g, order, std::move(level), u.factor());
}

}  // namespace ilab
