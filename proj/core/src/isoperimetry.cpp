#include "ilab/isoperimetry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "ilab/grid_io.hpp"

namespace ilab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool frame_has_outside_cell(const GridGeometry& g, const std::vector<std::uint8_t>& mask) {
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (!mask[i] && on_boundary(g, g.unravel(i))) return true;
  }
  return false;
}

// One lower-envelope pass along a line: out[q] = min_v f[v] + w (q - v)^2.
void envelope_1d(const std::vector<double>& f, double w, std::vector<double>& out,
                 std::vector<std::size_t>& v, std::vector<double>& z) {
  const std::size_t len = f.size();
  out.assign(len, kInf);
  std::size_t k = 0;
  bool any = false;
  for (std::size_t q = 0; q < len; ++q) {
    if (f[q] == kInf) continue;
    const double fq = f[q] + w * double(q) * double(q);
    if (!any) {
      any = true;
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
      k = 0;
      continue;
    }
    auto intersect = [&](std::size_t p) {
      const double vp = double(v[p]);
      return (fq - (f[v[p]] + w * vp * vp)) / (2.0 * w * (double(q) - vp));
    };
    // z[0] = -inf keeps k >= 0.
    double s = intersect(k);
    while (s <= z[k]) s = intersect(--k);
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  if (!any) return;
  k = 0;
  for (std::size_t q = 0; q < len; ++q) {
    while (z[k + 1] < double(q)) ++k;
    const double dq = double(q) - double(v[k]);
    out[q] = f[v[k]] + w * dq * dq;
  }
}

}  // namespace

RasterSet::RasterSet(GridGeometry geometry, std::vector<std::uint8_t> mask)
    : RasterSet(unchecked(geometry, std::move(mask))) {
  if (!frame_has_outside_cell(geometry_, mask_)) {
    throw std::invalid_argument("raster set must leave at least one boundary-frame cell outside");
  }
}

RasterSet RasterSet::unchecked(GridGeometry geometry, std::vector<std::uint8_t> mask) {
  geometry.validate();
  if (mask.size() != geometry.size()) throw std::invalid_argument("mask size does not match grid");
  for (auto& m : mask) m = m ? 1 : 0;
  RasterSet s;
  s.geometry_ = geometry;
  s.mask_ = std::move(mask);
  return s;
}

std::size_t RasterSet::count() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
}

std::size_t RasterSet::boundary_cells() const {
  const GridGeometry& g = geometry_;
  const Index strides = g.strides();
  std::size_t count = 0;
  for (std::size_t i = 0; i < mask_.size(); ++i) {
    if (!mask_[i]) continue;
    const Index idx = g.unravel(i);
    bool edge = false;
    for (int a = 0; a < g.n && !edge; ++a) {
      if (idx[a] == 0 || idx[a] + 1 == g.shape[a]) {
        edge = true;
      } else if (!mask_[i - strides[a]] || !mask_[i + strides[a]]) {
        edge = true;
      }
    }
    if (edge) ++count;
  }
  return count;
}

double RasterSet::perimeter_proxy() const {
  double h = geometry_.spacing[0];
  for (int a = 1; a < geometry_.n; ++a) h = std::max(h, geometry_.spacing[a]);
  return static_cast<double>(boundary_cells()) * std::pow(h, geometry_.n - 1);
}

bool RasterSet::subset_of(const RasterSet& other) const {
  if (!(geometry_ == other.geometry_)) throw std::invalid_argument("subset_of: grids differ");
  for (std::size_t i = 0; i < mask_.size(); ++i) {
    if (mask_[i] && !other.mask_[i]) return false;
  }
  return true;
}

RasterSet raster_ball(const GridGeometry& g, const Point& center, double radius) {
  std::vector<std::uint8_t> mask(g.size(), 0);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const Point x = g.position(g.unravel(i));
    double r2 = 0.0;
    for (int a = 0; a < g.n; ++a) r2 += (x[a] - center[a]) * (x[a] - center[a]);
    mask[i] = r2 <= radius * radius ? 1 : 0;
  }
  return RasterSet::unchecked(g, std::move(mask));
}

RasterSet superlevel_set(const GridFunction& u, double level) {
  std::vector<std::uint8_t> mask(u.size(), 0);
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = u.value(i) > level ? 1 : 0;
  return RasterSet::unchecked(u.geometry(), std::move(mask));
}

DistanceField distance_transform(const RasterSet& s, DistanceDirection direction) {
  const GridGeometry& g = s.geometry();
  const bool to_set = direction == DistanceDirection::to_set;
  const auto& mask = s.mask();

  bool isotropic = true;
  for (int a = 1; a < g.n; ++a) isotropic = isotropic && g.spacing[a] == g.spacing[0];

  // Squared distances, in lattice units when the grid is isotropic.
  std::vector<double> d2(mask.size(), kInf);
  bool any_target = false;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const bool target = to_set ? mask[i] != 0 : mask[i] == 0;
    if (target) {
      d2[i] = 0.0;
      any_target = true;
    }
  }
  if (!any_target) {
    throw std::invalid_argument(to_set ? "distance to an empty set is undefined"
                                       : "distance to an empty complement is undefined");
  }

  std::vector<double> line, out;
  std::vector<std::size_t> v;
  std::vector<double> z;
  for (int axis = 0; axis < g.n; ++axis) {
    const std::size_t len = g.shape[axis];
    const std::size_t stride = g.strides()[axis];
    const double w = isotropic ? 1.0 : g.spacing[axis] * g.spacing[axis];
    line.resize(len);
    v.resize(len);
    z.resize(len + 1);
    for (std::size_t base = 0; base < d2.size(); ++base) {
      if ((base / stride) % len != 0) continue;
      for (std::size_t i = 0; i < len; ++i) line[i] = d2[base + i * stride];
      envelope_1d(line, w, out, v, z);
      for (std::size_t i = 0; i < len; ++i) d2[base + i * stride] = out[i];
    }
  }

  DistanceField field{g, std::vector<double>(d2.size())};
  const double unit = isotropic ? g.spacing[0] : 1.0;
  for (std::size_t i = 0; i < d2.size(); ++i) field.distance[i] = std::sqrt(d2[i]) * unit;
  return field;
}

RasterSet inner_parallel(const RasterSet& s, double t) {
  if (t < 0.0) throw std::invalid_argument("parallel-set distance must be nonnegative");
  std::vector<std::uint8_t> mask(s.mask().size(), 0);
  if (!s.empty()) {
    if (s.count() == s.mask().size()) {
      return RasterSet::unchecked(s.geometry(), s.mask());
    }
    const DistanceField d = distance_transform(s, DistanceDirection::to_complement);
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = d.distance[i] > t ? 1 : 0;
  }
  return RasterSet::unchecked(s.geometry(), std::move(mask));
}

RasterSet outer_parallel(const RasterSet& s, double t) {
  if (t < 0.0) throw std::invalid_argument("parallel-set distance must be nonnegative");
  std::vector<std::uint8_t> mask(s.mask().size(), 0);
  if (!s.empty()) {
    const DistanceField d = distance_transform(s, DistanceDirection::to_set);
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = d.distance[i] < t ? 1 : 0;
  }
  return RasterSet::unchecked(s.geometry(), std::move(mask));
}

double unit_ball_volume(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi / 3.0;
    default: throw std::invalid_argument("unit ball volume is tabulated for n <= 3 only");
  }
}

double ball_inner_measure(double volume, double t, int n) {
  if (volume < 0.0 || t < 0.0) throw std::invalid_argument("volume and t must be nonnegative");
  const double omega = unit_ball_volume(n);
  const double rho = std::pow(volume / omega, 1.0 / n);
  if (t == 0.0) return volume;
  return omega * std::pow(std::max(rho - t, 0.0), n);
}

std::size_t BmrReport::violations() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const BmrRecord& r) { return r.violation; }));
}

nlohmann::json BmrReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : records) {
    rows.push_back({{"check", "inner-parallel"},
                    {"t", r.t},
                    {"set_inner", r.set_inner},
                    {"ball_inner", r.ball_inner},
                    {"margin", r.margin},
                    {"tolerance", r.tolerance},
                    {"violation", r.violation}});
  }
  return {{"measure", measure},
          {"perimeter_proxy", perimeter_proxy},
          {"tolerance", tolerance},
          {"violations", violations()},
          {"records", rows}};
}

BmrReport lemma_bmr_check(const RasterSet& s, const std::vector<double>& ts) {
  if (s.empty()) throw std::invalid_argument("lemma_bmr_check needs a nonempty set");
  const GridGeometry& g = s.geometry();
  double h = g.spacing[0];
  for (int a = 1; a < g.n; ++a) h = std::max(h, g.spacing[a]);

  BmrReport rep;
  rep.measure = s.measure();
  rep.perimeter_proxy = s.perimeter_proxy();
  rep.tolerance = kBmrToleranceConstant * rep.perimeter_proxy * h;

  const DistanceField d = distance_transform(s, DistanceDirection::to_complement);
  for (double t : ts) {
    if (t < 0.0) throw std::invalid_argument("t must be nonnegative");
    std::size_t inside = 0;
    for (double x : d.distance) inside += x > t ? 1 : 0;
    BmrRecord r;
    r.t = t;
    r.set_inner = static_cast<double>(inside) * g.cell_volume();
    r.ball_inner = ball_inner_measure(rep.measure, t, g.n);
    r.margin = r.set_inner - r.ball_inner;
    r.tolerance = rep.tolerance;
    r.violation = r.margin > r.tolerance;
    rep.records.push_back(r);
  }
  return rep;
}

void write_rsn(std::ostream& os, const RasterSet& s) {
  write_grid_header(os, "RSN1", s.geometry());
  for (std::uint8_t m : s.mask()) os.put(static_cast<char>(m));
  if (!os) throw FormatError("failed writing RSN1 body");
}

RasterSet read_rsn(std::istream& is) {
  const GridGeometry g = read_grid_header(is, "RSN1");
  std::vector<std::uint8_t> mask(g.size());
  for (auto& m : mask) {
    const int c = is.get();
    if (c == std::char_traits<char>::eof()) throw FormatError("RSN1 body shorter than declared");
    if (c != 0 && c != 1) throw FormatError("RSN1 body bytes must be 0 or 1");
    m = static_cast<std::uint8_t>(c);
  }
  if (is.peek() != std::char_traits<char>::eof()) {
    throw FormatError("RSN1 body longer than the header declares");
  }
  try {
    return RasterSet(g, std::move(mask));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

void write_rsn(const std::filesystem::path& path, const RasterSet& s) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot open '" + path.string() + "' for writing");
  write_rsn(os, s);
}

RasterSet read_rsn(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open '" + path.string() + "'");
  return read_rsn(is);
}

}  // namespace ilab
