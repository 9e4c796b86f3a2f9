#include "ilab/family.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace ilab {

namespace {

struct GeneratorName {
  Generator g;
  std::string_view name;
};

constexpr GeneratorName kNames[] = {
    {Generator::gaussian, "gaussian"},       {Generator::power_peak, "power-peak"},
    {Generator::power_tail, "power-tail"},   {Generator::bump, "bump"},
    {Generator::tent, "tent"},               {Generator::smoothed_noise, "smoothed-noise"},
    {Generator::multi_bump, "multi-bump"},
};

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

double radius(const Point& x, double center, int n) {
  double r2 = 0.0;
  for (int a = 0; a < n; ++a) r2 += (x[a] - center) * (x[a] - center);
  return std::sqrt(r2);
}

double bump_profile(double rho) {
  if (rho >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - rho * rho));
}

// Separable gaussian smoothing with zero padding.
std::vector<double> smooth(const GridGeometry& g, std::vector<double> values, double width) {
  for (int axis = 0; axis < g.n; ++axis) {
    const double sigma = width / g.spacing[axis];
    const auto reach = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(2 * reach + 1);
    double total = 0.0;
    for (std::ptrdiff_t k = -reach; k <= reach; ++k) {
      const double w = sigma > 0 ? std::exp(-0.5 * double(k * k) / (sigma * sigma)) : 1.0;
      kernel[k + reach] = w;
      total += w;
    }
    for (double& w : kernel) w /= total;

    const std::size_t len = g.shape[axis];
    const std::size_t stride = g.strides()[axis];
    std::vector<double> out(values.size(), 0.0);
    for (std::size_t base = 0; base < values.size(); ++base) {
      if ((base / stride) % len != 0) continue;
      for (std::size_t i = 0; i < len; ++i) {
        double acc = 0.0;
        for (std::ptrdiff_t k = -reach; k <= reach; ++k) {
          const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) + k;
          if (j < 0 || j >= static_cast<std::ptrdiff_t>(len)) continue;
          acc += kernel[k + reach] * values[base + static_cast<std::size_t>(j) * stride];
        }
        out[base + i * stride] = acc;
      }
    }
    values = std::move(out);
  }
  return values;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

GeneratedSample finish(const GridGeometry& g, std::vector<double> values, ParamValues params,
                       std::uint64_t seed) {
  GeneratedSample out;
  double level = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (on_boundary(g, g.unravel(i))) {
      level = std::max(level, std::abs(values[i]));
      values[i] = 0.0;
    }
  }
  out.u = GridFunction(g, std::move(values));
  out.params = std::move(params);
  out.seed = seed;
  out.truncation_level = level;
  return out;
}

GeneratedSample sample_family(const FamilySpec& spec, const ParamValues& p, std::uint64_t seed,
                              std::mt19937_64& rng) {
  const GridGeometry& g = spec.grid;
  const int n = g.n;
  const double amplitude = p.at("amplitude");
  std::vector<double> values(g.size(), 0.0);
  auto each = [&](auto&& f) {
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = f(g.position(g.unravel(i)));
  };

  switch (spec.generator) {
    case Generator::gaussian: {
      const double w = p.at("width"), c = p.at("center");
      each([&](const Point& x) {
        const double r = radius(x, c, n) / w;
        return amplitude * std::exp(-r * r);
      });
      break;
    }
    case Generator::power_peak: {
      const double a = p.at("exponent"), cap = p.at("cap"), c = p.at("center");
      each([&](const Point& x) {
        const double r = radius(x, c, n);
        return amplitude * (r == 0.0 ? cap : std::min(cap, std::pow(r, -a)));
      });
      break;
    }
    case Generator::power_tail: {
      const double w = p.at("width"), a = p.at("exponent"), c = p.at("center");
      each([&](const Point& x) { return amplitude * std::pow(1.0 + radius(x, c, n) / w, -a); });
      break;
    }
    case Generator::bump: {
      const double w = p.at("width"), c = p.at("center");
      each([&](const Point& x) { return amplitude * bump_profile(radius(x, c, n) / w); });
      break;
    }
    case Generator::tent: {
      const double w = p.at("width"), c = p.at("center");
      each([&](const Point& x) { return amplitude * std::max(0.0, 1.0 - radius(x, c, n) / w); });
      break;
    }
    case Generator::smoothed_noise: {
      for (double& v : values) v = uniform(rng, -1.0, 1.0);
      values = smooth(g, std::move(values), p.at("width"));
      for (std::size_t i = 0; i < values.size(); ++i) {
        const Index idx = g.unravel(i);
        double window = 1.0;
        for (int a = 0; a < n; ++a) {
          const double xi = 2.0 * double(idx[a]) / double(g.shape[a] - 1) - 1.0;
          window *= bump_profile(std::abs(xi));
        }
        values[i] *= window;
      }
      double m = 0.0;
      for (double v : values) m = std::max(m, std::abs(v));
      if (m > 0.0) {
        for (double& v : values) v *= amplitude / m;
      }
      break;
    }
    case Generator::multi_bump: {
      const auto count = static_cast<int>(p.at("count"));
      const double w = p.at("width");
      for (int b = 0; b < count; ++b) {
        Point center{0.0, 0.0, 0.0};
        for (int a = 0; a < n; ++a) {
          const double len = double(g.shape[a] - 1) * g.spacing[a];
          const double mid = g.origin[a] + 0.5 * len;
          center[a] = uniform(rng, mid - 0.3 * len, mid + 0.3 * len);
        }
        const double width = uniform(rng, 0.5 * w, w);
        const double height = uniform(rng, 0.5 * amplitude, amplitude);
        for (std::size_t i = 0; i < values.size(); ++i) {
          const Point x = g.position(g.unravel(i));
          double r2 = 0.0;
          for (int a = 0; a < n; ++a) r2 += (x[a] - center[a]) * (x[a] - center[a]);
          values[i] += height * bump_profile(std::sqrt(r2) / width);
        }
      }
      break;
    }
  }
  return finish(g, std::move(values), p, seed);
}

ParamRange parse_range(const nlohmann::json& j, const std::string& name) {
  if (j.is_number()) return {j.get<double>(), j.get<double>()};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw std::invalid_argument("parameter '" + name + "' must be a number or [lo, hi]");
}

Point parse_axis_values(const nlohmann::json& j, int n, const char* what) {
  Point out{0.0, 0.0, 0.0};
  if (j.is_number()) {
    for (int a = 0; a < n; ++a) out[a] = j.get<double>();
    return out;
  }
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw std::invalid_argument(std::string("grid ") + what + " must be a number or one value per axis");
  }
  for (int a = 0; a < n; ++a) out[a] = j[a].get<double>();
  return out;
}

}  // namespace

std::string_view to_string(Generator g) {
  for (const auto& e : kNames) {
    if (e.g == g) return e.name;
  }
  return "gaussian";
}

Generator parse_generator(std::string_view name) {
  for (const auto& e : kNames) {
    if (e.name == name) return e.g;
  }
  throw std::invalid_argument("unknown generator '" + std::string(name) + "'");
}

ParamValues generator_defaults(Generator g) {
  switch (g) {
    case Generator::gaussian: return {{"amplitude", 1.0}, {"width", 1.0}, {"center", 0.0}};
    case Generator::power_peak:
      return {{"amplitude", 1.0}, {"exponent", 1.0}, {"cap", 4.0}, {"center", 0.0}};
    case Generator::power_tail:
      return {{"amplitude", 1.0}, {"width", 1.0}, {"exponent", 2.0}, {"center", 0.0}};
    case Generator::bump: return {{"amplitude", 1.0}, {"width", 1.0}, {"center", 0.0}};
    case Generator::tent: return {{"amplitude", 1.0}, {"width", 1.0}, {"center", 0.0}};
    case Generator::smoothed_noise: return {{"amplitude", 1.0}, {"width", 0.5}};
    case Generator::multi_bump: return {{"amplitude", 1.0}, {"width", 1.0}, {"count", 3.0}};
  }
  return {};
}

void FamilySpec::validate() const {
  grid.validate();
  const ParamValues defaults = generator_defaults(generator);
  for (const auto& [name, range] : params) {
    require(defaults.count(name) == 1,
            "generator '" + std::string(to_string(generator)) + "' has no parameter '" + name + "'");
    require(range.lo <= range.hi, "parameter '" + name + "' has an empty range");
    require(std::isfinite(range.lo) && std::isfinite(range.hi),
            "parameter '" + name + "' must be finite");
  }
  auto lo = [&](const char* name) {
    auto it = params.find(name);
    return it == params.end() ? defaults.at(name) : it->second.lo;
  };
  if (defaults.count("width")) require(lo("width") > 0.0, "width must be positive");
  if (defaults.count("exponent")) require(lo("exponent") > 0.0, "exponent must be positive");
  if (defaults.count("cap")) require(lo("cap") > 0.0, "cap must be positive and finite");
  if (defaults.count("count")) require(lo("count") >= 1.0, "count must be at least 1");
}

FamilySpec FamilySpec::refined() const {
  FamilySpec out = *this;
  out.grid = grid.refined();
  return out;
}

FamilySpec FamilySpec::from_json(const nlohmann::json& j) {
  FamilySpec spec;
  spec.generator = parse_generator(j.at("generator").get<std::string>());
  if (j.contains("params")) {
    for (const auto& [name, value] : j.at("params").items()) {
      spec.params[name] = parse_range(value, name);
    }
  }
  const auto& grid = j.at("grid");
  const auto& shape = grid.at("shape");
  if (!shape.is_array() || shape.empty() || shape.size() > kMaxDim) {
    throw std::invalid_argument("grid shape must list 1 to 3 axis sizes");
  }
  spec.grid.n = static_cast<int>(shape.size());
  for (int a = 0; a < spec.grid.n; ++a) spec.grid.shape[a] = shape[a].get<std::size_t>();
  spec.grid.spacing = parse_axis_values(grid.at("spacing"), spec.grid.n, "spacing");
  for (int a = spec.grid.n; a < kMaxDim; ++a) spec.grid.spacing[a] = 1.0;
  spec.grid.origin = grid.contains("origin") ? parse_axis_values(grid.at("origin"), spec.grid.n, "origin")
                                             : Point{0.0, 0.0, 0.0};
  if (j.contains("seeds")) {
    const auto& seeds = j.at("seeds");
    if (seeds.is_array()) {
      for (const auto& s : seeds) spec.seeds.push_back(s.get<std::uint64_t>());
    } else {
      const auto first = seeds.value("first", std::uint64_t{0});
      const auto count = seeds.at("count").get<std::uint64_t>();
      for (std::uint64_t s = 0; s < count; ++s) spec.seeds.push_back(first + s);
    }
  } else {
    spec.seeds.push_back(0);
  }
  spec.validate();
  return spec;
}

nlohmann::json FamilySpec::to_json() const {
  nlohmann::json params_json = nlohmann::json::object();
  for (const auto& [name, r] : params) {
    params_json[name] = r.fixed() ? nlohmann::json(r.lo) : nlohmann::json::array({r.lo, r.hi});
  }
  nlohmann::json shape = nlohmann::json::array(), spacing = nlohmann::json::array(),
                 origin = nlohmann::json::array();
  for (int a = 0; a < grid.n; ++a) {
    shape.push_back(grid.shape[a]);
    spacing.push_back(grid.spacing[a]);
    origin.push_back(grid.origin[a]);
  }
  return {{"generator", std::string(to_string(generator))},
          {"params", params_json},
          {"grid", {{"shape", shape}, {"spacing", spacing}, {"origin", origin}}},
          {"seeds", seeds}};
}

GeneratedSample generate(const FamilySpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  ParamValues values = generator_defaults(spec.generator);
  for (const auto& [name, range] : spec.params) {
    values[name] = range.fixed() ? range.lo : uniform(rng, range.lo, range.hi);
  }
  if (values.count("count")) values["count"] = std::floor(values["count"]);
  return sample_family(spec, values, seed, rng);
}

GeneratedSample generate_with(const FamilySpec& spec, const ParamValues& params, std::uint64_t seed) {
  spec.validate();
  ParamValues values = generator_defaults(spec.generator);
  for (const auto& [name, range] : spec.params) values[name] = range.lo;
  for (const auto& [name, v] : params) {
    auto it = spec.params.find(name);
    if (it == spec.params.end()) {
      require(values.count(name) == 1, "unknown parameter '" + name + "'");
      require(v == values[name], "parameter '" + name + "' is not declared by the family");
    } else {
      require(it->second.contains(v), "parameter '" + name + "' = " + std::to_string(v) +
                                          " outside declared range");
    }
    values[name] = v;
  }
  if (values.count("count")) values["count"] = std::floor(values["count"]);
  std::mt19937_64 rng(seed);
  return sample_family(spec, values, seed, rng);
}

}  // namespace ilab
