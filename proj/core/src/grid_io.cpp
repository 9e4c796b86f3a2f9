#include "ilab/grid_io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace ilab {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string next_line(std::istream& is, const char* what) {
  std::string line;
  if (!std::getline(is, line)) throw FormatError(std::string("grid file truncated before ") + what);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

template <typename T>
std::vector<T> parse_list(const std::string& line, const char* what) {
  std::istringstream ls(line);
  std::vector<T> out;
  T v{};
  while (ls >> v) out.push_back(v);
  if (!ls.eof()) throw FormatError(std::string("malformed ") + what + " line: '" + line + "'");
  return out;
}

std::uint64_t to_little(std::uint64_t bits) {
  if constexpr (std::endian::native == std::endian::little) {
    return bits;
  } else {
    return __builtin_bswap64(bits);
  }
}

}  // namespace

void write_grid_header(std::ostream& os, std::string_view magic, const GridGeometry& g) {
  os << magic << '\n' << g.n << '\n';
  auto row = [&](auto get) {
    for (int a = 0; a < g.n; ++a) os << (a ? " " : "") << get(a);
    os << '\n';
  };
  row([&](int a) { return std::to_string(g.shape[a]); });
  row([&](int a) { return format_double(g.spacing[a]); });
  row([&](int a) { return format_double(g.origin[a]); });
  os << '\n';
}

GridGeometry read_grid_header(std::istream& is, std::string_view magic) {
  const std::string m = next_line(is, "magic");
  if (m != magic) {
    throw FormatError("bad magic '" + m + "', expected '" + std::string(magic) + "'");
  }
  GridGeometry g;
  const auto dims = parse_list<int>(next_line(is, "dimension"), "dimension");
  if (dims.size() != 1) throw FormatError("dimension line must hold one integer");
  g.n = dims[0];
  if (g.n < 1 || g.n > kMaxDim) throw FormatError("dimension must be 1, 2 or 3");
  const auto shape = parse_list<std::size_t>(next_line(is, "shape"), "shape");
  const auto spacing = parse_list<double>(next_line(is, "spacing"), "spacing");
  const auto origin = parse_list<double>(next_line(is, "origin"), "origin");
  const auto n = static_cast<std::size_t>(g.n);
  if (shape.size() != n || spacing.size() != n || origin.size() != n) {
    throw FormatError("shape, spacing and origin must each list n values");
  }
  for (std::size_t a = 0; a < n; ++a) {
    g.shape[a] = shape[a];
    g.spacing[a] = spacing[a];
    g.origin[a] = origin[a];
  }
  if (!next_line(is, "body separator").empty()) {
    throw FormatError("expected a blank line between header and body");
  }
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return g;
}

void write_gfn(std::ostream& os, const GridFunction& u) {
  write_grid_header(os, "GFN1", u.geometry());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(u.value(i)));
    char bytes[8];
    std::memcpy(bytes, &bits, 8);
    os.write(bytes, 8);
  }
  if (!os) throw FormatError("failed writing GFN1 body");
}

GridFunction read_gfn(std::istream& is) {
  const GridGeometry g = read_grid_header(is, "GFN1");
  std::vector<double> values(g.size());
  for (double& v : values) {
    char bytes[8];
    if (!is.read(bytes, 8)) throw FormatError("GFN1 body shorter than the header declares");
    std::uint64_t bits;
    std::memcpy(&bits, bytes, 8);
    v = std::bit_cast<double>(to_little(bits));
  }
  if (is.peek() != std::char_traits<char>::eof()) {
    throw FormatError("GFN1 body longer than the header declares");
  }
  return GridFunction(g, std::move(values));
}

void write_gfn(const std::filesystem::path& path, const GridFunction& u) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot open '" + path.string() + "' for writing");
  write_gfn(os, u);
}

GridFunction read_gfn(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open '" + path.string() + "'");
  return read_gfn(is);
}

}  // namespace ilab
