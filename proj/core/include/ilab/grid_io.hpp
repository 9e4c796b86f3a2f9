#pragma once

// GFN1 grid files: a text header followed by a binary body.
//
//   GFN1
//   <n>
//   <shape, space separated>
//   <spacing, space separated>
//   <origin, space separated>
//   <blank line>
//   <row-major little-endian IEEE-754 float64 values>
//
// RSN1 raster-set files reuse the header with magic RSN1 and a body of one
// byte (0 or 1) per cell.

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "ilab/grid_function.hpp"

namespace ilab {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_grid_header(std::ostream& os, std::string_view magic, const GridGeometry& g);
/// Reads and validates the header, leaving the stream at the start of the body.
GridGeometry read_grid_header(std::istream& is, std::string_view magic);

void write_gfn(std::ostream& os, const GridFunction& u);
GridFunction read_gfn(std::istream& is);
void write_gfn(const std::filesystem::path& path, const GridFunction& u);
GridFunction read_gfn(const std::filesystem::path& path);

}  // namespace ilab
