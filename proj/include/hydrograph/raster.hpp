#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hydrograph/geometry.hpp"

namespace hydrograph {

struct CellIndex {
  std::size_t row = 0;
  std::size_t col = 0;

  friend bool operator==(const CellIndex&, const CellIndex&) = default;
  friend auto operator<=>(const CellIndex&, const CellIndex&) = default;
};

// Elevation raster in ESRI ASCII grid conventions: row 0 is the northern
// edge, (xll, yll) is the south-west corner of the grid.
struct DemGrid {
  std::size_t ncols = 0;
  std::size_t nrows = 0;
  double xll = 0.0;
  double yll = 0.0;
  double cellsize = 1.0;
  double nodata = -9999.0;
  std::vector<double> elevations;

  std::size_t size() const noexcept { return ncols * nrows; }
  std::size_t index(std::size_t row, std::size_t col) const noexcept { return row * ncols + col; }
  std::size_t index(CellIndex c) const noexcept { return index(c.row, c.col); }
  CellIndex cell(std::size_t index) const noexcept { return {index / ncols, index % ncols}; }
  bool contains(CellIndex c) const noexcept { return c.row < nrows && c.col < ncols; }

  bool is_nodata(std::size_t i) const noexcept { return elevations[i] == nodata; }
  double at(std::size_t row, std::size_t col) const { return elevations[index(row, col)]; }

  geo::Point cell_center(CellIndex c) const noexcept {
    return {xll + (static_cast<double>(c.col) + 0.5) * cellsize,
            yll + (static_cast<double>(nrows - c.row) - 0.5) * cellsize};
  }
  // Corner (row, col) in corner-lattice coordinates, 0..nrows x 0..ncols.
  geo::Point corner(std::size_t row, std::size_t col) const noexcept {
    return {xll + static_cast<double>(col) * cellsize,
            yll + static_cast<double>(nrows - row) * cellsize};
  }

  friend bool operator==(const DemGrid&, const DemGrid&) = default;
};

// Throws Error(BadGrid) on malformed headers, non-numeric cells or a body
// whose value count does not match ncols * nrows.
DemGrid parse_ascii_grid(std::string_view text);

void validate(const DemGrid& grid);

std::string write_ascii_grid(const DemGrid& grid);

// Integer raster with the geometry of `like`, for debug dumps.
std::string write_ascii_grid(const DemGrid& like, std::span<const int> values, int nodata);

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

}  // namespace hydrograph
