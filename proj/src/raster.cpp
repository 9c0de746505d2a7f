#include "hydrograph/raster.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>

#include "hydrograph/error.hpp"

namespace hydrograph {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::BadGrid, what); }

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  std::string_view next_token() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    const std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    return text.substr(start, pos - start);
  }
  std::string_view peek_token() {
    const std::size_t saved = pos;
    const auto tok = next_token();
    pos = saved;
    return tok;
  }
};

std::optional<double> to_double(std::string_view tok) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) return std::nullopt;
  return value;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::size_t to_count(double v, const char* name) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e8) bad(std::string(name) + " must be a positive integer");
  return static_cast<std::size_t>(v);
}

}  // namespace

DemGrid parse_ascii_grid(std::string_view text) {
  Cursor cur{text};
  std::optional<double> ncols, nrows, xll, yll, cellsize, nodata;
  bool x_center = false;
  bool y_center = false;

  while (true) {
    const auto key_tok = cur.peek_token();
    if (key_tok.empty()) break;
    if (!std::isalpha(static_cast<unsigned char>(key_tok.front()))) break;
    cur.next_token();
    const std::string key = lower(key_tok);
    const auto value = to_double(cur.next_token());
    if (!value) bad("header value for '" + key + "' is not numeric");
    if (key == "ncols") ncols = value;
    else if (key == "nrows") nrows = value;
    else if (key == "xllcorner") xll = value;
    else if (key == "yllcorner") yll = value;
    else if (key == "xllcenter") { xll = value; x_center = true; }
    else if (key == "yllcenter") { yll = value; y_center = true; }
    else if (key == "cellsize") cellsize = value;
    else if (key == "nodata_value") nodata = value;
    else bad("unknown header key '" + key + "'");
  }
  if (!ncols || !nrows || !xll || !yll || !cellsize) bad("incomplete ASCII grid header");
  if (!(*cellsize > 0.0) || !std::isfinite(*cellsize)) bad("cellsize must be positive");

  DemGrid grid;
  grid.ncols = to_count(*ncols, "ncols");
  grid.nrows = to_count(*nrows, "nrows");
  grid.cellsize = *cellsize;
  grid.xll = x_center ? *xll - 0.5 * grid.cellsize : *xll;
  grid.yll = y_center ? *yll - 0.5 * grid.cellsize : *yll;
  if (nodata) grid.nodata = *nodata;

  grid.elevations.reserve(grid.size());
  while (true) {
    const auto tok = cur.next_token();
    if (tok.empty()) break;
    const auto v = to_double(tok);
    if (!v) bad("non-numeric cell value '" + std::string(tok) + "'");
    grid.elevations.push_back(*v);
    if (grid.elevations.size() > grid.size()) break;
  }
  if (grid.elevations.size() != grid.size()) {
    bad("header declares " + std::to_string(grid.size()) + " cells but body has " +
        (grid.elevations.size() > grid.size() ? std::string("more")
                                              : std::to_string(grid.elevations.size())));
  }
  validate(grid);
  return grid;
}

void validate(const DemGrid& grid) {
  if (grid.ncols == 0 || grid.nrows == 0) bad("grid dimensions must be positive");
  if (grid.elevations.size() != grid.size()) bad("elevation count does not match dimensions");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid.is_nodata(i) && !std::isfinite(grid.elevations[i])) bad("non-finite elevation");
  }
}

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

std::string header(const DemGrid& g, const std::string& nodata) {
  std::string out;
  out += "ncols " + std::to_string(g.ncols) + "\n";
  out += "nrows " + std::to_string(g.nrows) + "\n";
  out += "xllcorner " + format_double(g.xll) + "\n";
  out += "yllcorner " + format_double(g.yll) + "\n";
  out += "cellsize " + format_double(g.cellsize) + "\n";
  out += "NODATA_value " + nodata + "\n";
  return out;
}

}  // namespace

std::string write_ascii_grid(const DemGrid& grid) {
  std::string out = header(grid, format_double(grid.nodata));
  out.reserve(out.size() + grid.size() * 8);
  for (std::size_t r = 0; r < grid.nrows; ++r) {
    for (std::size_t c = 0; c < grid.ncols; ++c) {
      if (c) out += ' ';
      out += format_double(grid.at(r, c));
    }
    out += '\n';
  }
  return out;
}

std::string write_ascii_grid(const DemGrid& like, std::span<const int> values, int nodata) {
  std::string out = header(like, std::to_string(nodata));
  for (std::size_t r = 0; r < like.nrows; ++r) {
    for (std::size_t c = 0; c < like.ncols; ++c) {
      if (c) out += ' ';
      out += std::to_string(values[like.index(r, c)]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace hydrograph
