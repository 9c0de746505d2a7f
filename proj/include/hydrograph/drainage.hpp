#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hydrograph/geometry.hpp"
#include "hydrograph/graph.hpp"
#include "hydrograph/ingest.hpp"
#include "hydrograph/raster.hpp"

namespace hydrograph {

// D8 directions; the integer values are the debug raster codes.
enum class FlowDir : std::int8_t {
  Nodata = -1,
  Outlet = 0,
  E = 1,
  SE = 2,
  S = 3,
  SW = 4,
  W = 5,
  NW = 6,
  N = 7,
  NE = 8,
};

struct Offset {
  int drow;
  int dcol;
};

Offset offset(FlowDir dir) noexcept;
bool is_diagonal(FlowDir dir) noexcept;

// Fixed tie-break order for equal descents.
inline constexpr FlowDir kTieOrder[8] = {FlowDir::E,  FlowDir::S,  FlowDir::W,  FlowDir::N,
                                         FlowDir::SE, FlowDir::SW, FlowDir::NW, FlowDir::NE};

struct FlowDirGrid {
  std::size_t ncols = 0;
  std::size_t nrows = 0;
  std::vector<FlowDir> dirs;

  std::size_t size() const noexcept { return ncols * nrows; }
  std::size_t index(CellIndex c) const noexcept { return c.row * ncols + c.col; }
  // Receiving cell, or nullopt for outlets and nodata.
  std::optional<std::size_t> downstream(std::size_t i) const noexcept;
};

struct AccumGrid {
  std::size_t ncols = 0;
  std::size_t nrows = 0;
  std::vector<std::uint64_t> counts;  // 0 on nodata cells
};

// Priority-Flood with an epsilon gradient: every cell that is not on the
// grid border or next to nodata ends strictly above the neighbour it was
// flooded from, so the result has neither pits nor flats. Border cells are
// unchanged. Throws Error(AllNodata).
DemGrid fill_depressions(const DemGrid& dem);

// Steepest descent by drop / distance (diagonals at sqrt(2) * cellsize).
// Off-grid and nodata neighbours are exits with zero drop; choosing one makes
// the cell an OUTLET. Zero-drop moves into the grid are only taken towards E,
// S, SE or SW, which keeps the result acyclic even on unresolved flats.
// Cells with no admissible move are OUTLET. Ties follow kTieOrder.
FlowDirGrid flow_direction_d8(const DemGrid& dem);

// Upstream cell count including the cell itself. Throws Error(CycleDetected).
AccumGrid flow_accumulation(const FlowDirGrid& dirs);

// Integer raster dump: 1..8 directions, 0 outlet, -1 nodata.
std::string write_flowdir_grid(const DemGrid& frame, const FlowDirGrid& dirs);

struct Stretch {
  std::vector<std::size_t> cells;  // upstream to downstream
  std::optional<std::size_t> downstream;  // index of receiving stretch
  geo::Polyline line;
};

struct StreamNetwork {
  std::vector<Stretch> stretches;
  std::size_t flows_to_count() const noexcept;
};

// Stream cells are those with acc >= threshold; they are split into maximal
// unbranched runs, each ending where its receiver has two or more stream
// inflows or at an outlet. Line geometry joins cell centres and reaches into
// the receiving stretch's first cell. Throws Error(InvalidArgument) when
// threshold is 0.
StreamNetwork compute_stream_network(const DemGrid& frame, const FlowDirGrid& dirs,
                                     const AccumGrid& acc, std::uint64_t threshold);

// Stores WaterStretch nodes (ids `<prefix>S<n>`) and FLOWS_TO edges.
IngestReport store_stream_network(Graph& graph, const StreamNetwork& network,
                                  std::string_view id_prefix, std::string_view system_id);

IngestReport extract_stream_network(Graph& graph, const DemGrid& frame, const FlowDirGrid& dirs,
                                    const AccumGrid& acc, std::uint64_t threshold,
                                    NodeId system);

struct WatershedCells {
  std::vector<CellIndex> cells;  // row-major order
  geo::Polygon boundary;
};

// Cells whose D8 path reaches `pour`, with the traced boundary of that cell
// set. Throws Error(OutOfBounds) for a pour point outside the grid or on
// nodata.
WatershedCells delineate_watershed(const DemGrid& frame, const FlowDirGrid& dirs, CellIndex pour);

// For each station, MONITORED_BY from the nearest stretch within `tolerance`
// (ties to the lower stretch id). Returns the number of edges created.
std::size_t link_stations_to_stretches(Graph& graph, double tolerance,
                                       std::vector<std::string>* warnings = nullptr);

// WITHIN edges from stations, water nodes, stretches and land use to their
// innermost containing watersheds. Returns the number of edges created.
std::size_t compute_within_edges(Graph& graph, std::vector<std::string>* warnings = nullptr);

// Grid phase of a drainage run, independent of the graph.
struct DrainageComputation {
  DemGrid filled;
  FlowDirGrid dirs;
  AccumGrid acc;
  StreamNetwork network;
  std::uint64_t threshold = 0;
};

DrainageComputation compute_drainage(const DemGrid& dem, std::uint64_t threshold);

struct DrainageReport {
  std::size_t stretches = 0;
  std::size_t flows_to = 0;
  std::size_t monitored_by = 0;
  std::size_t within = 0;
  std::vector<std::string> warnings;
};

// Graph phase: stores the network of `dem_node`, then links stations and
// derives WITHIN edges.
DrainageReport apply_drainage(Graph& graph, NodeId dem_node, const DrainageComputation& result,
                              double snap_tolerance = geo::kDefaultSnapTolerance);

}  // namespace hydrograph
