#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hydrograph/graph.hpp"
#include "hydrograph/raster.hpp"

// Deterministic synthetic datasets for tests, the acceptance suite and demos.
// Random draws use raw mt19937 output so every platform generates the same
// bytes.
namespace hydrograph::fixtures {

// A -> B -> C water nodes ("A", "B", "C").
Graph chain();
// A -> B, A -> C, B -> D, C -> D.
Graph diamond();

// 1 x 5 strip [5, 4, 3, 2, 1].
std::string strip_dem();
// Two 3-cell branches meeting at a junction cell (row 3, col 1) that drains
// to an outlet below it.
std::string y_junction_dem();
// 3 x 3, centre 1, rim 5.
std::string pit_dem();

struct TransferNetwork {
  std::string water_nodes_csv;  // 115 rows
  std::string links_csv;        // 113 CONNECTED links
  std::string longest_sink;     // last node of a longest (21-edge) path
  std::string longest_member;   // interior node of that path
};
TransferNetwork transfer_network();

// Hand-built stream graph: a 50-stretch stem S1..S50 with tributaries
// T1_1..T1_12 (into S30) and T2_1..T2_11 (into S40), plus a braid S10 ->
// S12. Stations A, B, C sit on S2, S19 and T1_5. Watershed W1 holds the
// upper stem with land use L1; W2 holds the rest with L2.
struct StreamFixture {
  Graph graph;
  NodeId query_stretch;  // S45, below both junctions
  NodeId dry_stretch;    // T2_3, whose full paths carry no station
  NodeId station_a, station_b, station_c;
  NodeId landuse_w1, landuse_w2;
};
StreamFixture stream_network();

// Full synthetic EFMA file set.
struct EfmaFiles {
  std::string water_nodes_csv;     // 115 water nodes
  std::string links_csv;           // 113 links
  std::string stations_csv;        // 795 stations
  std::string quality_csv;         // 43892 sampling events
  std::string geometries_geojson;  // 39 canal geometries
  std::string watersheds_geojson;  // 23 nested watersheds
  std::string landuse_geojson;     // 22 land use areas
  std::string dem_asc;             // 1 DEM
};

// Terrain seed and accumulation threshold calibrated together so the EFMA
// DEM yields kEfmaStretches stretches.
inline constexpr std::uint32_t kEfmaDemSeed = 33;
inline constexpr std::uint64_t kEfmaThreshold = 38;
inline constexpr std::size_t kEfmaStretches = 1862;

EfmaFiles efma_files();
// 400 x 320 cells of 0.0025 degrees over the fixture region.
DemGrid efma_dem(std::uint32_t seed = kEfmaDemSeed);

// Ingests every EFMA file into `graph` under water system `system`.
// Returns the DEM node.
NodeId load_efma(Graph& graph, const EfmaFiles& files, std::string_view system = "efma");

// Writes the file set as waternodes.csv, links.csv, stations.csv,
// quality.csv, geometries.geojson, watersheds.geojson, landuse.geojson and
// dem.asc.
void write_efma(const EfmaFiles& files, const std::filesystem::path& dir);

}  // namespace hydrograph::fixtures
