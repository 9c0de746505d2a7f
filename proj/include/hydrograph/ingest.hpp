#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hydrograph/graph.hpp"

namespace hydrograph {

enum class FileKind { WaterNodesCsv, LinksCsv, StationsCsv, QualityCsv, GeoJsonLayer, DemAsciiGrid };
enum class LayerKind { Watershed, LandUse, Geometry };

std::string_view to_string(FileKind kind) noexcept;
std::string_view to_string(LayerKind kind) noexcept;
// Accepts the canonical names above plus short aliases (waternodes, links,
// stations, quality, geojson, dem).
std::optional<FileKind> parse_file_kind(std::string_view name) noexcept;
std::optional<LayerKind> parse_layer_kind(std::string_view name) noexcept;

struct IngestReport {
  FileKind kind{};
  std::size_t nodes_created = 0;
  std::size_t edges_created = 0;
  std::size_t rows_skipped = 0;
  std::vector<std::string> warnings;
  std::optional<NodeId> dem;  // DEM uploads: the stored (or existing) node
};

// Throws Error(UnrecognizedFile) for empty, binary or unknown input.
FileKind detect_file_kind(std::string_view bytes);

// Returns the WaterSystem with this domain id, creating it if needed.
NodeId ensure_water_system(Graph& graph, std::string_view system_id);

// CSV ingestion. Each throws Error(BadHeader) when required columns are
// missing; bad rows are skipped and reported as warnings.
IngestReport ingest_water_nodes(Graph& graph, std::string_view csv, NodeId system);
IngestReport ingest_links(Graph& graph, std::string_view csv);
IngestReport ingest_stations(Graph& graph, std::string_view csv, NodeId system);
IngestReport ingest_quality_data(Graph& graph, std::string_view csv);

// Throws Error(BadGeoJson) unless the input is a FeatureCollection; features
// with unsupported or invalid geometry are skipped.
IngestReport ingest_geojson_layer(Graph& graph, std::string_view geojson, LayerKind layer,
                                  NodeId system);

// Layer named by a top-level "layer" member, otherwise inferred from the
// features: polygons carrying a land-use attribute are land use, other
// polygon collections watersheds, anything else geometry.
std::optional<LayerKind> infer_layer(std::string_view geojson);

// Creates the DEM node and attaches its raster. The domain id defaults to a
// content hash, so re-uploading the same grid returns the existing node.
// Throws Error(BadGrid).
NodeId ingest_dem(Graph& graph, std::string_view ascii_grid, NodeId system,
                  std::string_view dem_id = {});

struct IngestOptions {
  std::optional<FileKind> kind;    // detected when absent
  std::optional<LayerKind> layer;  // GeoJSON only; inferred when absent
  std::string system = "main";     // WaterSystem domain id
};

// Detects (if needed) and dispatches to the matching ingest operation.
IngestReport ingest_file(Graph& graph, std::string_view bytes, const IngestOptions& options);

}  // namespace hydrograph
