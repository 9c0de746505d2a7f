#pragma once

#include <string>
#include <vector>

#include "hydrograph/ingest.hpp"
#include "hydrograph/json_codec.hpp"
#include "hydrograph/quality.hpp"
#include "hydrograph/query.hpp"

// JSON shapes shared by the HTTP API and the CLI.
namespace hydrograph::api {

json report_to_json(const IngestReport& report);

// [[node id, ...], ...]
json paths_to_json(const std::vector<Path>& paths);
json q3_to_json(const std::vector<StationHit>& hits);
json node_ids_to_json(const std::vector<NodeId>& ids);

// {"series": [{"station", "parameter", "points": [{"timestamp", "value",
// "below_detection", "depth_m"}]}]}
json series_to_json(const QualitySeries& series);

// {stations, params, from, to, depth: [min, max]}; every member optional.
// Throws Error(InvalidArgument).
QualityFilter filter_from_json(const json& body);

// Every node of `label` as a GeoJSON Feature with its numeric id under
// properties.node_id. Geometry comes from the geometry property, else from
// lon/lat, else null.
json layer_geojson(const Graph& graph, NodeLabel label);

std::vector<std::string> split_list(std::string_view text);

}  // namespace hydrograph::api
