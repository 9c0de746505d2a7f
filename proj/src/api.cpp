#include "hydrograph/api.hpp"

#include "hydrograph/csv.hpp"
#include "hydrograph/error.hpp"

namespace hydrograph::api {

json report_to_json(const IngestReport& report) {
  json j = {{"kind", to_string(report.kind)},
            {"nodes_created", report.nodes_created},
            {"edges_created", report.edges_created},
            {"rows_skipped", report.rows_skipped},
            {"warnings", report.warnings}};
  if (report.dem) j["dem_node_id"] = report.dem->value;
  return j;
}

json paths_to_json(const std::vector<Path>& paths) {
  json out = json::array();
  for (const Path& p : paths) {
    json ids = json::array();
    for (NodeId n : p.nodes) ids.push_back(n.value);
    out.push_back(std::move(ids));
  }
  return out;
}

json q3_to_json(const std::vector<StationHit>& hits) {
  json stations = json::array();
  std::vector<Path> paths;
  for (const auto& h : hits) {
    stations.push_back(h.station.value);
    paths.push_back(h.path);
  }
  return {{"stations", std::move(stations)}, {"paths", paths_to_json(paths)}};
}

json node_ids_to_json(const std::vector<NodeId>& ids) {
  json out = json::array();
  for (NodeId n : ids) out.push_back(n.value);
  return out;
}

json series_to_json(const QualitySeries& series) {
  json out = json::array();
  for (const auto& [key, points] : series) {
    json pts = json::array();
    for (const SeriesPoint& p : points) {
      pts.push_back({{"timestamp", format_timestamp(p.timestamp)},
                     {"value", p.value},
                     {"below_detection", p.below_detection},
                     {"depth_m", p.depth_m ? json(*p.depth_m) : json(nullptr)}});
    }
    out.push_back({{"station", key.station}, {"parameter", key.parameter}, {"points", pts}});
  }
  return {{"series", std::move(out)}};
}

namespace {

std::vector<std::string> string_list(const json& body, const char* name) {
  std::vector<std::string> out;
  const auto it = body.find(name);
  if (it == body.end() || it->is_null()) return out;
  if (it->is_string()) return split_list(it->get<std::string>());
  if (!it->is_array()) throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be a list");
  for (const auto& v : *it) {
    if (!v.is_string()) throw Error(ErrorCode::InvalidArgument, std::string(name) + " must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::optional<Timestamp> time_member(const json& body, const char* name) {
  const auto it = body.find(name);
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be a timestamp");
  return parse_timestamp(it->get<std::string>());
}

}  // namespace

QualityFilter filter_from_json(const json& body) {
  if (!body.is_object()) throw Error(ErrorCode::InvalidArgument, "filter must be an object");
  QualityFilter f;
  f.stations = string_list(body, "stations");
  f.params = string_list(body, "params");
  f.from = time_member(body, "from");
  f.to = time_member(body, "to");
  if (const auto it = body.find("depth"); it != body.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number()) {
      throw Error(ErrorCode::InvalidArgument, "depth must be [min, max]");
    }
    f.depth = std::pair{(*it)[0].get<double>(), (*it)[1].get<double>()};
  }
  return f;
}

json layer_geojson(const Graph& graph, NodeLabel label) {
  json features = json::array();
  for (NodeId id : graph.find_nodes(label)) {
    const Node& n = graph.node(id);
    json geometry = nullptr;
    json props = json::object();
    for (const auto& [name, value] : n.props) {
      if (name == "geometry") continue;
      props[name] = prop_to_plain_json(value);
    }
    props["node_id"] = id.value;
    if (const auto* g = get_prop<GeometryRef>(n.props, "geometry"); g && g->shape) {
      geometry = shape_to_geojson(*g->shape);
    } else {
      const auto lon = get_number(n.props, "lon");
      const auto lat = get_number(n.props, "lat");
      if (lon && lat) geometry = shape_to_geojson(geo::Shape{geo::Point{*lon, *lat}});
    }
    features.push_back({{"type", "Feature"}, {"geometry", geometry}, {"properties", props}});
  }
  return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    const std::string item{csv::trim(text.substr(start, end - start))};
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace hydrograph::api
