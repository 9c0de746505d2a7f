#include "hydrograph/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <unordered_map>

#include "hydrograph/csv.hpp"
#include "hydrograph/error.hpp"
#include "hydrograph/json_codec.hpp"
#include "hydrograph/quality.hpp"
#include "hydrograph/watersheds.hpp"

namespace hydrograph {

namespace {

using Columns = std::unordered_map<std::string, std::size_t>;

std::optional<double> parse_number(std::string_view s) {
  s = csv::trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::set<std::string> header_set(const csv::Row& header) {
  return {header.begin(), header.end()};
}

Columns require_columns(const csv::Table& table, std::initializer_list<const char*> required,
                        std::string_view what) {
  Columns cols;
  for (std::size_t i = 0; i < table.header.size(); ++i) cols.emplace(table.header[i], i);
  for (const char* name : required) {
    if (!cols.count(name)) {
      throw Error(ErrorCode::BadHeader,
                  std::string(what) + " file is missing column '" + name + "'");
    }
  }
  return cols;
}

std::string line_prefix(const csv::Table& t, std::size_t r) {
  return "line " + std::to_string(t.line_numbers[r]) + ": ";
}

// Columns beyond the required ones are kept as text properties.
void extra_columns(PropertyMap& props, const csv::Table& t, const csv::Row& row,
                   std::initializer_list<const char*> known) {
  for (std::size_t c = 0; c < t.header.size() && c < row.size(); ++c) {
    const auto& name = t.header[c];
    if (name.empty() || std::find_if(known.begin(), known.end(), [&](const char* k) {
                          return name == k;
                        }) != known.end()) {
      continue;
    }
    const auto v = csv::trim(row[c]);
    if (!v.empty()) props.emplace(name, std::string(v));
  }
}

std::optional<geo::Point> parse_point(std::string_view lon, std::string_view lat) {
  const auto x = parse_number(lon);
  const auto y = parse_number(lat);
  if (!x || !y) return std::nullopt;
  const geo::Point p{*x, *y};
  try {
    geo::validate(p);
  } catch (const Error&) {
    return std::nullopt;
  }
  return p;
}

std::string feature_id(const json& props) {
  if (!props.is_object() || !props.contains("id")) return {};
  const json& id = props["id"];
  if (id.is_string()) return id.get<std::string>();
  if (id.is_number_integer()) return std::to_string(id.get<std::int64_t>());
  if (id.is_number_unsigned()) return std::to_string(id.get<std::uint64_t>());
  return {};
}

void feature_props(PropertyMap& out, const json& props) {
  if (!props.is_object()) return;
  for (const auto& [k, v] : props.items()) {
    if (k.empty() || k == "id" || k == "geometry") continue;
    switch (v.type()) {
      case json::value_t::string: out.emplace(k, v.get<std::string>()); break;
      case json::value_t::boolean: out.emplace(k, v.get<bool>()); break;
      case json::value_t::number_integer: out.emplace(k, v.get<std::int64_t>()); break;
      case json::value_t::number_unsigned:
        out.emplace(k, static_cast<std::int64_t>(v.get<std::uint64_t>()));
        break;
      case json::value_t::number_float:
        if (std::isfinite(v.get<double>())) out.emplace(k, v.get<double>());
        break;
      case json::value_t::null: break;
      default: out.emplace(k, v.dump()); break;
    }
  }
}

bool is_polygonal(const geo::Shape& s) {
  return std::holds_alternative<geo::Polygon>(s) || std::holds_alternative<geo::MultiPolygon>(s);
}

std::string content_hash(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const std::set<std::string> kWaterNodeColumns{"id", "name", "type", "subsystem", "lon", "lat"};
const std::set<std::string> kLinkColumns{"from_id", "to_id", "kind"};
const std::set<std::string> kStationColumns{"id", "name", "lon", "lat", "operator"};
constexpr std::array<std::string_view, 3> kLinkKinds{"channel", "river", "pipeline"};
constexpr std::array<std::string_view, 6> kLandUseKeys{"landuse", "land_use", "crop",
                                                       "cover",   "clc_code", "lulc"};

}  // namespace

std::string_view to_string(FileKind kind) noexcept {
  switch (kind) {
    case FileKind::WaterNodesCsv: return "WaterNodesCsv";
    case FileKind::LinksCsv: return "LinksCsv";
    case FileKind::StationsCsv: return "StationsCsv";
    case FileKind::QualityCsv: return "QualityCsv";
    case FileKind::GeoJsonLayer: return "GeoJsonLayer";
    case FileKind::DemAsciiGrid: return "DemAsciiGrid";
  }
  return "?";
}

std::string_view to_string(LayerKind kind) noexcept {
  switch (kind) {
    case LayerKind::Watershed: return "watershed";
    case LayerKind::LandUse: return "landuse";
    case LayerKind::Geometry: return "geometry";
  }
  return "?";
}

std::optional<FileKind> parse_file_kind(std::string_view name) noexcept {
  struct Alias {
    std::string_view name;
    FileKind kind;
  };
  static constexpr Alias kAliases[] = {
      {"WaterNodesCsv", FileKind::WaterNodesCsv}, {"waternodes", FileKind::WaterNodesCsv},
      {"LinksCsv", FileKind::LinksCsv},           {"links", FileKind::LinksCsv},
      {"StationsCsv", FileKind::StationsCsv},     {"stations", FileKind::StationsCsv},
      {"QualityCsv", FileKind::QualityCsv},       {"quality", FileKind::QualityCsv},
      {"GeoJsonLayer", FileKind::GeoJsonLayer},   {"geojson", FileKind::GeoJsonLayer},
      {"DemAsciiGrid", FileKind::DemAsciiGrid},   {"dem", FileKind::DemAsciiGrid},
  };
  for (const auto& a : kAliases) {
    if (a.name == name) return a.kind;
  }
  return std::nullopt;
}

std::optional<LayerKind> parse_layer_kind(std::string_view name) noexcept {
  if (name == "watershed" || name == "watersheds") return LayerKind::Watershed;
  if (name == "landuse" || name == "land_use") return LayerKind::LandUse;
  if (name == "geometry" || name == "geometries") return LayerKind::Geometry;
  return std::nullopt;
}

FileKind detect_file_kind(std::string_view bytes) {
  if (bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes.remove_prefix(3);
  if (bytes.find('\0') != std::string_view::npos) {
    throw Error(ErrorCode::UnrecognizedFile, "binary content");
  }
  std::size_t start = 0;
  while (start < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[start]))) ++start;
  if (start == bytes.size()) throw Error(ErrorCode::UnrecognizedFile, "empty file");
  const std::string_view body = bytes.substr(start);

  if (body.front() == '{') {
    const json doc = json::parse(body.begin(), body.end(), nullptr, false);
    if (doc.is_object() && doc.value("type", std::string()) == "FeatureCollection") {
      return FileKind::GeoJsonLayer;
    }
    throw Error(ErrorCode::UnrecognizedFile, "JSON document is not a FeatureCollection");
  }

  std::string first_word;
  for (std::size_t i = 0; i < body.size() && std::isalpha(static_cast<unsigned char>(body[i])); ++i) {
    first_word += static_cast<char>(std::tolower(static_cast<unsigned char>(body[i])));
  }
  if (first_word == "ncols") return FileKind::DemAsciiGrid;

  const std::string_view first_line = body.substr(0, body.find('\n'));
  const csv::Table t = csv::parse(first_line);
  const auto cols = header_set(t.header);
  auto has_all = [&](const std::set<std::string>& need) {
    return std::includes(cols.begin(), cols.end(), need.begin(), need.end());
  };
  if (t.header.size() >= 3 && t.header[0] == "station_id" && t.header[1] == "timestamp") {
    return FileKind::QualityCsv;
  }
  // Extra columns are kept as properties, so a fingerprint is a minimum.
  if (has_all(kWaterNodeColumns)) return FileKind::WaterNodesCsv;
  if (has_all(kStationColumns)) return FileKind::StationsCsv;
  if (has_all(kLinkColumns)) return FileKind::LinksCsv;
  throw Error(ErrorCode::UnrecognizedFile, "unrecognized file header");
}

NodeId ensure_water_system(Graph& graph, std::string_view system_id) {
  if (auto existing = graph.find_by_domain_id(NodeLabel::WaterSystem, system_id)) return *existing;
  return graph.create_node(NodeLabel::WaterSystem,
                           {{"id", std::string(system_id)}, {"name", std::string(system_id)}});
}

IngestReport ingest_water_nodes(Graph& graph, std::string_view text, NodeId system) {
  const std::string system_id = domain_id(graph.node(system));
  const csv::Table t = csv::parse(text);
  const auto cols = require_columns(t, {"id", "name", "type", "subsystem", "lon", "lat"}, "water nodes");
  IngestReport report;
  report.kind = FileKind::WaterNodesCsv;

  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    auto skip = [&](const std::string& why) {
      ++report.rows_skipped;
      report.warnings.push_back(line_prefix(t, r) + why);
    };
    if (row.size() != t.header.size()) {
      skip("column count mismatch");
      continue;
    }
    const std::string id(csv::trim(row[cols.at("id")]));
    if (id.empty()) {
      skip("empty id");
      continue;
    }
    const auto p = parse_point(row[cols.at("lon")], row[cols.at("lat")]);
    if (!p) {
      skip("unparseable coordinates for water node '" + id + "'");
      continue;
    }
    PropertyMap props{{"id", id},
                      {"name", std::string(csv::trim(row[cols.at("name")]))},
                      {"type", std::string(csv::trim(row[cols.at("type")]))},
                      {"subsystem", std::string(csv::trim(row[cols.at("subsystem")]))},
                      {"lon", p->lon},
                      {"lat", p->lat},
                      {"system", system_id}};
    extra_columns(props, t, row, {"id", "name", "type", "subsystem", "lon", "lat"});
    try {
      graph.create_node(NodeLabel::WaterNode, std::move(props));
      ++report.nodes_created;
    } catch (const Error& e) {
      skip(e.what());
    }
  }
  return report;
}

IngestReport ingest_links(Graph& graph, std::string_view text) {
  const csv::Table t = csv::parse(text);
  const auto cols = require_columns(t, {"from_id", "to_id", "kind"}, "links");
  IngestReport report;
  report.kind = FileKind::LinksCsv;

  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    auto skip = [&](const std::string& why) {
      ++report.rows_skipped;
      report.warnings.push_back(line_prefix(t, r) + why);
    };
    if (row.size() != t.header.size()) {
      skip("column count mismatch");
      continue;
    }
    const std::string from(csv::trim(row[cols.at("from_id")]));
    const std::string to(csv::trim(row[cols.at("to_id")]));
    const std::string kind(csv::trim(row[cols.at("kind")]));
    if (std::find(kLinkKinds.begin(), kLinkKinds.end(), kind) == kLinkKinds.end()) {
      skip("unknown link kind '" + kind + "'");
      continue;
    }
    const auto src = graph.find_by_domain_id(NodeLabel::WaterNode, from);
    const auto dst = graph.find_by_domain_id(NodeLabel::WaterNode, to);
    if (!src || !dst) {
      skip("unknown endpoint '" + (src ? to : from) + "'");
      continue;
    }
    PropertyMap props{{"kind", kind}};
    extra_columns(props, t, row, {"from_id", "to_id", "kind"});
    try {
      graph.create_edge(EdgeType::CONNECTED, *src, *dst, std::move(props));
      ++report.edges_created;
    } catch (const Error& e) {
      skip(e.what());
    }
  }
  return report;
}

IngestReport ingest_stations(Graph& graph, std::string_view text, NodeId system) {
  const csv::Table t = csv::parse(text);
  const auto cols = require_columns(t, {"id", "name", "lon", "lat", "operator"}, "stations");
  graph.node(system);
  IngestReport report;
  report.kind = FileKind::StationsCsv;

  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    auto skip = [&](const std::string& why) {
      ++report.rows_skipped;
      report.warnings.push_back(line_prefix(t, r) + why);
    };
    if (row.size() != t.header.size()) {
      skip("column count mismatch");
      continue;
    }
    const std::string id(csv::trim(row[cols.at("id")]));
    if (id.empty()) {
      skip("empty id");
      continue;
    }
    const auto p = parse_point(row[cols.at("lon")], row[cols.at("lat")]);
    if (!p) {
      skip("unparseable coordinates for station '" + id + "'");
      continue;
    }
    PropertyMap props{{"id", id},
                      {"name", std::string(csv::trim(row[cols.at("name")]))},
                      {"lon", p->lon},
                      {"lat", p->lat}};
    const std::string op(csv::trim(row[cols.at("operator")]));
    if (!op.empty()) props.emplace("operator", op);
    extra_columns(props, t, row, {"id", "name", "lon", "lat", "operator"});
    try {
      const NodeId station = graph.create_node(NodeLabel::QualityStation, std::move(props));
      graph.create_edge(EdgeType::STATION_OF, station, system);
      ++report.nodes_created;
      ++report.edges_created;
    } catch (const Error& e) {
      skip(e.what());
    }
  }
  return report;
}

IngestReport ingest_quality_data(Graph& graph, std::string_view text) {
  ParsedQuality parsed = parse_quality_csv(text);
  IngestReport report;
  report.kind = FileKind::QualityCsv;
  report.rows_skipped = parsed.rows_skipped;
  report.warnings = std::move(parsed.warnings);

  std::unordered_map<std::string, NodeId> stations;
  for (std::size_t i = 0; i < parsed.samples.size(); ++i) {
    const QualitySample& s = parsed.samples[i];
    auto skip = [&](const std::string& why) {
      // A long-format sample spans several rows; count it once.
      ++report.rows_skipped;
      report.warnings.push_back("line " + std::to_string(parsed.sample_lines[i]) + ": " + why);
    };
    auto it = stations.find(s.station_id);
    if (it == stations.end()) {
      const auto found = graph.find_by_domain_id(NodeLabel::QualityStation, s.station_id);
      if (!found) {
        skip("unknown station '" + s.station_id + "'");
        continue;
      }
      it = stations.emplace(s.station_id, *found).first;
    }
    try {
      const NodeId data = graph.create_node(NodeLabel::QualityData, sample_to_props(s));
      graph.create_edge(EdgeType::COLLECTED, it->second, data);
      ++report.nodes_created;
      ++report.edges_created;
    } catch (const Error& e) {
      skip(e.what());
    }
  }
  return report;
}

std::optional<LayerKind> infer_layer(std::string_view text) {
  const json doc = json::parse(text.begin(), text.end(), nullptr, false);
  if (!doc.is_object()) return std::nullopt;
  for (const char* key : {"layer", "name"}) {
    if (doc.contains(key) && doc[key].is_string()) {
      if (auto k = parse_layer_kind(doc[key].get<std::string>())) return k;
    }
  }
  if (!doc.contains("features") || !doc["features"].is_array() || doc["features"].empty()) {
    return std::nullopt;
  }
  bool all_polygons = true;
  bool landuse_attr = false;
  for (const auto& f : doc["features"]) {
    const json geom = f.value("geometry", json());
    const std::string type = geom.is_object() ? geom.value("type", std::string()) : std::string();
    if (type != "Polygon" && type != "MultiPolygon") all_polygons = false;
    const json props = f.value("properties", json());
    if (props.is_object()) {
      for (auto key : kLandUseKeys) {
        if (props.contains(std::string(key))) landuse_attr = true;
      }
    }
  }
  if (!all_polygons) return LayerKind::Geometry;
  return landuse_attr ? LayerKind::LandUse : LayerKind::Watershed;
}

IngestReport ingest_geojson_layer(Graph& graph, std::string_view text, LayerKind layer,
                                  NodeId system) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadGeoJson, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("type", std::string()) != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array()) {
    throw Error(ErrorCode::BadGeoJson, "expected a FeatureCollection with a features array");
  }
  graph.node(system);

  const NodeLabel label = layer == LayerKind::Watershed ? NodeLabel::Watershed
                          : layer == LayerKind::LandUse ? NodeLabel::LandUse
                                                        : NodeLabel::Geometry;
  const EdgeType link = layer == LayerKind::Watershed ? EdgeType::HAS_WATERSHED
                        : layer == LayerKind::LandUse ? EdgeType::HAS_LANDUSE
                                                      : EdgeType::HAS_GEOMETRY;
  IngestReport report;
  report.kind = FileKind::GeoJsonLayer;
  std::vector<NodeId> created;

  const auto& features = doc["features"];
  for (std::size_t i = 0; i < features.size(); ++i) {
    const json& f = features[i];
    auto skip = [&](const std::string& why) {
      ++report.rows_skipped;
      report.warnings.push_back("feature " + std::to_string(i) + ": " + why);
    };
    if (!f.is_object() || f.value("type", std::string()) != "Feature") {
      skip("not a Feature");
      continue;
    }
    const json props = f.value("properties", json::object());
    const std::string id = feature_id(props);
    if (id.empty()) {
      skip("missing properties.id");
      continue;
    }
    geo::Shape shape;
    try {
      if (!f.contains("geometry") || f["geometry"].is_null()) {
        throw Error(ErrorCode::UnsupportedGeometry, "null geometry");
      }
      shape = shape_from_geojson(f["geometry"]);
    } catch (const Error& e) {
      skip(e.what());
      continue;
    }
    if (layer != LayerKind::Geometry && !is_polygonal(shape)) {
      skip(std::string(to_string(layer)) + " feature '" + id + "' is not a polygon");
      continue;
    }
    PropertyMap node_props{{"id", id}, {"geometry", GeometryRef(std::move(shape))}};
    feature_props(node_props, props);
    try {
      const NodeId node = graph.create_node(label, std::move(node_props));
      graph.create_edge(link, system, node);
      ++report.nodes_created;
      ++report.edges_created;
      created.push_back(node);
    } catch (const Error& e) {
      skip(e.what());
      continue;
    }
    if (layer == LayerKind::Geometry && props.contains("node_id") && props["node_id"].is_string()) {
      const std::string water_node = props["node_id"].get<std::string>();
      if (const auto wn = graph.find_by_domain_id(NodeLabel::WaterNode, water_node)) {
        graph.create_edge(EdgeType::REPRESENTED, *wn, created.back());
        ++report.edges_created;
      } else {
        report.warnings.push_back("feature " + std::to_string(i) + ": water node '" + water_node +
                                  "' not found; no REPRESENTED edge");
      }
    }
  }

  if (layer == LayerKind::Watershed) {
    report.edges_created += derive_part_of(graph, &report.warnings);
  } else if (layer == LayerKind::LandUse) {
    const WatershedIndex index(graph);
    for (NodeId lu : created) {
      const auto* g = get_prop<GeometryRef>(graph.node(lu).props, "geometry");
      const auto within = index.innermost(geo::representative_point(*g->shape));
      if (within.empty()) {
        report.warnings.push_back("land use '" + domain_id(graph.node(lu)) +
                                  "' lies outside every watershed");
      }
      for (NodeId w : within) {
        if (graph.has_edge(EdgeType::WITHIN, lu, w)) continue;
        graph.create_edge(EdgeType::WITHIN, lu, w);
        ++report.edges_created;
      }
    }
  }
  return report;
}

NodeId ingest_dem(Graph& graph, std::string_view text, NodeId system, std::string_view dem_id) {
  DemGrid grid = parse_ascii_grid(text);
  const std::string id = dem_id.empty() ? "dem-" + content_hash(text) : std::string(dem_id);
  if (auto existing = graph.find_by_domain_id(NodeLabel::DEM, id)) return *existing;
  PropertyMap props{{"id", id},
                    {"ncols", static_cast<std::int64_t>(grid.ncols)},
                    {"nrows", static_cast<std::int64_t>(grid.nrows)},
                    {"xllcorner", grid.xll},
                    {"yllcorner", grid.yll},
                    {"cellsize", grid.cellsize},
                    {"nodata_value", grid.nodata},
                    {"raster", id},
                    {"system", domain_id(graph.node(system))}};
  const NodeId node = graph.create_node(NodeLabel::DEM, std::move(props));
  graph.attach_raster(node, std::move(grid));
  return node;
}

IngestReport ingest_file(Graph& graph, std::string_view bytes, const IngestOptions& options) {
  const FileKind kind = options.kind ? *options.kind : detect_file_kind(bytes);
  switch (kind) {
    case FileKind::WaterNodesCsv:
      return ingest_water_nodes(graph, bytes, ensure_water_system(graph, options.system));
    case FileKind::LinksCsv: return ingest_links(graph, bytes);
    case FileKind::StationsCsv:
      return ingest_stations(graph, bytes, ensure_water_system(graph, options.system));
    case FileKind::QualityCsv: return ingest_quality_data(graph, bytes);
    case FileKind::GeoJsonLayer: {
      const auto layer = options.layer ? options.layer : infer_layer(bytes);
      if (!layer) throw Error(ErrorCode::BadGeoJson, "cannot determine GeoJSON layer kind");
      return ingest_geojson_layer(graph, bytes, *layer, ensure_water_system(graph, options.system));
    }
    case FileKind::DemAsciiGrid: {
      const std::size_t before = graph.count(NodeLabel::DEM);
      const NodeId dem = ingest_dem(graph, bytes, ensure_water_system(graph, options.system));
      IngestReport report;
      report.kind = FileKind::DemAsciiGrid;
      report.dem = dem;
      report.nodes_created = graph.count(NodeLabel::DEM) - before;
      if (report.nodes_created == 0) report.warnings.push_back("DEM already stored");
      return report;
    }
  }
  throw Error(ErrorCode::UnrecognizedFile, "unsupported file kind");
}

}  // namespace hydrograph
