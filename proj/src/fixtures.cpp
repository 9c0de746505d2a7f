#include "hydrograph/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>

#include "hydrograph/csv.hpp"
#include "hydrograph/drainage.hpp"
#include "hydrograph/error.hpp"
#include "hydrograph/ingest.hpp"
#include "hydrograph/json_codec.hpp"

namespace hydrograph::fixtures {

namespace {

// Raw mt19937 words are specified by the standard; the distribution classes
// are not, so draws are derived by hand.
class Rng {
 public:
  explicit Rng(std::uint32_t seed) : gen_(seed) {}
  double uniform() { return gen_() / 4294967296.0; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * n); }

 private:
  std::mt19937 gen_;
};

std::string fixed(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return format_double(std::round(v * scale) / scale);
}

std::string coord(double v) { return fixed(v, 6); }

std::string padded(std::string_view prefix, std::size_t n, int width) {
  std::string digits = std::to_string(n);
  if (static_cast<int>(digits.size()) < width) digits.insert(0, width - digits.size(), '0');
  return std::string(prefix) + digits;
}

Graph water_graph(const std::vector<std::string>& ids,
                  const std::vector<std::pair<int, int>>& links) {
  Graph g;
  std::vector<NodeId> nodes;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    nodes.push_back(g.create_node(NodeLabel::WaterNode,
                                  {{"id", ids[i]}, {"lon", -7.9 + 0.01 * i}, {"lat", 38.2}}));
  }
  for (auto [a, b] : links) g.create_edge(EdgeType::CONNECTED, nodes[a], nodes[b]);
  return g;
}

// Region covered by the EFMA fixture, in degrees.
constexpr double kWest = -8.2;
constexpr double kSouth = 37.8;
constexpr double kEast = -7.2;
constexpr double kNorth = 38.6;

constexpr std::size_t kWaterNodes = 115;
constexpr std::size_t kLongestPath = 21;
constexpr std::size_t kStations = 795;
constexpr std::size_t kQualityRows = 43892;
constexpr std::size_t kGeometries = 39;
constexpr std::size_t kLandUse = 22;

constexpr std::size_t kDemCols = 400;
constexpr std::size_t kDemRows = 320;
constexpr double kDemCell = 0.0025;

struct Tree {
  std::vector<std::pair<std::size_t, std::size_t>> links;
};

// Longest directed path length in edges over a DAG given as an edge list.
std::size_t longest_path(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& links) {
  std::vector<std::vector<std::size_t>> out(n);
  for (auto [a, b] : links) out[a].push_back(b);
  std::vector<std::ptrdiff_t> memo(n, -1);
  std::function<std::size_t(std::size_t)> down = [&](std::size_t v) -> std::size_t {
    if (memo[v] >= 0) return static_cast<std::size_t>(memo[v]);
    std::size_t best = 0;
    for (std::size_t w : out[v]) best = std::max(best, 1 + down(w));
    memo[v] = static_cast<std::ptrdiff_t>(best);
    return best;
  };
  std::size_t best = 0;
  for (std::size_t v = 0; v < n; ++v) best = std::max(best, down(v));
  return best;
}

// Two components: a 22-node stem carrying the longest path plus a seed pair,
// grown one node (and one link) at a time without exceeding that path.
Tree transfer_tree(Rng& rng) {
  Tree t;
  for (std::size_t i = 0; i < kLongestPath; ++i) t.links.emplace_back(i, i + 1);
  t.links.emplace_back(kLongestPath + 1, kLongestPath + 2);
  for (std::size_t n = kLongestPath + 3; n < kWaterNodes; ++n) {
    for (;;) {
      const std::size_t anchor = rng.index(n);
      const bool feeds = rng.uniform() < 0.4;
      auto trial = t.links;
      trial.push_back(feeds ? std::pair{n, anchor} : std::pair{anchor, n});
      if (longest_path(n + 1, trial) <= kLongestPath) {
        t.links = std::move(trial);
        break;
      }
    }
  }
  return t;
}

json rect(double w, double s, double e, double n) {
  return {{"type", "Polygon"},
          {"coordinates", json::array({json::array({json::array({w, s}), json::array({e, s}),
                                                   json::array({e, n}), json::array({w, n}),
                                                   json::array({w, s})})})}};
}

json feature(const json& geometry, json props) {
  return {{"type", "Feature"}, {"geometry", geometry}, {"properties", std::move(props)}};
}

json collection(std::string_view layer, json features) {
  return {{"type", "FeatureCollection"}, {"name", layer}, {"features", std::move(features)}};
}

struct Box {
  double w, s, e, n;
};

// 3 basins split into 5, 5 and 4 sub-basins; 6 of those hold an inset
// sub-sub-basin. Returns boxes with their parent index (or -1).
std::vector<std::pair<Box, int>> watershed_boxes() {
  std::vector<std::pair<Box, int>> out;
  const double width = (kEast - kWest) / 3;
  const int subs[3] = {5, 5, 4};
  for (int b = 0; b < 3; ++b) {
    const Box basin{kWest + b * width, kSouth, kWest + (b + 1) * width, kNorth};
    out.push_back({basin, -1});
  }
  for (int b = 0; b < 3; ++b) {
    const Box p = out[b].first;
    const double h = (p.n - p.s) / subs[b];
    for (int k = 0; k < subs[b]; ++k) {
      out.push_back({{p.w + 0.01, p.s + k * h + 0.01, p.e - 0.01, p.s + (k + 1) * h - 0.01}, b});
    }
  }
  for (int idx : {3, 5, 8, 10, 13, 15}) {
    const Box p = out[idx].first;
    const double dx = (p.e - p.w) / 4;
    const double dy = (p.n - p.s) / 4;
    out.push_back({{p.w + dx, p.s + dy, p.e - dx, p.n - dy}, idx});
  }
  return out;
}

// Value noise: bilinear interpolation of a random lattice.
std::vector<double> lattice_noise(Rng& rng, std::size_t rows, std::size_t cols, std::size_t spacing) {
  const std::size_t lr = rows / spacing + 2;
  const std::size_t lc = cols / spacing + 2;
  std::vector<double> lattice(lr * lc);
  for (double& v : lattice) v = rng.uniform(-1.0, 1.0);
  std::vector<double> out(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const double fr = static_cast<double>(r) / spacing;
    const std::size_t r0 = static_cast<std::size_t>(fr);
    const double tr = fr - r0;
    for (std::size_t c = 0; c < cols; ++c) {
      const double fc = static_cast<double>(c) / spacing;
      const std::size_t c0 = static_cast<std::size_t>(fc);
      const double tc = fc - c0;
      const double a = lattice[r0 * lc + c0], b = lattice[r0 * lc + c0 + 1];
      const double d = lattice[(r0 + 1) * lc + c0], e = lattice[(r0 + 1) * lc + c0 + 1];
      out[r * cols + c] = (a * (1 - tc) + b * tc) * (1 - tr) + (d * (1 - tc) + e * tc) * tr;
    }
  }
  return out;
}

}  // namespace

Graph chain() { return water_graph({"A", "B", "C"}, {{0, 1}, {1, 2}}); }

Graph diamond() { return water_graph({"A", "B", "C", "D"}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}); }

std::string strip_dem() {
  return "ncols 5\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 1\nNODATA_value -9999\n"
         "5 4 3 2 1\n";
}

std::string y_junction_dem() {
  return "ncols 3\nnrows 5\nxllcorner 0\nyllcorner 0\ncellsize 1\nNODATA_value -9999\n"
         "9 -9999 9\n"
         "8 -9999 8\n"
         "7 -9999 7\n"
         "-9999 5 -9999\n"
         "-9999 4 -9999\n";
}

std::string pit_dem() {
  return "ncols 3\nnrows 3\nxllcorner 0\nyllcorner 0\ncellsize 1\n"
         "5 5 5\n5 1 5\n5 5 5\n";
}

TransferNetwork transfer_network() {
  Rng rng(20210705);
  const Tree tree = transfer_tree(rng);
  static constexpr const char* kTypes[] = {"reservoir", "dam", "pumping_station", "junction",
                                           "intake"};
  static constexpr const char* kSubsystems[] = {"Alqueva", "Pedrogao", "Ardila"};
  static constexpr const char* kKinds[] = {"channel", "channel", "pipeline", "river"};

  TransferNetwork out;
  out.water_nodes_csv = "id,name,type,subsystem,lon,lat\n";
  for (std::size_t i = 0; i < kWaterNodes; ++i) {
    const std::string id = padded("WN", i + 1, 3);
    const char* subsystem = i <= kLongestPath ? kSubsystems[0]
                            : i <= kLongestPath + 2 ? kSubsystems[2]
                                                    : kSubsystems[1 + rng.index(2)];
    out.water_nodes_csv += id + ",Node " + std::to_string(i + 1) + "," + kTypes[rng.index(5)] +
                           "," + subsystem + "," + coord(rng.uniform(kWest, kEast)) + "," +
                           coord(rng.uniform(kSouth, kNorth)) + "\n";
  }
  out.links_csv = "from_id,to_id,kind\n";
  for (auto [a, b] : tree.links) {
    out.links_csv += padded("WN", a + 1, 3) + "," + padded("WN", b + 1, 3) + "," +
                     kKinds[rng.index(4)] + "\n";
  }
  out.longest_sink = padded("WN", kLongestPath + 1, 3);
  out.longest_member = padded("WN", kLongestPath / 2 + 1, 3);
  return out;
}

StreamFixture stream_network() {
  constexpr double x0 = -7.9;
  constexpr double y0 = 38.2;
  constexpr double d = 0.01;
  StreamFixture f;
  Graph& g = f.graph;
  const NodeId system = ensure_water_system(g, "stream");

  auto stretch = [&](const std::string& id, geo::Point a, geo::Point b) {
    return g.create_node(NodeLabel::WaterStretch,
                         {{"id", id},
                          {"geometry", GeometryRef(geo::Polyline{{a, b}})},
                          {"system", std::string("stream")}});
  };
  std::vector<NodeId> stem, t1, t2;
  for (int i = 1; i <= 50; ++i) {
    stem.push_back(stretch("S" + std::to_string(i), {x0 + (i - 1) * d, y0}, {x0 + i * d, y0}));
  }
  const double xj1 = x0 + 29 * d;
  for (int k = 1; k <= 12; ++k) {
    t1.push_back(stretch("T1_" + std::to_string(k), {xj1, y0 + (13 - k) * d},
                         {xj1, y0 + (12 - k) * d}));
  }
  const double xj2 = x0 + 39 * d;
  for (int k = 1; k <= 11; ++k) {
    t2.push_back(stretch("T2_" + std::to_string(k), {xj2, y0 - (12 - k) * d},
                         {xj2, y0 - (11 - k) * d}));
  }
  for (std::size_t i = 0; i + 1 < stem.size(); ++i) g.create_edge(EdgeType::FLOWS_TO, stem[i], stem[i + 1]);
  for (std::size_t i = 0; i + 1 < t1.size(); ++i) g.create_edge(EdgeType::FLOWS_TO, t1[i], t1[i + 1]);
  for (std::size_t i = 0; i + 1 < t2.size(); ++i) g.create_edge(EdgeType::FLOWS_TO, t2[i], t2[i + 1]);
  g.create_edge(EdgeType::FLOWS_TO, t1.back(), stem[29]);
  g.create_edge(EdgeType::FLOWS_TO, t2.back(), stem[39]);
  g.create_edge(EdgeType::FLOWS_TO, stem[9], stem[11]);

  auto station = [&](const std::string& id, double lon, double lat) {
    const NodeId n = g.create_node(NodeLabel::QualityStation,
                                   {{"id", id}, {"name", "Station " + id}, {"lon", lon}, {"lat", lat}});
    g.create_edge(EdgeType::STATION_OF, n, system);
    return n;
  };
  f.station_a = station("A", x0 + 1.5 * d, y0 + 0.001);
  f.station_b = station("B", x0 + 18.5 * d, y0 + 0.001);
  f.station_c = station("C", xj1 + 0.001, y0 + 7.5 * d);

  const double split = x0 + 25.5 * d;
  auto area = [&](NodeLabel label, EdgeType link, const std::string& id, Box b) {
    const NodeId n = g.create_node(
        label, {{"id", id}, {"geometry", GeometryRef(shape_from_geojson(rect(b.w, b.s, b.e, b.n)))}});
    g.create_edge(link, system, n);
    return n;
  };
  area(NodeLabel::Watershed, EdgeType::HAS_WATERSHED, "W1", {x0 - 2 * d, y0 - 0.2, split, y0 + 0.2});
  area(NodeLabel::Watershed, EdgeType::HAS_WATERSHED, "W2", {split, y0 - 0.2, x0 + 51 * d, y0 + 0.2});
  f.landuse_w1 = area(NodeLabel::LandUse, EdgeType::HAS_LANDUSE, "L1",
                      {x0 + 5 * d, y0 + 0.05, x0 + 8 * d, y0 + 0.08});
  f.landuse_w2 = area(NodeLabel::LandUse, EdgeType::HAS_LANDUSE, "L2",
                      {x0 + 35 * d, y0 - 0.08, x0 + 38 * d, y0 - 0.05});

  link_stations_to_stretches(g, geo::kDefaultSnapTolerance);
  compute_within_edges(g);
  f.query_stretch = stem[44];
  f.dry_stretch = t2[2];
  return f;
}

DemGrid efma_dem(std::uint32_t seed) {
  Rng rng(seed);
  DemGrid dem;
  dem.ncols = kDemCols;
  dem.nrows = kDemRows;
  dem.xll = kWest;
  dem.yll = kSouth;
  dem.cellsize = kDemCell;
  dem.elevations.assign(kDemCols * kDemRows, 0.0);
  for (std::size_t r = 0; r < kDemRows; ++r) {
    for (std::size_t c = 0; c < kDemCols; ++c) {
      // Land falls towards the south-west, as the Guadiana basin does.
      dem.elevations[r * kDemCols + c] = 150.0 + 0.25 * (kDemRows - r) + 0.15 * c;
    }
  }
  double amplitude = 40.0;
  for (std::size_t spacing = 64; spacing >= 4; spacing /= 2) {
    const auto noise = lattice_noise(rng, kDemRows, kDemCols, spacing);
    for (std::size_t i = 0; i < noise.size(); ++i) dem.elevations[i] += amplitude * noise[i];
    amplitude *= 0.5;
  }
  for (double& z : dem.elevations) z = std::round((z + rng.uniform(-0.5, 0.5)) * 100.0) / 100.0;
  return dem;
}

EfmaFiles efma_files() {
  EfmaFiles out;
  const TransferNetwork net = transfer_network();
  out.water_nodes_csv = net.water_nodes_csv;
  out.links_csv = net.links_csv;

  Rng rng(795);
  static constexpr const char* kOperators[] = {"EDIA", "APA", "SNIRH", ""};
  out.stations_csv = "id,name,lon,lat,operator\n";
  std::vector<bool> reservoir(kStations);
  for (std::size_t i = 0; i < kStations; ++i) {
    reservoir[i] = rng.uniform() < 0.3;
    out.stations_csv += padded("ST", i + 1, 4) + "," + (reservoir[i] ? "Reservoir " : "River ") +
                        std::to_string(i + 1) + "," + coord(rng.uniform(kWest + 0.005, kEast - 0.005)) +
                        "," + coord(rng.uniform(kSouth + 0.005, kNorth - 0.005)) + "," +
                        kOperators[rng.index(4)] + "\n";
  }

  // 43892 = 795 * 55 + 167: the first 167 stations carry one extra sample.
  static constexpr double kRange[][2] = {{0, 50}, {0, 2}, {6, 9}, {2, 12}, {5, 30}, {100, 1500}};
  static constexpr double kDetection[] = {0.5, 0.02, 0, 0, 0, 0};
  const std::int64_t start = parse_timestamp("2004-01-01T00:00:00Z").epoch();
  out.quality_csv = "station_id,timestamp,depth_m,NO3,PO4,pH,DO,Temp,Cond\n";
  out.quality_csv.reserve(kQualityRows * 72);
  const std::size_t base = kQualityRows / kStations;
  const std::size_t extra = kQualityRows % kStations;
  for (std::size_t s = 0; s < kStations; ++s) {
    const std::string id = padded("ST", s + 1, 4);
    const std::size_t samples = base + (s < extra ? 1 : 0);
    for (std::size_t k = 0; k < samples; ++k) {
      const std::int64_t t = start + static_cast<std::int64_t>(k) * 61 * 86400 +
                             static_cast<std::int64_t>(s % 28) * 86400 + 36000 +
                             static_cast<std::int64_t>(rng.index(8)) * 1800;
      std::string row = id + "," + format_timestamp(Timestamp::from_epoch(t)) + ",";
      if (reservoir[s]) row += fixed(rng.uniform(0.5, 30.0), 1);
      for (std::size_t p = 0; p < 6; ++p) {
        row += ',';
        const double u = rng.uniform();
        if (u < 0.04) continue;  // not measured
        if (kDetection[p] > 0 && u < 0.09) {
          row += "<" + format_double(kDetection[p]);
        } else {
          row += fixed(rng.uniform(kRange[p][0], kRange[p][1]), 2);
        }
      }
      out.quality_csv += row + "\n";
    }
  }

  // Canal geometries for the first 39 distinct link sources.
  {
    std::map<std::string, std::pair<double, double>> pos;
    const csv::Table nodes = csv::parse(net.water_nodes_csv);
    for (const auto& row : nodes.rows) pos[row[0]] = {std::stod(row[4]), std::stod(row[5])};
    const csv::Table links = csv::parse(net.links_csv);
    json features = json::array();
    std::set<std::string> used;
    for (const auto& row : links.rows) {
      if (features.size() == kGeometries) break;
      if (!used.insert(row[0]).second) continue;
      const auto [ax, ay] = pos.at(row[0]);
      const auto [bx, by] = pos.at(row[1]);
      const json line = {{"type", "LineString"},
                         {"coordinates", json::array({json::array({ax, ay}),
                                                      json::array({(ax + bx) / 2, (ay + by) / 2 + 0.01}),
                                                      json::array({bx, by})})}};
      features.push_back(feature(line, {{"id", padded("G", features.size() + 1, 2)},
                                        {"node_id", row[0]},
                                        {"kind", row[2]}}));
    }
    out.geometries_geojson = collection("geometry", std::move(features)).dump();
  }

  const auto boxes = watershed_boxes();
  {
    json features = json::array();
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      const Box& b = boxes[i].first;
      json props = {{"id", padded("WS", i + 1, 2)}, {"name", "Watershed " + std::to_string(i + 1)}};
      if (boxes[i].second >= 0) props["parent"] = padded("WS", boxes[i].second + 1, 2);
      features.push_back(feature(rect(b.w, b.s, b.e, b.n), std::move(props)));
    }
    out.watersheds_geojson = collection("watershed", std::move(features)).dump();
  }
  {
    static constexpr const char* kUses[] = {"olive grove", "vineyard", "irrigated maize",
                                            "cork oak montado", "urban", "pasture"};
    json features = json::array();
    for (std::size_t i = 0; i < kLandUse; ++i) {
      // Leaf sub-basins 3..16 cycle; areas sit in their lower-left corner so
      // they never overlap an inset sub-sub-basin.
      const Box& p = boxes[3 + i % 14].first;
      const double w = (p.e - p.w) / 8;
      const double h = (p.n - p.s) / 8;
      const double x = p.w + w * (0.2 + 0.6 * (i / 14));
      const double y = p.s + h * 0.2;
      features.push_back(feature(rect(x, y, x + w * 0.5, y + h * 0.5),
                                 {{"id", padded("LU", i + 1, 2)}, {"landuse", kUses[rng.index(6)]}}));
    }
    out.landuse_geojson = collection("landuse", std::move(features)).dump();
  }
  out.dem_asc = write_ascii_grid(efma_dem());
  return out;
}

NodeId load_efma(Graph& graph, const EfmaFiles& files, std::string_view system) {
  const NodeId sys = ensure_water_system(graph, system);
  ingest_water_nodes(graph, files.water_nodes_csv, sys);
  ingest_links(graph, files.links_csv);
  ingest_stations(graph, files.stations_csv, sys);
  ingest_quality_data(graph, files.quality_csv);
  ingest_geojson_layer(graph, files.geometries_geojson, LayerKind::Geometry, sys);
  ingest_geojson_layer(graph, files.watersheds_geojson, LayerKind::Watershed, sys);
  ingest_geojson_layer(graph, files.landuse_geojson, LayerKind::LandUse, sys);
  return ingest_dem(graph, files.dem_asc, sys, "efma-dem");
}

void write_efma(const EfmaFiles& files, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::pair<const char*, const std::string*> entries[] = {
      {"waternodes.csv", &files.water_nodes_csv},
      {"links.csv", &files.links_csv},
      {"stations.csv", &files.stations_csv},
      {"quality.csv", &files.quality_csv},
      {"geometries.geojson", &files.geometries_geojson},
      {"watersheds.geojson", &files.watersheds_geojson},
      {"landuse.geojson", &files.landuse_geojson},
      {"dem.asc", &files.dem_asc}};
  for (const auto& [name, content] : entries) {
    std::ofstream out(dir / name, std::ios::binary);
    out << *content;
    if (!out) throw Error(ErrorCode::Io, "cannot write " + (dir / name).string());
  }
}

}  // namespace hydrograph::fixtures
