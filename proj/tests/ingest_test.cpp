#include <gtest/gtest.h>

#include "hydrograph/csv.hpp"
#include "hydrograph/ingest.hpp"
#include "hydrograph/json_codec.hpp"
#include "support/expect.hpp"

using namespace hydrograph;

namespace {

const char* kNodes =
    "id,name,type,subsystem,lon,lat\n"
    "N1,Alqueva,reservoir,Alqueva,-7.49,38.2\n"
    "N2,Pedrogao,dam,Pedrogao,-7.64,38.1\n"
    "N3,Alvito,reservoir,Alqueva,-7.93,38.27\n";

const char* kLinks =
    "from_id,to_id,kind\n"
    "N1,N2,river\n"
    "N1,N3,channel\n";

const char* kStations =
    "id,name,lon,lat,operator\n"
    "S1,Montante,-7.5,38.21,EDIA\n"
    "S2,Jusante,-7.6,38.12,\n";

std::string square_feature(const std::string& id, double x0, double y0, double x1, double y1,
                           const std::string& extra = "") {
  return R"({"type":"Feature","properties":{"id":")" + id + "\"" + extra +
         R"(},"geometry":{"type":"Polygon","coordinates":[[[)" + std::to_string(x0) + "," +
         std::to_string(y0) + "],[" + std::to_string(x1) + "," + std::to_string(y0) + "],[" +
         std::to_string(x1) + "," + std::to_string(y1) + "],[" + std::to_string(x0) + "," +
         std::to_string(y1) + "],[" + std::to_string(x0) + "," + std::to_string(y0) + "]]]}}";
}

std::string collection(const std::vector<std::string>& features) {
  std::string out = R"({"type":"FeatureCollection","features":[)";
  for (std::size_t i = 0; i < features.size(); ++i) out += (i ? "," : "") + features[i];
  return out + "]}";
}

struct Loaded {
  Graph g;
  NodeId system;
};

Loaded network() {
  Loaded l;
  l.system = ensure_water_system(l.g, "main");
  ingest_water_nodes(l.g, kNodes, l.system);
  ingest_links(l.g, kLinks);
  ingest_stations(l.g, kStations, l.system);
  return l;
}

}  // namespace

TEST(Csv, QuotingBomAndCrlf) {
  const auto t = csv::parse("\xEF\xBB\xBF" "a, b ,c\r\n1,\"x,\"\"y\"\"\",3\r\n\r\n4,5,6\n");
  EXPECT_EQ(t.header, (csv::Row{"a", "b", "c"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][1], "x,\"y\"");
  EXPECT_EQ(t.line_numbers[1], 4u);
  EXPECT_EQ(csv::escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv::escape("plain"), "plain");
}

TEST(Detect, FingerprintsEachKind) {
  EXPECT_EQ(detect_file_kind(kNodes), FileKind::WaterNodesCsv);
  EXPECT_EQ(detect_file_kind(kLinks), FileKind::LinksCsv);
  EXPECT_EQ(detect_file_kind(kStations), FileKind::StationsCsv);
  EXPECT_EQ(detect_file_kind("station_id,timestamp,NO3\nS1,2020-01-01,2\n"), FileKind::QualityCsv);
  EXPECT_EQ(detect_file_kind(collection({})), FileKind::GeoJsonLayer);
  EXPECT_EQ(detect_file_kind("NCOLS 1\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 1\n3\n"),
            FileKind::DemAsciiGrid);
  EXPECT_EQ(detect_file_kind("lat,lon,name,id,type,subsystem,depth\n"), FileKind::WaterNodesCsv);
}

TEST(Detect, RejectsUnknownInput) {
  EXPECT_ERROR_CODE(detect_file_kind(std::string("\x89PNG\r\n\x1a\n\0\0", 10)), ErrorCode::UnrecognizedFile);
  EXPECT_ERROR_CODE(detect_file_kind(""), ErrorCode::UnrecognizedFile);
  EXPECT_ERROR_CODE(detect_file_kind("foo,bar\n1,2\n"), ErrorCode::UnrecognizedFile);
  EXPECT_ERROR_CODE(detect_file_kind(R"({"type":"Feature"})"), ErrorCode::UnrecognizedFile);
  EXPECT_ERROR_CODE(detect_file_kind("station_id,timestamp\n"), ErrorCode::UnrecognizedFile);
}

TEST(Ingest, WaterNodesLinksStations) {
  Graph g;
  const NodeId sys = ensure_water_system(g, "main");
  const auto nodes = ingest_water_nodes(g, kNodes, sys);
  EXPECT_EQ(nodes.nodes_created, 3u);
  EXPECT_EQ(nodes.rows_skipped, 0u);
  const auto links = ingest_links(g, kLinks);
  EXPECT_EQ(links.edges_created, 2u);
  const auto stations = ingest_stations(g, kStations, sys);
  EXPECT_EQ(stations.nodes_created, 2u);
  EXPECT_EQ(stations.edges_created, 2u);
  EXPECT_EQ(g.count(EdgeType::STATION_OF), 2u);

  const Node& n1 = g.node(*g.find_by_domain_id(NodeLabel::WaterNode, "N1"));
  EXPECT_EQ(*get_prop<std::string>(n1.props, "type"), "reservoir");
  EXPECT_DOUBLE_EQ(*get_number(n1.props, "lon"), -7.49);
  EXPECT_EQ(*get_prop<std::string>(n1.props, "system"), "main");
  const Node& s2 = g.node(*g.find_by_domain_id(NodeLabel::QualityStation, "S2"));
  EXPECT_FALSE(s2.props.count("operator"));
}

TEST(Ingest, BadRowsAreSkippedWithWarnings) {
  Graph g;
  const NodeId sys = ensure_water_system(g, "main");
  const auto nodes = ingest_water_nodes(g,
                                        "id,name,type,subsystem,lon,lat\n"
                                        "A,a,dam,x,-7,38\n"
                                        "B,b,dam,x,abc,38\n"
                                        "C,c,dam,x,-7\n"
                                        ",d,dam,x,-7,38\n"
                                        "A,dup,dam,x,-7,38\n",
                                        sys);
  EXPECT_EQ(nodes.nodes_created, 1u);
  EXPECT_EQ(nodes.rows_skipped, 4u);
  EXPECT_EQ(nodes.warnings.size(), 4u);
  EXPECT_NE(nodes.warnings[0].find("line 3"), std::string::npos);

  const auto links = ingest_links(g,
                                  "from_id,to_id,kind\n"
                                  "A,Z,river\n"
                                  "A,A,river\n"
                                  "A,A,aqueduct\n");
  EXPECT_EQ(links.edges_created, 0u);
  EXPECT_EQ(links.rows_skipped, 3u);
  EXPECT_EQ(links.warnings.size(), 3u);

  EXPECT_ERROR_CODE(ingest_links(g, "from,to\nA,B\n"), ErrorCode::BadHeader);
}

TEST(Ingest, QualityRowsBecomeSamplesOfKnownStations) {
  Loaded l = network();
  const auto r = ingest_quality_data(l.g,
                                     "station_id,timestamp,depth_m,NO3,PO4\n"
                                     "S1,2020-01-15T10:00:00Z,,12.5,<0.02\n"
                                     "S1,2020-02-15T10:00:00Z,,13,\n"
                                     "S9,2020-02-15T10:00:00Z,,1,1\n"
                                     "S2,not-a-date,,1,1\n");
  EXPECT_EQ(r.nodes_created, 2u);
  EXPECT_EQ(r.edges_created, 2u);
  EXPECT_EQ(r.rows_skipped, 2u);
  EXPECT_EQ(r.warnings.size(), 2u);
  const NodeId s1 = *l.g.find_by_domain_id(NodeLabel::QualityStation, "S1");
  EXPECT_EQ(l.g.neighbors(s1, EdgeType::COLLECTED, Direction::Out).size(), 2u);
  const auto data = l.g.find_by_domain_id(NodeLabel::QualityData, "S1@2020-01-15T10:00:00Z");
  ASSERT_TRUE(data);
  const auto& props = l.g.node(*data).props;
  EXPECT_DOUBLE_EQ(*get_number(props, "NO3"), 12.5);
  EXPECT_DOUBLE_EQ(*get_number(props, "PO4"), 0.02);
  EXPECT_TRUE(*get_prop<bool>(props, "bdl:PO4"));
}

TEST(Ingest, GeoJsonLayersLinkToSystemAndNest) {
  Loaded l = network();
  const std::string watersheds = collection({square_feature("W1", -8, 38, -7, 39),
                                             square_feature("W2", -7.9, 38.1, -7.4, 38.5),
                                             square_feature("W3", -7.8, 38.15, -7.5, 38.4)});
  const auto w = ingest_geojson_layer(l.g, watersheds, LayerKind::Watershed, l.system);
  EXPECT_EQ(w.nodes_created, 3u);
  EXPECT_EQ(l.g.count(EdgeType::HAS_WATERSHED), 3u);
  // Transitive reduction: W3 -> W2 -> W1 only.
  EXPECT_EQ(l.g.count(EdgeType::PART_OF), 2u);
  const NodeId w1 = *l.g.find_by_domain_id(NodeLabel::Watershed, "W1");
  const NodeId w2 = *l.g.find_by_domain_id(NodeLabel::Watershed, "W2");
  const NodeId w3 = *l.g.find_by_domain_id(NodeLabel::Watershed, "W3");
  EXPECT_TRUE(l.g.has_edge(EdgeType::PART_OF, w3, w2));
  EXPECT_TRUE(l.g.has_edge(EdgeType::PART_OF, w2, w1));

  const std::string landuse =
      collection({square_feature("L1", -7.7, 38.2, -7.6, 38.3, R"(,"landuse":"olive grove")"),
                  square_feature("L2", -7.95, 38.9, -7.9, 38.95, R"(,"landuse":"vineyard")")});
  EXPECT_EQ(infer_layer(landuse), LayerKind::LandUse);
  const auto lu = ingest_geojson_layer(l.g, landuse, LayerKind::LandUse, l.system);
  EXPECT_EQ(lu.nodes_created, 2u);
  const NodeId l1 = *l.g.find_by_domain_id(NodeLabel::LandUse, "L1");
  const NodeId l2 = *l.g.find_by_domain_id(NodeLabel::LandUse, "L2");
  ASSERT_EQ(l.g.neighbors(l1, EdgeType::WITHIN, Direction::Out).size(), 1u);
  EXPECT_EQ(l.g.neighbors(l1, EdgeType::WITHIN, Direction::Out)[0].node, w3);
  EXPECT_EQ(l.g.neighbors(l2, EdgeType::WITHIN, Direction::Out)[0].node, w1);
}

TEST(Ingest, GeometryLayerRepresentsWaterNodes) {
  Loaded l = network();
  const std::string doc = R"({"type":"FeatureCollection","features":[
    {"type":"Feature","properties":{"id":"G1","node_id":"N1"},
     "geometry":{"type":"LineString","coordinates":[[-7.49,38.2],[-7.64,38.1]]}},
    {"type":"Feature","properties":{"id":"G2","node_id":"missing"},
     "geometry":{"type":"Point","coordinates":[-7.5,38]}},
    {"type":"Feature","properties":{"id":"G3"},
     "geometry":{"type":"GeometryCollection","geometries":[]}},
    {"type":"Feature","properties":{"name":"no id"},
     "geometry":{"type":"Point","coordinates":[-7.5,38]}}]})";
  EXPECT_EQ(infer_layer(doc), LayerKind::Geometry);
  const auto r = ingest_geojson_layer(l.g, doc, LayerKind::Geometry, l.system);
  EXPECT_EQ(r.nodes_created, 2u);
  EXPECT_EQ(r.rows_skipped, 2u);
  EXPECT_EQ(l.g.count(EdgeType::REPRESENTED), 1u);
  EXPECT_EQ(l.g.count(EdgeType::HAS_GEOMETRY), 2u);
  EXPECT_EQ(r.warnings.size(), 3u);
  EXPECT_ERROR_CODE(ingest_geojson_layer(l.g, "[1,2]", LayerKind::Geometry, l.system),
                    ErrorCode::BadGeoJson);
}

TEST(Ingest, WatershedLayerRejectsNonPolygons) {
  Loaded l = network();
  const std::string doc = R"({"type":"FeatureCollection","features":[
    {"type":"Feature","properties":{"id":"W"},"geometry":{"type":"Point","coordinates":[0,0]}}]})";
  const auto r = ingest_geojson_layer(l.g, doc, LayerKind::Watershed, l.system);
  EXPECT_EQ(r.nodes_created, 0u);
  EXPECT_EQ(r.rows_skipped, 1u);
}

TEST(Ingest, DemGrid) {
  Graph g;
  const NodeId sys = ensure_water_system(g, "main");
  const std::string text =
      "ncols 5\nnrows 5\nxllcorner -8\nyllcorner 38\ncellsize 0.01\nNODATA_value -9999\n"
      "1 2 3 4 5\n1 2 3 4 5\n1 2 3 4 5\n1 2 3 4 5\n1 2 3 4 -9999\n";
  const NodeId dem = ingest_dem(g, text, sys);
  EXPECT_EQ(g.count(NodeLabel::DEM), 1u);
  EXPECT_EQ(*get_prop<std::int64_t>(g.node(dem).props, "ncols"), 5);
  EXPECT_EQ(*get_prop<std::int64_t>(g.node(dem).props, "nrows"), 5);
  ASSERT_TRUE(g.raster(dem));
  EXPECT_TRUE(g.raster(dem)->is_nodata(24));
  EXPECT_EQ(ingest_dem(g, text, sys), dem);
  EXPECT_EQ(g.count(NodeLabel::DEM), 1u);

  std::string short_body = text.substr(0, text.rfind(" -9999"));
  EXPECT_ERROR_CODE(ingest_dem(g, short_body, sys), ErrorCode::BadGrid);
  EXPECT_ERROR_CODE(ingest_dem(g, "ncols 2\nnrows 1\nxllcorner 0\nyllcorner 0\n1 2\n", sys),
                    ErrorCode::BadGrid);
}

TEST(Ingest, CenterRegisteredGridIsShiftedToCorners) {
  const DemGrid g = parse_ascii_grid("ncols 2\nnrows 2\nxllcenter 0.5\nyllcenter 0.5\ncellsize 1\n1 2\n3 4\n");
  EXPECT_DOUBLE_EQ(g.xll, 0.0);
  EXPECT_DOUBLE_EQ(g.yll, 0.0);
  EXPECT_EQ(g.at(1, 0), 3.0);
}

TEST(Ingest, DispatchDetectsAndReIngestionIsIdempotent) {
  Graph g;
  const IngestOptions opts;
  const std::string files[] = {
      kNodes, kLinks, kStations, "station_id,timestamp,NO3\nS1,2020-01-01,1.5\nS2,2020-01-01,<1\n",
      collection({square_feature("W1", -8, 38, -7, 39)}),
      "ncols 2\nnrows 1\nxllcorner 0\nyllcorner 0\ncellsize 1\n2 1\n"};
  std::vector<std::size_t> first;
  for (const auto& f : files) {
    const auto r = ingest_file(g, f, opts);
    first.push_back(r.nodes_created + r.edges_created);
    EXPECT_EQ(r.rows_skipped, 0u) << to_string(r.kind);
  }
  EXPECT_EQ(first, (std::vector<std::size_t>{3, 2, 4, 4, 2, 1}));
  const std::size_t nodes = g.node_count();
  const std::size_t edges = g.edge_count();
  for (const auto& f : files) {
    const auto r = ingest_file(g, f, opts);
    EXPECT_EQ(r.nodes_created, 0u) << to_string(r.kind);
    EXPECT_EQ(r.edges_created, 0u) << to_string(r.kind);
  }
  EXPECT_EQ(g.node_count(), nodes);
  EXPECT_EQ(g.edge_count(), edges);
  EXPECT_EQ(g.count(NodeLabel::WaterSystem), 1u);
}

TEST(Ingest, ReportCountsCoverEveryDataRow) {
  Graph g;
  const NodeId sys = ensure_water_system(g, "main");
  const std::string text = std::string(kNodes) + "bad,row\nN1,again,dam,x,-7,38\n";
  const auto r = ingest_water_nodes(g, text, sys);
  EXPECT_EQ(r.nodes_created + r.rows_skipped, csv::parse(text).rows.size());
  EXPECT_EQ(r.warnings.size(), r.rows_skipped);
}
