// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Sub-checks print indented beneath their criterion.

#include <httplib.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <json.hpp>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "hydrograph/auth.hpp"
#include "hydrograph/drainage.hpp"
#include "hydrograph/error.hpp"
#include "hydrograph/fixtures.hpp"
#include "hydrograph/ingest.hpp"
#include "hydrograph/quality.hpp"
#include "hydrograph/query.hpp"
#include "hydrograph/server.hpp"
#include "support/oracles.hpp"

using namespace hydrograph;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
  std::string name;
  bool ok = true;
  std::vector<std::string> notes;

  void check(bool pass, const std::string& what) {
    notes.push_back(std::string(pass ? "  ok    " : "  FAIL  ") + what);
    ok = ok && pass;
  }
};

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Median of five warm runs, after one untimed run.
double warm_ms(const std::function<void()>& fn) {
  fn();
  std::vector<double> runs;
  for (int i = 0; i < 5; ++i) {
    const auto t = Clock::now();
    fn();
    runs.push_back(ms_since(t));
  }
  std::sort(runs.begin(), runs.end());
  return runs[2];
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

template <class Fn>
bool throws_code(Fn&& fn, ErrorCode code) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

std::set<oracle::NodePath> through(const std::set<oracle::NodePath>& all, std::uint64_t node) {
  std::set<oracle::NodePath> out;
  for (const auto& p : all) {
    if (std::find(p.begin(), p.end(), node) != p.end()) out.insert(p);
  }
  return out;
}

void transfer_network(Criterion& c) {
  const auto net = fixtures::transfer_network();
  Graph g;
  const NodeId sys = ensure_water_system(g, "efma");
  ingest_water_nodes(g, net.water_nodes_csv, sys);
  ingest_links(g, net.links_csv);
  c.check(g.count(NodeLabel::WaterNode) == 115, std::to_string(g.count(NodeLabel::WaterNode)) + " water nodes (115)");
  c.check(g.count(EdgeType::CONNECTED) == 113, std::to_string(g.count(EdgeType::CONNECTED)) + " CONNECTED (113)");

  const auto all = oracle::all_source_sink_paths(g, EdgeType::CONNECTED, NodeLabel::WaterNode);
  std::size_t longest = 0;
  for (const auto& p : all) longest = std::max(longest, p.size() - 1);
  c.check(longest == 21, "longest path " + std::to_string(longest) + " edges (21)");

  std::size_t mismatches = 0;
  for (NodeId n : g.find_nodes(NodeLabel::WaterNode)) {
    if (oracle::as_set(q1_sources(g, n)) !=
        oracle::all_source_paths_to(g, EdgeType::CONNECTED, NodeLabel::WaterNode, n.value)) {
      ++mismatches;
    }
    const auto q2 = q2_full_paths(g, n);
    if (oracle::as_set(q2) != through(all, n.value) || oracle::as_set(q2).size() != q2.size()) ++mismatches;
  }
  c.check(mismatches == 0, "q1/q2 equal the DFS oracle on all 115 nodes (" + std::to_string(mismatches) + " mismatches)");

  const NodeId sink = *g.find_by_domain_id(NodeLabel::WaterNode, net.longest_sink);
  const NodeId member = *g.find_by_domain_id(NodeLabel::WaterNode, net.longest_member);
  const double t1 = warm_ms([&] { q1_sources(g, sink); });
  const double t2 = warm_ms([&] { q2_full_paths(g, member); });
  c.check(t1 <= 50, "q1 warm " + fmt("%.3f", t1) + " ms (<= 50)");
  c.check(t2 <= 50, "q2 warm " + fmt("%.3f", t2) + " ms (<= 50)");
}

void drainage_fixture(Criterion& c) {
  const auto fx = fixtures::stream_network();
  const Graph& g = fx.graph;
  c.check(g.count(NodeLabel::WaterStretch) == 73 && g.count(EdgeType::FLOWS_TO) == 73,
          std::to_string(g.count(NodeLabel::WaterStretch)) + " stretches / " +
              std::to_string(g.count(EdgeType::FLOWS_TO)) + " FLOWS_TO (73 / 73)");
  c.check(g.count(NodeLabel::QualityStation) == 3, "3 stations");

  // Longest path between two monitored stretches along FLOWS_TO.
  std::set<NodeId> monitored;
  for (EdgeId e : g.edges_of_type(EdgeType::MONITORED_BY)) monitored.insert(g.edge(e).source);
  std::size_t longest = 0;
  for (const auto& p : oracle::all_source_sink_paths(g, EdgeType::FLOWS_TO, NodeLabel::WaterStretch)) {
    std::vector<std::size_t> at;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (monitored.count(NodeId{p[i]})) at.push_back(i);
    }
    if (at.size() >= 2) longest = std::max(longest, at.back() - at.front());
  }
  c.check(longest == 17, "longest inter-station path " + std::to_string(longest) + " edges (17)");

  const auto hits = q3_downstream_stations(g, fx.query_stretch);
  std::set<NodeId> stations;
  for (const auto& h : hits) stations.insert(h.station);
  c.check(hits.size() == 3 && stations == std::set<NodeId>{fx.station_a, fx.station_b, fx.station_c},
          "q3 returns all 3 stations");
  c.check(q3_downstream_stations(g, fx.dry_stretch).empty(), "q3 on a dry branch returns none");

  // Watershed-correct set: stations sharing a WITHIN target with the land use.
  auto expected_q4 = [&](NodeId lu) {
    std::set<NodeId> out;
    for (const auto& w : g.neighbors(lu, EdgeType::WITHIN, Direction::Out)) {
      for (const auto& s : g.neighbors(w.node, EdgeType::WITHIN, Direction::In)) {
        if (g.node(s.node).label == NodeLabel::QualityStation) out.insert(s.node);
      }
    }
    return std::vector<NodeId>(out.begin(), out.end());
  };
  const auto w1 = q4_stations_same_watershed(g, fx.landuse_w1);
  const auto w2 = q4_stations_same_watershed(g, fx.landuse_w2);
  c.check(w1 == std::vector<NodeId>{fx.station_a, fx.station_b} && w1 == expected_q4(fx.landuse_w1),
          "q4 upper land use returns stations A, B");
  c.check(w2 == std::vector<NodeId>{fx.station_c} && w2 == expected_q4(fx.landuse_w2),
          "q4 lower land use returns station C");

  const double t3 = warm_ms([&] { q3_downstream_stations(g, fx.query_stretch); });
  const double t4 = warm_ms([&] { q4_stations_same_watershed(g, fx.landuse_w1); });
  c.check(t3 <= 50, "q3 warm " + fmt("%.3f", t3) + " ms (<= 50)");
  c.check(t4 <= 50, "q4 warm " + fmt("%.3f", t4) + " ms (<= 50)");
}

void full_scale(Criterion& c) {
  const auto t0 = Clock::now();
  const auto files = fixtures::efma_files();
  Graph g;
  const NodeId dem = fixtures::load_efma(g, files);
  const DrainageComputation d = compute_drainage(*g.raster(dem), fixtures::kEfmaThreshold);
  apply_drainage(g, dem, d);
  const double ingest_ms = ms_since(t0);

  const std::size_t base = g.count(NodeLabel::WaterNode) + g.count(NodeLabel::QualityStation) +
                           g.count(NodeLabel::QualityData) + g.count(NodeLabel::Geometry) +
                           g.count(NodeLabel::Watershed) + g.count(NodeLabel::LandUse) +
                           g.count(NodeLabel::DEM);
  c.check(g.count(NodeLabel::WaterNode) == 115 && g.count(NodeLabel::QualityStation) == 795 &&
              g.count(NodeLabel::QualityData) == 43892 && g.count(NodeLabel::Geometry) == 39 &&
              g.count(NodeLabel::Watershed) == 23 && g.count(NodeLabel::LandUse) == 22 &&
              g.count(NodeLabel::DEM) == 1,
          "composition 115 + 795 + 43892 + 39 + 23 + 22 + 1 = " + std::to_string(base));
  c.check(g.count(NodeLabel::WaterStretch) == 1862,
          std::to_string(g.count(NodeLabel::WaterStretch)) + " stretches after drainage (1862)");
  c.check(g.count(EdgeType::FLOWS_TO) == 1922,
          std::to_string(g.count(EdgeType::FLOWS_TO)) + " FLOWS_TO after drainage (1922)");
  c.check(g.node_count() == 44887, "total nodes " + std::to_string(g.node_count()) + " (44887)");
  c.check(g.edge_count() == 44285, "total edges " + std::to_string(g.edge_count()) + " (44285)");

  const auto path = std::filesystem::temp_directory_path() / "hydrograph_acceptance.snapshot";
  snapshot_save(g, path.string());
  const double mb = static_cast<double>(std::filesystem::file_size(path)) / (1024.0 * 1024.0);
  std::filesystem::remove(path);
  c.check(mb <= 250, "snapshot " + fmt("%.1f", mb) + " MB (<= 250)");
  c.check(ingest_ms <= 120000, "generation + ingestion + drainage " + fmt("%.2f", ingest_ms / 1000) + " s (<= 120)");
}

DemGrid random_dem(std::mt19937& gen) {
  DemGrid g;
  g.ncols = g.nrows = 20;
  g.elevations.resize(400);
  for (double& z : g.elevations) z = gen() % 100 < 3 ? g.nodata : static_cast<double>(gen() % 8);
  return g;
}

void drainage_oracles(Criterion& c) {
  const auto t0 = Clock::now();
  std::mt19937 gen(20);
  int dir_bad = 0, acc_bad = 0, mass_bad = 0, fill_bad = 0, grids = 0;
  while (grids < 50) {
    const DemGrid dem = random_dem(gen);
    if (std::all_of(dem.elevations.begin(), dem.elevations.end(), [&](double z) { return z == dem.nodata; })) {
      continue;
    }
    ++grids;
    const DemGrid filled = fill_depressions(dem);
    if (fill_depressions(filled) != filled) ++fill_bad;
    const FlowDirGrid dirs = flow_direction_d8(filled);
    std::vector<int> codes;
    for (FlowDir f : dirs.dirs) codes.push_back(static_cast<int>(f));
    if (codes != oracle::d8_codes(filled)) ++dir_bad;
    const AccumGrid acc = flow_accumulation(dirs);
    if (acc.counts != oracle::particle_accumulation(dirs)) ++acc_bad;
    std::uint64_t outlets = 0, cells = 0;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      if (dirs.dirs[i] == FlowDir::Nodata) continue;
      ++cells;
      if (dirs.dirs[i] == FlowDir::Outlet) outlets += acc.counts[i];
    }
    if (outlets != cells) ++mass_bad;
  }
  const double ms = ms_since(t0);
  c.check(dir_bad == 0, "flow direction equals steepest-descent oracle on 50 grids");
  c.check(acc_bad == 0, "accumulation equals particle-routing oracle");
  c.check(mass_bad == 0, "outlet accumulation sums to the non-nodata cell count");
  c.check(fill_bad == 0, "fill is idempotent");
  c.check(ms <= 10000, "runtime " + fmt("%.1f", ms) + " ms (<= 10000)");
}

void geometry_oracles(Criterion& c) {
  std::mt19937 gen(55);
  int checked = 0, bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    geo::Polygon poly{oracle::star_ring(gen, 0, 0, 0.2, 1.0, 3 + gen() % 20, trial % 2 == 1), {}};
    if (trial % 5 == 0) poly.holes.push_back(oracle::star_ring(gen, 0, 0, 0.05, 0.15, 6));
    const geo::Point p{oracle::uniform(gen, -1.2, 1.2), oracle::uniform(gen, -1.2, 1.2)};
    if (oracle::boundary_distance(p, poly) < 1e-7) continue;
    ++checked;
    if (geo::point_in_polygon(p, poly) != oracle::inside(p, poly)) ++bad;
  }
  c.check(bad == 0, "point_in_polygon agrees with winding number on " + std::to_string(checked) +
                        " pairs (" + std::to_string(bad) + " disagreements)");
  c.check(checked >= 990, "at most 10 of 1000 pairs skipped as on-boundary");

  const geo::Polyline line{{{0, 0}, {1, 0}, {1, 1}}};
  std::vector<std::size_t> picks;
  for (int run = 0; run < 3; ++run) {
    const auto hit = geo::snap_point_to_polyline({0.999, 0.001}, line, 0.01);
    picks.push_back(hit ? hit->segment : 99);
  }
  c.check(picks == std::vector<std::size_t>{0, 0, 0}, "snap tie resolves to the same segment over 3 runs");
}

void store_properties(Criterion& c) {
  const auto files = fixtures::efma_files();
  Graph g;
  const NodeId dem = fixtures::load_efma(g, files);
  apply_drainage(g, dem, compute_drainage(*g.raster(dem), fixtures::kEfmaThreshold));
  const std::string text = snapshot_serialize(g);
  const Graph back = snapshot_parse(text);
  c.check(snapshot_serialize(back) == text && back.node_count() == g.node_count() &&
              back.edge_count() == g.edge_count(),
          "snapshot round-trip identity on the full fixture");

  Graph s;
  const NodeId wn = s.create_node(NodeLabel::WaterNode, {{"id", "a"}});
  const NodeId st = s.create_node(NodeLabel::QualityStation, {{"id", "s"}});
  c.check(throws_code([&] { s.create_edge(EdgeType::CONNECTED, wn, st); }, ErrorCode::SchemaViolation),
          "CONNECTED WaterNode -> QualityStation rejected");
  c.check(throws_code([&] { s.create_edge(EdgeType::CONNECTED, wn, wn); }, ErrorCode::SelfLoop),
          "self-loop rejected");

  const std::size_t nodes = g.node_count(), edges = g.edge_count();
  fixtures::load_efma(g, files);
  const auto again = apply_drainage(g, dem, compute_drainage(*g.raster(dem), fixtures::kEfmaThreshold));
  c.check(g.node_count() == nodes && g.edge_count() == edges && again.monitored_by == 0 && again.within == 0,
          "re-ingesting every file and re-running drainage changes no counts (" +
              std::to_string(g.node_count()) + " nodes, " + std::to_string(g.edge_count()) + " edges)");
}

void service_contract(Criterion& c) {
  ServerConfig cfg{"acceptance", "pw", "acceptance-secret", {}, std::chrono::hours(1)};
  Server server(cfg);
  const int port = server.bind("127.0.0.1", 0);
  if (port <= 0) {
    c.check(false, "bind to a local port");
    return;
  }
  std::thread th([&] { server.run(); });
  server.wait_until_ready();

  httplib::Client anon("127.0.0.1", port);
  auto unauth = anon.Get("/api/waternodes");
  c.check(unauth && unauth->status == 401, "unauthenticated GET is 401");

  httplib::Client cl("127.0.0.1", port);
  auto tok = cl.Post("/api/auth/token", R"({"username":"acceptance","password":"pw"})", "application/json");
  if (!tok || tok->status != 200) {
    c.check(false, "token issued");
  } else {
    cl.set_bearer_token_auth(json::parse(tok->body).at("token").get<std::string>());
    auto upload = [&](const std::string& body) { return cl.Post("/api/upload", body, "text/plain"); };
    upload("id,name,type,subsystem,lon,lat\nA,a,dam,s,-7.9,38.1\nB,b,node,s,-7.8,38.1\n");
    auto r1 = cl.Get("/api/waternodes");
    auto r2 = cl.Get("/api/waternodes");
    c.check(r1 && r2 && r2->get_header_value("x-cache") == "hit" && r1->body == r2->body,
            "repeated GET is a cache hit with identical bytes");
    upload("from_id,to_id,kind\nA,B,channel\n");
    auto r3 = cl.Get("/api/waternodes");
    c.check(r3 && r3->get_header_value("x-cache") == "miss", "upload flips the next GET to a miss");

    auto dem_up = upload(fixtures::strip_dem());
    const NodeId dem = server.graph().read([](const Graph& g) { return g.find_nodes(NodeLabel::DEM).at(0); });
    auto sub = cl.Post("/api/jobs",
                       json{{"kind", "drainage"}, {"params", {{"dem", std::to_string(dem.value)}, {"threshold", 3}}}}.dump(),
                       "application/json");
    json job;
    if (dem_up && sub && sub->status == 200) {
      const std::string poll = "/api/jobs/" + std::to_string(json::parse(sub->body).at("id").get<std::uint64_t>());
      for (int i = 0; i < 1000; ++i) {
        auto r = cl.Get(poll);
        if (!r) break;
        job = json::parse(r->body);
        if (job.at("state") == "done" || job.at("state") == "failed") break;
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
      }
    }
    const bool done = job.is_object() && job.value("state", "") == "done";
    c.check(done && job["result"]["stretches"] == 1 && job["result"]["flows_to"] == 0,
            "strip DEM drainage job completes with 1 stretch / 0 FLOWS_TO");

    upload("id,name,lon,lat,operator\nS1,one,-7.9,38.1,x\nS2,two,-7.8,38.2,x\n");
    const std::string quality =
        "station_id,timestamp,depth_m,NO3,PO4,pH\n"
        "S1,2020-01-01T00:00:00Z,0.5,1.2,<0.01,7.1\n"
        "S1,2020-02-01T09:30:00Z,,2.5,0.3,\n"
        "S2,2020-01-15T00:00:00Z,3,4.0,,6.85\n";
    upload(quality);
    auto csv = cl.Get("/api/quality/export");
    bool lossless = false;
    if (csv && csv->status == 200) {
      const auto exported = series_from_samples(parse_quality_csv(csv->body).samples);
      lossless = exported == series_from_samples(parse_quality_csv(quality).samples) &&
                 export_quality_csv(exported) == csv->body;
    }
    c.check(lossless, "CSV export round-trips through the quality parser");
  }
  server.stop();
  th.join();
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Criterion&)>>> criteria = {
      {"1 transfer network q1/q2", transfer_network},
      {"2 drainage fixture q3/q4", drainage_fixture},
      {"3 full-scale EFMA dataset", full_scale},
      {"4 drainage oracle suite", drainage_oracles},
      {"5 geometry oracle suite", geometry_oracles},
      {"6 store properties", store_properties},
      {"7 service contract", service_contract},
  };
  bool all = true;
  for (const auto& [name, run] : criteria) {
    Criterion c{name};
    const auto t = Clock::now();
    try {
      run(c);
    } catch (const std::exception& e) {
      c.check(false, std::string("exception: ") + e.what());
    }
    std::printf("%s criterion %s (%.0f ms)\n", c.ok ? "PASS" : "FAIL", name.c_str(), ms_since(t));
    for (const auto& n : c.notes) std::printf("%s\n", n.c_str());
    std::fflush(stdout);
    all = all && c.ok;
  }
  return all ? 0 : 1;
}
