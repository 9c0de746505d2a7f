#include <CLI11.hpp>
#include <json.hpp>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "hydrograph/api.hpp"
#include "hydrograph/drainage.hpp"
#include "hydrograph/error.hpp"
#include "hydrograph/fixtures.hpp"
#include "hydrograph/ingest.hpp"
#include "hydrograph/quality.hpp"
#include "hydrograph/query.hpp"
#include "hydrograph/server.hpp"

namespace fs = std::filesystem;
using namespace hydrograph;
using nlohmann::json;

namespace {

constexpr int kUsage = 1;
constexpr int kDataError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string env_or_usage(const std::string& name) {
  const char* v = std::getenv(name.c_str());
  if (!v || !*v) throw UsageError("environment variable " + name + " is not set");
  return v;
}

// A missing database file starts an empty graph when `create` is set.
Graph open_db(const std::string& path, bool create) {
  if (create && !fs::exists(path)) return Graph{};
  return snapshot_load(path);
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Water network graph engine"};
  app.require_subcommand(1);

  std::string db;
  auto add_db = [&](CLI::App* cmd) { cmd->add_option("--db", db, "Snapshot file")->required(); };

  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  int port = 8080;
  std::string host = "127.0.0.1";
  std::string secret_var = "HYDROGRAPH_SECRET";
  serve->add_option("--port", port, "TCP port")->capture_default_str();
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--secret", secret_var, "Environment variable holding the token secret")
      ->capture_default_str();
  serve->add_option("--db", db, "Snapshot file, created on first write");

  auto* ingest = app.add_subcommand("ingest", "Load a file into the graph");
  std::string file;
  std::string kind, layer, system = "main";
  ingest->add_option("FILE", file, "Input file")->required();
  ingest->add_option("--kind", kind, "File kind (detected when omitted)");
  ingest->add_option("--layer", layer, "GeoJSON layer: watershed, landuse or geometry");
  ingest->add_option("--system", system, "Water system id")->capture_default_str();
  add_db(ingest);

  auto* query = app.add_subcommand("query", "Run q1..q4");
  std::string which, node, stretch, landuse;
  query->add_option("QUERY", which, "q1, q2, q3 or q4")
      ->required()
      ->check(CLI::IsMember({"q1", "q2", "q3", "q4"}));
  query->add_option("--node", node, "Water node (q1, q2)");
  query->add_option("--stretch", stretch, "Water stretch (q3)");
  query->add_option("--landuse", landuse, "Land use area (q4)");
  add_db(query);

  auto* drainage = app.add_subcommand("drainage", "Extract the stream network of a DEM");
  std::string dem;
  std::uint64_t threshold = 0;
  double tolerance = geo::kDefaultSnapTolerance;
  drainage->add_option("--dem", dem, "DEM domain id or node id")->required();
  drainage->add_option("--threshold", threshold, "Accumulation threshold in cells")->required();
  drainage->add_option("--tolerance", tolerance, "Station snap tolerance, degrees")->capture_default_str();
  add_db(drainage);

  auto* exporter = app.add_subcommand("export", "Write quality data as CSV");
  std::vector<std::string> stations, params;
  std::string from, to, out;
  exporter->add_option("--stations", stations, "Station ids")->delimiter(',');
  exporter->add_option("--params", params, "Parameter names")->delimiter(',');
  exporter->add_option("--from", from, "Start time (inclusive)");
  exporter->add_option("--to", to, "End time (inclusive)");
  exporter->add_option("--out", out, "Output file (stdout when omitted)");
  add_db(exporter);

  auto* fixture = app.add_subcommand("fixture", "Write the synthetic EFMA file set");
  std::string fixture_dir;
  fixture->add_option("--out", fixture_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*serve) {
      ServerConfig cfg;
      cfg.username = env_or_usage("HYDROGRAPH_USER");
      cfg.password = env_or_usage("HYDROGRAPH_PASS");
      cfg.secret = env_or_usage(secret_var);
      cfg.db_path = db;

      // Blocked before any thread starts so only the waiter receives them.
      sigset_t signals;
      sigemptyset(&signals);
      sigaddset(&signals, SIGINT);
      sigaddset(&signals, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &signals, nullptr);
      Server server(cfg, db.empty() ? Graph{} : open_db(db, true));

      const int bound = server.bind(host, port);
      if (bound < 0) throw Error(ErrorCode::Io, "cannot bind " + host + ":" + std::to_string(port));
      std::thread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        server.stop();
      });
      std::cerr << "listening on " << host << ":" << bound << '\n';
      server.run();
      // run() can also return on its own; wake the waiter so it can exit.
      pthread_kill(waiter.native_handle(), SIGTERM);
      waiter.join();
      return 0;
    }

    if (*ingest) {
      IngestOptions opts;
      if (!kind.empty()) {
        opts.kind = parse_file_kind(kind);
        if (!opts.kind) throw UsageError("unknown kind '" + kind + "'");
      }
      if (!layer.empty()) {
        opts.layer = parse_layer_kind(layer);
        if (!opts.layer) throw UsageError("unknown layer '" + layer + "'");
      }
      opts.system = system;
      Graph g = open_db(db, true);
      const IngestReport report = ingest_file(g, read_file(file), opts);
      snapshot_save(g, db);
      print(api::report_to_json(report));
      return 0;
    }

    if (*query) {
      const Graph g = open_db(db, false);
      auto need = [](const std::string& v, const char* flag) {
        if (v.empty()) throw UsageError(std::string(flag) + " is required for this query");
        return v;
      };
      if (which == "q1" || which == "q2") {
        const NodeId n = resolve_node(g, need(node, "--node"), NodeLabel::WaterNode);
        print({{"paths", api::paths_to_json(which == "q1" ? q1_sources(g, n) : q2_full_paths(g, n))}});
      } else if (which == "q3") {
        const NodeId s = resolve_node(g, need(stretch, "--stretch"), NodeLabel::WaterStretch);
        print(api::q3_to_json(q3_downstream_stations(g, s)));
      } else {
        const NodeId l = resolve_node(g, need(landuse, "--landuse"), NodeLabel::LandUse);
        print({{"stations", api::node_ids_to_json(q4_stations_same_watershed(g, l))}});
      }
      return 0;
    }

    if (*drainage) {
      if (threshold < 1) throw UsageError("--threshold must be at least 1");
      Graph g = open_db(db, false);
      const NodeId d = resolve_node(g, dem, NodeLabel::DEM);
      const DemGrid* grid = g.node(d).label == NodeLabel::DEM ? g.raster(d) : nullptr;
      if (!grid) throw Error(ErrorCode::InvalidArgument, "node " + dem + " is not a DEM");
      const DrainageReport r = apply_drainage(g, d, compute_drainage(*grid, threshold), tolerance);
      snapshot_save(g, db);
      print({{"stretches", r.stretches},
             {"flows_to", r.flows_to},
             {"monitored_by", r.monitored_by},
             {"within", r.within},
             {"warnings", r.warnings}});
      return 0;
    }

    if (*exporter) {
      const Graph g = open_db(db, false);
      QualityFilter f;
      f.stations = stations;
      f.params = params;
      if (!from.empty()) f.from = parse_timestamp(from);
      if (!to.empty()) f.to = parse_timestamp(to);
      const std::string csv = export_quality_csv(filter_quality(g, f));
      if (out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream o(out, std::ios::binary);
        if (!(o << csv)) throw Error(ErrorCode::Io, "cannot write '" + out + "'");
      }
      return 0;
    }

    if (*fixture) {
      fs::create_directories(fixture_dir);
      fixtures::write_efma(fixtures::efma_files(), fixture_dir);
      std::cerr << "wrote EFMA fixture to " << fixture_dir << '\n';
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsage;
}
