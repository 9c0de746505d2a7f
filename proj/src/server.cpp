#include "hydrograph/server.hpp"

#include <httplib.h>

#include <charconv>

#include "hydrograph/api.hpp"
#include "hydrograph/auth.hpp"
#include "hydrograph/error.hpp"

namespace hydrograph {

namespace {

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidCredentials:
    case ErrorCode::InvalidToken: return 401;
    case ErrorCode::UnknownNode:
    case ErrorCode::UnknownEdge:
    case ErrorCode::UnknownJob: return 404;
    case ErrorCode::UnrecognizedFile: return 415;
    case ErrorCode::Io:
    case ErrorCode::CorruptSnapshot: return 500;
    default: return 422;
  }
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, std::string_view message) {
  send_json(res, {{"error", code}, {"message", message}}, status);
}

std::string required_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name) || req.get_param_value(name).empty()) {
    throw Error(ErrorCode::InvalidArgument, std::string("missing query parameter '") + name + "'");
  }
  return req.get_param_value(name);
}

// Repeated parameters and comma-separated values both form lists.
std::vector<std::string> list_param(const httplib::Request& req, const char* name) {
  std::vector<std::string> out;
  const auto [lo, hi] = req.params.equal_range(name);
  for (auto it = lo; it != hi; ++it) {
    for (auto& item : api::split_list(it->second)) out.push_back(std::move(item));
  }
  return out;
}

std::optional<Timestamp> time_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name) || req.get_param_value(name).empty()) return std::nullopt;
  return parse_timestamp(req.get_param_value(name));
}

std::optional<double> number_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name) || req.get_param_value(name).empty()) return std::nullopt;
  const std::string text = req.get_param_value(name);
  double v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidArgument, std::string("parameter '") + name + "' is not a number");
  }
  return v;
}

std::uint64_t id_segment(const std::string& text) {
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw Error(ErrorCode::UnknownNode, "'" + text + "' is not an id");
  }
  return v;
}

}  // namespace

struct Server::Impl {
  using Produce = std::function<std::pair<std::string, std::string>(const httplib::Request&)>;

  explicit Impl(ServerConfig cfg, Graph g)
      : config(std::move(cfg)),
        graph(std::move(g)),
        auth(config.username, config.password, config.secret, config.token_ttl),
        jobs(graph, [this] { after_write(); }) {
    routes();
  }

  // Drops cached responses and persists the graph.
  void after_write() {
    cache.clear();
    if (!config.db_path.empty()) {
      graph.read([&](const Graph& g) { snapshot_save(g, config.db_path); });
    }
  }

  template <class Fn>
  httplib::Server::Handler guarded(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const Error& e) {
        send_error(res, status_for(e.code()), to_string(e.code()), e.what());
      } catch (const json::exception& e) {
        send_error(res, 422, "InvalidArgument", e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, "Internal", e.what());
      }
    };
  }

  httplib::Server::Handler cached(Produce produce) {
    return guarded([this, produce](const httplib::Request& req, httplib::Response& res) {
      const std::string key = ResponseCache::key(req.method, req.path, req.params);
      if (auto hit = cache.get(key)) {
        res.set_header("x-cache", "hit");
        res.set_content(hit->body, hit->content_type);
        return;
      }
      const std::uint64_t generation = cache.generation();
      auto [body, type] = produce(req);
      cache.put(key, {body, type, now_utc()}, generation);
      res.set_header("x-cache", "miss");
      res.set_content(std::move(body), type);
    });
  }

  static std::pair<std::string, std::string> as_json(const json& j) {
    return {j.dump(), "application/json"};
  }

  void layer(const char* path, NodeLabel label) {
    http.Get(std::string("/api/") + path, cached([this, label](const httplib::Request&) {
               return as_json(graph.read([&](const Graph& g) { return api::layer_geojson(g, label); }));
             }));
  }

  void routes() {
    http.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", "*");
      if (req.method == "OPTIONS") {
        res.set_header("Access-Control-Allow-Headers", "Authorization, Content-Type");
        res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
        res.status = 204;
        return httplib::Server::HandlerResponse::Handled;
      }
      if (req.path == "/api/auth/token") return httplib::Server::HandlerResponse::Unhandled;
      const std::string header = req.get_header_value("Authorization");
      constexpr std::string_view kBearer = "Bearer ";
      try {
        if (header.compare(0, kBearer.size(), kBearer) != 0) {
          throw Error(ErrorCode::InvalidToken, "missing bearer token");
        }
        auth.verify(std::string_view(header).substr(kBearer.size()));
      } catch (const Error& e) {
        send_error(res, 401, to_string(e.code()), e.what());
        return httplib::Server::HandlerResponse::Handled;
      }
      return httplib::Server::HandlerResponse::Unhandled;
    });

    http.Post("/api/auth/token", guarded([this](const httplib::Request& req, httplib::Response& res) {
                const json body = json::parse(req.body);
                const AuthToken t = auth.authenticate(body.at("username").get<std::string>(),
                                                      body.at("password").get<std::string>());
                send_json(res, {{"token", t.token}, {"expires", format_timestamp(t.expires)}});
              }));

    http.Post("/api/upload", guarded([this](const httplib::Request& req, httplib::Response& res) {
                IngestOptions opts;
                if (req.has_param("kind")) {
                  opts.kind = parse_file_kind(req.get_param_value("kind"));
                  if (!opts.kind) throw Error(ErrorCode::InvalidArgument, "unknown kind");
                }
                if (req.has_param("layer")) {
                  opts.layer = parse_layer_kind(req.get_param_value("layer"));
                  if (!opts.layer) throw Error(ErrorCode::InvalidArgument, "unknown layer");
                }
                if (req.has_param("system")) opts.system = req.get_param_value("system");
                std::string bytes;
                if (req.has_file("file")) {
                  bytes = req.get_file_value("file").content;
                } else if (!req.files.empty()) {
                  bytes = req.files.begin()->second.content;
                } else {
                  bytes = req.body;
                }
                IngestReport report;
                try {
                  report = graph.write([&](Graph& g) { return ingest_file(g, bytes, opts); });
                } catch (...) {
                  cache.clear();
                  throw;
                }
                after_write();
                send_json(res, api::report_to_json(report));
              }));

    layer("systems", NodeLabel::WaterSystem);
    layer("waternodes", NodeLabel::WaterNode);
    layer("stations", NodeLabel::QualityStation);
    layer("watersheds", NodeLabel::Watershed);
    layer("landuse", NodeLabel::LandUse);
    layer("stretches", NodeLabel::WaterStretch);

    http.Get("/api/query/q1", cached([this](const httplib::Request& req) {
               const std::string ref = required_param(req, "node");
               return as_json(graph.read([&](const Graph& g) {
                 return json{{"paths", api::paths_to_json(q1_sources(
                                           g, resolve_node(g, ref, NodeLabel::WaterNode)))}};
               }));
             }));
    http.Get("/api/query/q2", cached([this](const httplib::Request& req) {
               const std::string ref = required_param(req, "node");
               return as_json(graph.read([&](const Graph& g) {
                 return json{{"paths", api::paths_to_json(q2_full_paths(
                                           g, resolve_node(g, ref, NodeLabel::WaterNode)))}};
               }));
             }));
    http.Get("/api/query/q3", cached([this](const httplib::Request& req) {
               const std::string ref = required_param(req, "stretch");
               return as_json(graph.read([&](const Graph& g) {
                 return api::q3_to_json(
                     q3_downstream_stations(g, resolve_node(g, ref, NodeLabel::WaterStretch)));
               }));
             }));
    http.Get("/api/query/q4", cached([this](const httplib::Request& req) {
               const std::string ref = required_param(req, "landuse");
               return as_json(graph.read([&](const Graph& g) {
                 return json{{"stations", api::node_ids_to_json(q4_stations_same_watershed(
                                              g, resolve_node(g, ref, NodeLabel::LandUse)))}};
               }));
             }));

    http.Post("/api/quality/filter", guarded([this](const httplib::Request& req, httplib::Response& res) {
                const QualityFilter f = api::filter_from_json(json::parse(req.body.empty() ? "{}" : req.body));
                send_json(res, graph.read([&](const Graph& g) {
                  return api::series_to_json(filter_quality(g, f));
                }));
              }));
    http.Get("/api/quality/export", cached([this](const httplib::Request& req) {
               QualityFilter f;
               f.stations = list_param(req, "stations");
               f.params = list_param(req, "params");
               f.from = time_param(req, "from");
               f.to = time_param(req, "to");
               const auto lo = number_param(req, "depth_min");
               const auto hi = number_param(req, "depth_max");
               if (lo || hi) {
                 f.depth = std::pair{lo.value_or(-std::numeric_limits<double>::infinity()),
                                     hi.value_or(std::numeric_limits<double>::infinity())};
               }
               std::string csv = graph.read(
                   [&](const Graph& g) { return export_quality_csv(filter_quality(g, f)); });
               return std::pair{std::move(csv), std::string("text/csv")};
             }));

    http.Post("/api/jobs", guarded([this](const httplib::Request& req, httplib::Response& res) {
                const json body = json::parse(req.body);
                const Job job = jobs.submit(body.at("kind").get<std::string>(),
                                            body.value("params", json::object()));
                send_json(res, job_to_json(job));
              }));
    http.Get(R"(/api/jobs/(\d+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
               send_json(res, job_to_json(jobs.poll(id_segment(req.matches[1]))));
             }));

    http.Delete(R"(/api/nodes/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const NodeId id{id_segment(req.matches[1])};
                  const std::size_t removed = graph.write([&](Graph& g) { return g.delete_node(id); });
                  after_write();
                  send_json(res, {{"edges_removed", removed}});
                }));

    http.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) {
        send_error(res, res.status, res.status == 404 ? "NotFound" : "Error", "no such endpoint");
      }
    });
  }

  ServerConfig config;
  SharedGraph graph;
  ResponseCache cache;
  Authenticator auth;
  JobQueue jobs;
  httplib::Server http;
};

Server::Server(ServerConfig config, Graph graph)
    : impl_(std::make_unique<Impl>(std::move(config), std::move(graph))) {}

Server::~Server() { stop(); }

int Server::bind(const std::string& host, int port) {
  if (port == 0) return impl_->http.bind_to_any_port(host);
  return impl_->http.bind_to_port(host, port) ? port : -1;
}

bool Server::run() { return impl_->http.listen_after_bind(); }

void Server::stop() {
  if (impl_->http.is_running()) impl_->http.stop();
}

void Server::wait_until_ready() const { impl_->http.wait_until_ready(); }

SharedGraph& Server::graph() { return impl_->graph; }
JobQueue& Server::jobs() { return impl_->jobs; }
ResponseCache& Server::cache() { return impl_->cache; }

}  // namespace hydrograph
