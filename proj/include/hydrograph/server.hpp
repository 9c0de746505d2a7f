#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "hydrograph/cache.hpp"
#include "hydrograph/graph.hpp"
#include "hydrograph/jobs.hpp"

namespace hydrograph {

struct ServerConfig {
  std::string username;
  std::string password;
  std::string secret;
  std::string db_path;  // snapshot rewritten after every write when set
  std::chrono::seconds token_ttl = std::chrono::hours(12);
};

// HTTP API under /api. Every route except POST /api/auth/token needs a
// bearer token.
class Server {
 public:
  explicit Server(ServerConfig config, Graph graph = {});
  ~Server();

  // Port 0 picks a free port. Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  // Serves until stop(); call after bind().
  bool run();
  void stop();
  void wait_until_ready() const;

  SharedGraph& graph();
  JobQueue& jobs();
  ResponseCache& cache();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hydrograph
