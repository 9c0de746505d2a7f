#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include <json.hpp>

#include "hydrograph/graph.hpp"
#include "hydrograph/timeutil.hpp"

namespace hydrograph {

enum class JobState { Queued, Running, Done, Failed };
std::string_view to_string(JobState s) noexcept;

struct Job {
  std::uint64_t id = 0;
  std::string kind;  // drainage | watershed
  JobState state = JobState::Queued;
  nlohmann::json params;
  nlohmann::json result;  // set once done
  std::string error;      // set once failed
  Timestamp submitted;
  std::optional<Timestamp> finished;
};

nlohmann::json job_to_json(const Job& job);

// FIFO queue drained by one worker thread.
//
// drainage params: dem (DEM domain or node id), threshold >= 1, optional
// tolerance for station snapping. Grid work runs without any graph lock; the
// results are applied under the writer lock, after which `on_write` runs.
// watershed params: dem, row, col. Only reads the graph.
class JobQueue {
 public:
  JobQueue(SharedGraph& graph, std::function<void()> on_write = {});
  ~JobQueue();
  JobQueue(const JobQueue&) = delete;
  JobQueue& operator=(const JobQueue&) = delete;

  // Throws Error(InvalidArgument) for unknown kinds or bad params.
  Job submit(std::string kind, nlohmann::json params);
  // Throws Error(UnknownJob).
  Job poll(std::uint64_t id) const;
  // Blocks until the queue is empty and nothing is running.
  void wait_idle() const;

 private:
  void run();
  nlohmann::json execute(const Job& job);

  SharedGraph& graph_;
  std::function<void()> on_write_;
  mutable std::mutex mutex_;
  mutable std::condition_variable cv_;
  std::map<std::uint64_t, Job> jobs_;
  std::deque<std::uint64_t> queue_;
  std::uint64_t next_id_ = 1;
  bool busy_ = false;
  bool stopping_ = false;
  std::thread worker_;
};

}  // namespace hydrograph
