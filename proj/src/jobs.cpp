#include "hydrograph/jobs.hpp"

#include "hydrograph/drainage.hpp"
#include "hydrograph/error.hpp"
#include "hydrograph/json_codec.hpp"
#include "hydrograph/query.hpp"

namespace hydrograph {

namespace {

std::string dem_ref(const nlohmann::json& params) {
  const auto it = params.find("dem");
  if (it == params.end()) throw Error(ErrorCode::InvalidArgument, "missing param 'dem'");
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_unsigned()) return std::to_string(it->get<std::uint64_t>());
  throw Error(ErrorCode::InvalidArgument, "param 'dem' must be a string or node id");
}

std::int64_t int_param(const nlohmann::json& params, const char* name) {
  const auto it = params.find(name);
  if (it == params.end() || !it->is_number_integer()) {
    throw Error(ErrorCode::InvalidArgument, std::string("param '") + name + "' must be an integer");
  }
  return it->get<std::int64_t>();
}

double tolerance_param(const nlohmann::json& params) {
  const auto it = params.find("tolerance");
  if (it == params.end()) return geo::kDefaultSnapTolerance;
  if (!it->is_number() || it->get<double>() < 0) {
    throw Error(ErrorCode::InvalidArgument, "param 'tolerance' must be a non-negative number");
  }
  return it->get<double>();
}

// Copies the DEM raster out so grid work can run without holding the lock.
std::pair<NodeId, DemGrid> load_dem(const SharedGraph& graph, const std::string& ref) {
  return graph.read([&](const Graph& g) {
    const NodeId id = resolve_node(g, ref, NodeLabel::DEM);
    const DemGrid* grid = g.raster(id);
    if (!grid) throw Error(ErrorCode::InvalidArgument, "node '" + ref + "' is not a DEM");
    return std::pair{id, *grid};
  });
}

}  // namespace

std::string_view to_string(JobState s) noexcept {
  switch (s) {
    case JobState::Queued: return "queued";
    case JobState::Running: return "running";
    case JobState::Done: return "done";
    case JobState::Failed: return "failed";
  }
  return "?";
}

nlohmann::json job_to_json(const Job& job) {
  nlohmann::json j = {{"id", job.id},
                      {"kind", job.kind},
                      {"state", to_string(job.state)},
                      {"params", job.params},
                      {"submitted", format_timestamp(job.submitted)}};
  j["result"] = job.state == JobState::Done ? job.result : nlohmann::json(nullptr);
  if (job.state == JobState::Failed) j["error"] = job.error;
  j["finished"] = job.finished ? nlohmann::json(format_timestamp(*job.finished)) : nullptr;
  return j;
}

JobQueue::JobQueue(SharedGraph& graph, std::function<void()> on_write)
    : graph_(graph), on_write_(std::move(on_write)), worker_([this] { run(); }) {}

JobQueue::~JobQueue() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  cv_.notify_all();
  worker_.join();
}

Job JobQueue::submit(std::string kind, nlohmann::json params) {
  if (!params.is_object()) throw Error(ErrorCode::InvalidArgument, "params must be an object");
  if (kind == "drainage") {
    if (int_param(params, "threshold") < 1) {
      throw Error(ErrorCode::InvalidArgument, "threshold must be at least 1");
    }
    tolerance_param(params);
  } else if (kind == "watershed") {
    if (int_param(params, "row") < 0 || int_param(params, "col") < 0) {
      throw Error(ErrorCode::InvalidArgument, "row and col must be non-negative");
    }
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown job kind '" + kind + "'");
  }
  load_dem(graph_, dem_ref(params));

  std::lock_guard lock(mutex_);
  Job job;
  job.id = next_id_++;
  job.kind = std::move(kind);
  job.params = std::move(params);
  job.submitted = now_utc();
  jobs_.emplace(job.id, job);
  queue_.push_back(job.id);
  cv_.notify_all();
  return job;
}

Job JobQueue::poll(std::uint64_t id) const {
  std::lock_guard lock(mutex_);
  const auto it = jobs_.find(id);
  if (it == jobs_.end()) throw Error(ErrorCode::UnknownJob, "no job " + std::to_string(id));
  return it->second;
}

void JobQueue::wait_idle() const {
  std::unique_lock lock(mutex_);
  cv_.wait(lock, [&] { return queue_.empty() && !busy_; });
}

void JobQueue::run() {
  std::unique_lock lock(mutex_);
  for (;;) {
    cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
    if (stopping_) return;
    const std::uint64_t id = queue_.front();
    queue_.pop_front();
    busy_ = true;
    Job& job = jobs_.at(id);
    job.state = JobState::Running;
    const Job snapshot = job;
    lock.unlock();

    nlohmann::json result;
    std::string error;
    try {
      result = execute(snapshot);
    } catch (const std::exception& e) {
      error = e.what();
    }

    lock.lock();
    Job& done = jobs_.at(id);
    done.finished = now_utc();
    if (error.empty()) {
      done.state = JobState::Done;
      done.result = std::move(result);
    } else {
      done.state = JobState::Failed;
      done.error = std::move(error);
    }
    busy_ = false;
    cv_.notify_all();
  }
}

nlohmann::json JobQueue::execute(const Job& job) {
  auto [dem_node, grid] = load_dem(graph_, dem_ref(job.params));
  if (job.kind == "watershed") {
    const CellIndex pour{static_cast<std::size_t>(int_param(job.params, "row")),
                         static_cast<std::size_t>(int_param(job.params, "col"))};
    const DemGrid filled = fill_depressions(grid);
    const WatershedCells ws = delineate_watershed(filled, flow_direction_d8(filled), pour);
    return {{"cells", ws.cells.size()},
            {"area", static_cast<double>(ws.cells.size()) * grid.cellsize * grid.cellsize},
            {"boundary", shape_to_geojson(geo::Shape{ws.boundary})}};
  }

  const auto threshold = static_cast<std::uint64_t>(int_param(job.params, "threshold"));
  const DrainageComputation computed = compute_drainage(grid, threshold);
  const DrainageReport report = graph_.write([&](Graph& g) {
    if (!g.contains(dem_node)) throw Error(ErrorCode::UnknownNode, "DEM was deleted");
    return apply_drainage(g, dem_node, computed, tolerance_param(job.params));
  });
  if (on_write_) on_write_();
  return {{"stretches", report.stretches},
          {"flows_to", report.flows_to},
          {"monitored_by", report.monitored_by},
          {"within", report.within},
          {"warnings", report.warnings}};
}

}  // namespace hydrograph
