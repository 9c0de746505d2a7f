#include "hydrograph/query.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <unordered_set>

#include "hydrograph/error.hpp"

namespace hydrograph {

namespace {

void check_limit(std::size_t count, std::size_t limit) {
  if (count > limit) {
    throw Error(ErrorCode::PathLimitExceeded,
                "more than " + std::to_string(limit) + " paths; narrow the query");
  }
}

// Depth-first enumeration of simple paths from `start` until nodes without
// further edges in `dir`. Paths come back in traversal order, start first.
std::vector<Path> walk(const Graph& graph, NodeId start, EdgeType type, Direction dir,
                       std::size_t limit) {
  struct Frame {
    NodeId node;
    EdgeId via;
    std::vector<Adjacent> next;
    std::size_t pos = 0;
  };
  std::vector<Path> out;
  std::unordered_set<NodeId> on_path{start};
  std::vector<Frame> stack;
  stack.push_back({start, EdgeId{}, graph.neighbors(start, type, dir)});

  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.pos == 0 && f.next.empty()) {
      Path p;
      for (const auto& fr : stack) {
        p.nodes.push_back(fr.node);
        if (fr.via.value) p.edges.push_back(fr.via);
      }
      out.push_back(std::move(p));
      check_limit(out.size(), limit);
    }
    if (f.pos < f.next.size()) {
      const Adjacent adj = f.next[f.pos++];
      if (on_path.count(adj.node)) continue;
      on_path.insert(adj.node);
      stack.push_back({adj.node, adj.edge, graph.neighbors(adj.node, type, dir)});
      continue;
    }
    on_path.erase(f.node);
    stack.pop_back();
  }
  return out;
}

void require_label(const Graph& graph, NodeId id, NodeLabel label, ErrorCode code,
                   const char* what) {
  if (graph.node(id).label != label) {
    throw Error(code, "node " + std::to_string(id.value) + " is not a " + what);
  }
}

}  // namespace

NodeId resolve_node(const Graph& graph, std::string_view ref, NodeLabel label) {
  if (auto id = graph.find_by_domain_id(label, ref)) return *id;
  std::uint64_t value = 0;
  const auto [end, ec] = std::from_chars(ref.data(), ref.data() + ref.size(), value);
  if (ec == std::errc{} && end == ref.data() + ref.size() && graph.contains(NodeId{value})) {
    return NodeId{value};
  }
  throw Error(ErrorCode::UnknownNode, "no node '" + std::string(ref) + "'");
}

std::vector<Path> upstream_paths(const Graph& graph, NodeId node, EdgeType type,
                                 std::size_t limit) {
  auto paths = walk(graph, node, type, Direction::In, limit);
  for (auto& p : paths) {
    std::reverse(p.nodes.begin(), p.nodes.end());
    std::reverse(p.edges.begin(), p.edges.end());
  }
  return paths;
}

std::vector<Path> downstream_paths(const Graph& graph, NodeId node, EdgeType type,
                                   std::size_t limit) {
  return walk(graph, node, type, Direction::Out, limit);
}

std::vector<Path> full_paths(const Graph& graph, NodeId node, EdgeType type, std::size_t limit) {
  const auto ups = upstream_paths(graph, node, type, limit);
  const auto downs = downstream_paths(graph, node, type, limit);
  std::vector<Path> out;
  for (const auto& up : ups) {
    const std::set<NodeId> upstream_nodes(up.nodes.begin(), up.nodes.end() - 1);
    for (const auto& down : downs) {
      const bool simple = std::none_of(down.nodes.begin() + 1, down.nodes.end(),
                                       [&](NodeId n) { return upstream_nodes.count(n) > 0; });
      if (!simple) continue;
      Path p = up;
      p.nodes.insert(p.nodes.end(), down.nodes.begin() + 1, down.nodes.end());
      p.edges.insert(p.edges.end(), down.edges.begin(), down.edges.end());
      out.push_back(std::move(p));
      check_limit(out.size(), limit);
    }
  }
  return out;
}

std::vector<Path> q1_sources(const Graph& graph, NodeId node, std::size_t limit) {
  require_label(graph, node, NodeLabel::WaterNode, ErrorCode::NotAWaterNode, "water node");
  return upstream_paths(graph, node, EdgeType::CONNECTED, limit);
}

std::vector<Path> q2_full_paths(const Graph& graph, NodeId node, std::size_t limit) {
  require_label(graph, node, NodeLabel::WaterNode, ErrorCode::NotAWaterNode, "water node");
  return full_paths(graph, node, EdgeType::CONNECTED, limit);
}

std::vector<StationHit> q3_downstream_stations(const Graph& graph, NodeId stretch,
                                               std::size_t limit) {
  require_label(graph, stretch, NodeLabel::WaterStretch, ErrorCode::NotAStretch, "water stretch");
  std::vector<StationHit> out;
  std::unordered_set<NodeId> seen;
  for (const Path& p : full_paths(graph, stretch, EdgeType::FLOWS_TO, limit)) {
    for (NodeId s : p.nodes) {
      graph.for_each_neighbor(s, EdgeType::MONITORED_BY, Direction::Out, [&](EdgeId, NodeId st) {
        if (seen.insert(st).second) out.push_back({st, p});
      });
    }
  }
  return out;
}

std::vector<NodeId> q4_stations_same_watershed(const Graph& graph, NodeId landuse) {
  require_label(graph, landuse, NodeLabel::LandUse, ErrorCode::NotLandUse, "land use area");
  const auto watersheds = graph.neighbors(landuse, EdgeType::WITHIN, Direction::Out);
  if (watersheds.empty()) {
    throw Error(ErrorCode::NoWatershed,
                "land use " + std::to_string(landuse.value) + " is not within any watershed");
  }
  std::set<NodeId> stations;
  for (const auto& w : watersheds) {
    graph.for_each_neighbor(w.node, EdgeType::WITHIN, Direction::In, [&](EdgeId, NodeId n) {
      if (graph.node(n).label == NodeLabel::QualityStation) stations.insert(n);
    });
  }
  return {stations.begin(), stations.end()};
}

bool is_valid_path(const Graph& graph, const Path& path, EdgeType type) {
  if (path.nodes.empty() || path.edges.size() + 1 != path.nodes.size()) return false;
  const std::set<NodeId> unique(path.nodes.begin(), path.nodes.end());
  if (unique.size() != path.nodes.size()) return false;
  for (std::size_t i = 0; i < path.edges.size(); ++i) {
    const Edge* e = graph.find_edge(path.edges[i]);
    if (!e || e->type != type || e->source != path.nodes[i] || e->target != path.nodes[i + 1]) {
      return false;
    }
  }
  return true;
}

}  // namespace hydrograph
