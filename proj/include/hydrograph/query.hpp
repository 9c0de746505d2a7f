#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "hydrograph/graph.hpp"

namespace hydrograph {

// Simple path: nodes[i] -> nodes[i + 1] joined by edges[i].
struct Path {
  std::vector<NodeId> nodes;
  std::vector<EdgeId> edges;
  friend bool operator==(const Path&, const Path&) = default;
};

inline constexpr std::size_t kDefaultPathLimit = 10000;

// Resolves a reference typed by a user: the domain id of a `label` node,
// falling back to a numeric node id. Throws Error(UnknownNode).
NodeId resolve_node(const Graph& graph, std::string_view ref, NodeLabel label);

// Paths from every source (node without incoming `type` edges) reaching
// `node`, oriented source -> node. A node with no incoming edges yields the
// single one-node path.
std::vector<Path> upstream_paths(const Graph& graph, NodeId node, EdgeType type,
                                 std::size_t limit = kDefaultPathLimit);

// Paths from `node` to every sink reachable along `type` edges.
std::vector<Path> downstream_paths(const Graph& graph, NodeId node, EdgeType type,
                                   std::size_t limit = kDefaultPathLimit);

// Simple source-to-sink paths through `node`.
std::vector<Path> full_paths(const Graph& graph, NodeId node, EdgeType type,
                             std::size_t limit = kDefaultPathLimit);

// Every path query throws Error(PathLimitExceeded) past `limit` results and
// Error(UnknownNode) for a missing node.

// Water sources of a water node over CONNECTED. Throws Error(NotAWaterNode).
std::vector<Path> q1_sources(const Graph& graph, NodeId node, std::size_t limit = kDefaultPathLimit);

// Complete CONNECTED source-to-sink paths through a water node.
std::vector<Path> q2_full_paths(const Graph& graph, NodeId node,
                                std::size_t limit = kDefaultPathLimit);

struct StationHit {
  NodeId station;
  Path path;  // first full path that passes the station's stretch
};

// Stations monitoring any stretch on any full FLOWS_TO path through
// `stretch`, each listed once in order of first appearance.
// Throws Error(NotAStretch).
std::vector<StationHit> q3_downstream_stations(const Graph& graph, NodeId stretch,
                                               std::size_t limit = kDefaultPathLimit);

// Stations WITHIN any watershed the land use is WITHIN, ordered by id.
// Throws Error(NotLandUse) or Error(NoWatershed).
std::vector<NodeId> q4_stations_same_watershed(const Graph& graph, NodeId landuse);

// Checks the Path invariant against the graph: edges of `type` join
// consecutive nodes and no node repeats.
bool is_valid_path(const Graph& graph, const Path& path, EdgeType type);

}  // namespace hydrograph
