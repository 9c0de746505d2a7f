#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hydrograph/props.hpp"
#include "hydrograph/raster.hpp"

namespace hydrograph {

struct NodeId {
  std::uint64_t value = 0;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

struct EdgeId {
  std::uint64_t value = 0;
  friend auto operator<=>(const EdgeId&, const EdgeId&) = default;
};

struct Node {
  NodeId id;
  NodeLabel label{};
  PropertyMap props;
};

struct Edge {
  EdgeId id;
  EdgeType type{};
  NodeId source;
  NodeId target;
  PropertyMap props;
};

enum class Direction { Out, In };

struct Adjacent {
  EdgeId edge;
  NodeId node;
  friend bool operator==(const Adjacent&, const Adjacent&) = default;
};

// Labeled property graph constrained by the fixed metagraph in props.hpp.
//
// Node and edge ids are allocated monotonically and never reused, so id order
// is insertion order and doubles as the tiebreak for every listing. Nodes whose
// "id" property is text are indexed by (label, domain id), which must be unique.
//
// Not synchronized; see SharedGraph.
class Graph {
 public:
  NodeId create_node(NodeLabel label, PropertyMap props = {});
  EdgeId create_edge(EdgeType type, NodeId source, NodeId target, PropertyMap props = {});

  // Returns the number of incident edges removed along with the node.
  std::size_t delete_node(NodeId id);
  void delete_edge(EdgeId id);

  // Replaces one property. Domain ids cannot be changed this way.
  void set_property(NodeId id, const std::string& name, PropValue value);

  const Node& node(NodeId id) const;
  const Edge& edge(EdgeId id) const;
  const Node* find_node(NodeId id) const noexcept;
  const Edge* find_edge(EdgeId id) const noexcept;
  bool contains(NodeId id) const noexcept { return find_node(id) != nullptr; }

  std::vector<Adjacent> neighbors(NodeId id, EdgeType type, Direction dir) const;

  // Calls fn(EdgeId, NodeId) for adjacent edges of one type without allocating.
  template <class Fn>
  void for_each_neighbor(NodeId id, EdgeType type, Direction dir, Fn&& fn) const {
    const auto& s = slot(id);
    for (EdgeId e : dir == Direction::Out ? s.out : s.in) {
      const Edge& ed = *edges_[e.value - 1];
      if (ed.type != type) continue;
      fn(e, dir == Direction::Out ? ed.target : ed.source);
    }
  }

  std::vector<NodeId> find_nodes(NodeLabel label, const PropertyMap& predicate = {}) const;
  std::optional<NodeId> find_by_domain_id(NodeLabel label, std::string_view domain_id) const;
  bool has_edge(EdgeType type, NodeId source, NodeId target) const;

  std::vector<NodeId> node_ids() const;
  std::vector<EdgeId> edge_ids() const;
  std::vector<EdgeId> edges_of_type(EdgeType type) const;

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return edge_count_; }
  std::size_t count(NodeLabel label) const noexcept {
    return by_label_[static_cast<std::size_t>(label)].size();
  }
  std::size_t count(EdgeType type) const noexcept {
    return edges_by_type_[static_cast<std::size_t>(type)];
  }

  // Raster payload of a DEM node.
  void attach_raster(NodeId dem, DemGrid grid);
  const DemGrid* raster(NodeId dem) const noexcept;
  std::vector<NodeId> raster_nodes() const;

  // Next ids to be allocated; persisted so ids stay unique across reloads.
  std::uint64_t next_node_id() const noexcept { return next_node_; }
  std::uint64_t next_edge_id() const noexcept { return next_edge_; }

  // Restore path used by the snapshot loader: inserts with explicit ids and
  // full validation.
  void restore_node(Node node);
  void restore_edge(Edge edge);
  void reserve_ids(std::uint64_t next_node, std::uint64_t next_edge);

 private:
  struct Slot {
    Node node;
    std::vector<EdgeId> out;
    std::vector<EdgeId> in;
  };

  struct EdgeKey {
    EdgeType type;
    std::uint64_t source;
    std::uint64_t target;
    friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
  };
  struct EdgeKeyHash {
    std::size_t operator()(const EdgeKey& k) const noexcept {
      std::size_t h = std::hash<std::uint64_t>{}(k.source * 1000003u ^ k.target);
      return h ^ (static_cast<std::size_t>(k.type) << 1);
    }
  };

  const Slot& slot(NodeId id) const;
  Slot& slot(NodeId id);
  void insert_node(Node node);
  void insert_edge(Edge edge);
  void check_edge(EdgeType type, NodeId source, NodeId target) const;
  void unlink_edge(const Edge& e);

  std::vector<std::optional<Slot>> nodes_;
  std::vector<std::optional<Edge>> edges_;
  std::array<std::set<NodeId>, kNodeLabelCount> by_label_;
  std::array<std::unordered_map<std::string, NodeId>, kNodeLabelCount> by_domain_id_;
  std::array<std::size_t, kEdgeTypeCount> edges_by_type_{};
  std::unordered_set<EdgeKey, EdgeKeyHash> edge_keys_;
  std::unordered_map<std::uint64_t, DemGrid> rasters_;
  std::uint64_t next_node_ = 1;
  std::uint64_t next_edge_ = 1;
  std::size_t node_count_ = 0;
  std::size_t edge_count_ = 0;
};

// Domain id ("id" text property) of a node, or empty.
std::string domain_id(const Node& node);

// Readers/writer wrapper: any number of concurrent readers or one writer.
class SharedGraph {
 public:
  SharedGraph() = default;
  explicit SharedGraph(Graph g) : graph_(std::move(g)) {}

  template <class Fn>
  decltype(auto) read(Fn&& fn) const {
    std::shared_lock lock(mutex_);
    return std::forward<Fn>(fn)(static_cast<const Graph&>(graph_));
  }

  template <class Fn>
  decltype(auto) write(Fn&& fn) {
    std::unique_lock lock(mutex_);
    return std::forward<Fn>(fn)(graph_);
  }

 private:
  mutable std::shared_mutex mutex_;
  Graph graph_;
};

// Snapshot persistence: line-delimited JSON records (header, nodes, edges,
// then DEM rasters). Throws Error(Io) or Error(CorruptSnapshot).
void snapshot_save(const Graph& graph, const std::string& path);
Graph snapshot_load(const std::string& path);
std::string snapshot_serialize(const Graph& graph);
Graph snapshot_parse(std::string_view text);

}  // namespace hydrograph

template <>
struct std::hash<hydrograph::NodeId> {
  std::size_t operator()(hydrograph::NodeId id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};
