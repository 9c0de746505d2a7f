#include "hydrograph/graph.hpp"

#include <algorithm>

#include "hydrograph/error.hpp"

namespace hydrograph {

namespace {

std::string describe(NodeId id) { return "node " + std::to_string(id.value); }

std::size_t idx(NodeLabel l) { return static_cast<std::size_t>(l); }
std::size_t idx(EdgeType t) { return static_cast<std::size_t>(t); }

}  // namespace

std::string domain_id(const Node& node) {
  if (const auto* s = get_prop<std::string>(node.props, "id")) return *s;
  return {};
}

const Graph::Slot& Graph::slot(NodeId id) const {
  if (id.value == 0 || id.value > nodes_.size() || !nodes_[id.value - 1]) {
    throw Error(ErrorCode::UnknownNode, "unknown " + describe(id));
  }
  return *nodes_[id.value - 1];
}

Graph::Slot& Graph::slot(NodeId id) {
  return const_cast<Slot&>(static_cast<const Graph&>(*this).slot(id));
}

const Node* Graph::find_node(NodeId id) const noexcept {
  if (id.value == 0 || id.value > nodes_.size() || !nodes_[id.value - 1]) return nullptr;
  return &nodes_[id.value - 1]->node;
}

const Edge* Graph::find_edge(EdgeId id) const noexcept {
  if (id.value == 0 || id.value > edges_.size() || !edges_[id.value - 1]) return nullptr;
  return &*edges_[id.value - 1];
}

const Node& Graph::node(NodeId id) const { return slot(id).node; }

const Edge& Graph::edge(EdgeId id) const {
  const Edge* e = find_edge(id);
  if (!e) throw Error(ErrorCode::UnknownEdge, "unknown edge " + std::to_string(id.value));
  return *e;
}

void Graph::insert_node(Node node) {
  validate_properties(node.props);
  const std::string dom = domain_id(node);
  auto& index = by_domain_id_[idx(node.label)];
  if (!dom.empty() && index.count(dom)) {
    throw Error(ErrorCode::DuplicateDomainId,
                std::string(to_string(node.label)) + " with id '" + dom + "' already exists");
  }
  if (node.id.value > nodes_.size()) nodes_.resize(node.id.value);
  if (!dom.empty()) index.emplace(dom, node.id);
  by_label_[idx(node.label)].insert(node.id);
  const NodeId id = node.id;
  nodes_[id.value - 1] = Slot{std::move(node), {}, {}};
  ++node_count_;
}

NodeId Graph::create_node(NodeLabel label, PropertyMap props) {
  const NodeId id{next_node_};
  insert_node(Node{id, label, std::move(props)});
  ++next_node_;
  return id;
}

void Graph::check_edge(EdgeType type, NodeId source, NodeId target) const {
  const Node& src = node(source);
  const Node& dst = node(target);
  if (source == target) {
    throw Error(ErrorCode::SelfLoop, std::string(to_string(type)) + " self-loop on " +
                                         describe(source));
  }
  if (!schema_allows(type, src.label, dst.label)) {
    throw Error(ErrorCode::SchemaViolation,
                std::string(to_string(type)) + " not allowed from " +
                    std::string(to_string(src.label)) + " to " + std::string(to_string(dst.label)));
  }
  if (edge_keys_.count(EdgeKey{type, source.value, target.value})) {
    throw Error(ErrorCode::DuplicateEdge, std::string(to_string(type)) + " edge " +
                                              describe(source) + " -> " + describe(target) +
                                              " already exists");
  }
}

void Graph::insert_edge(Edge edge) {
  check_edge(edge.type, edge.source, edge.target);
  validate_properties(edge.props);
  if (edge.id.value > edges_.size()) edges_.resize(edge.id.value);
  slot(edge.source).out.push_back(edge.id);
  slot(edge.target).in.push_back(edge.id);
  edge_keys_.insert(EdgeKey{edge.type, edge.source.value, edge.target.value});
  ++edges_by_type_[idx(edge.type)];
  ++edge_count_;
  const EdgeId id = edge.id;
  edges_[id.value - 1] = std::move(edge);
}

EdgeId Graph::create_edge(EdgeType type, NodeId source, NodeId target, PropertyMap props) {
  const EdgeId id{next_edge_};
  insert_edge(Edge{id, type, source, target, std::move(props)});
  ++next_edge_;
  return id;
}

void Graph::unlink_edge(const Edge& e) {
  auto drop = [&](std::vector<EdgeId>& list) {
    list.erase(std::remove(list.begin(), list.end(), e.id), list.end());
  };
  drop(slot(e.source).out);
  drop(slot(e.target).in);
  edge_keys_.erase(EdgeKey{e.type, e.source.value, e.target.value});
  --edges_by_type_[idx(e.type)];
  --edge_count_;
}

void Graph::delete_edge(EdgeId id) {
  const Edge& e = edge(id);
  unlink_edge(e);
  edges_[id.value - 1].reset();
}

std::size_t Graph::delete_node(NodeId id) {
  Slot& s = slot(id);
  std::vector<EdgeId> incident = s.out;
  incident.insert(incident.end(), s.in.begin(), s.in.end());
  for (EdgeId e : incident) delete_edge(e);

  const Node& n = s.node;
  const std::string dom = domain_id(n);
  if (!dom.empty()) by_domain_id_[idx(n.label)].erase(dom);
  by_label_[idx(n.label)].erase(id);
  rasters_.erase(id.value);
  nodes_[id.value - 1].reset();
  --node_count_;
  return incident.size();
}

void Graph::set_property(NodeId id, const std::string& name, PropValue value) {
  if (name == "id") throw Error(ErrorCode::InvalidProperty, "domain id is immutable");
  PropertyMap single{{name, value}};
  validate_properties(single);
  slot(id).node.props.insert_or_assign(name, std::move(value));
}

std::vector<Adjacent> Graph::neighbors(NodeId id, EdgeType type, Direction dir) const {
  std::vector<Adjacent> out;
  for_each_neighbor(id, type, dir, [&](EdgeId e, NodeId n) { out.push_back({e, n}); });
  return out;
}

std::vector<NodeId> Graph::find_nodes(NodeLabel label, const PropertyMap& predicate) const {
  auto matches = [&](NodeId id) {
    const auto& props = node(id).props;
    return std::all_of(predicate.begin(), predicate.end(), [&](const auto& kv) {
      const auto it = props.find(kv.first);
      return it != props.end() && it->second == kv.second;
    });
  };
  if (const auto* dom = get_prop<std::string>(predicate, "id")) {
    const auto hit = find_by_domain_id(label, *dom);
    if (hit && matches(*hit)) return {*hit};
    return {};
  }
  std::vector<NodeId> out;
  for (NodeId id : by_label_[idx(label)]) {
    if (predicate.empty() || matches(id)) out.push_back(id);
  }
  return out;
}

std::optional<NodeId> Graph::find_by_domain_id(NodeLabel label, std::string_view dom) const {
  const auto& index = by_domain_id_[idx(label)];
  const auto it = index.find(std::string(dom));
  if (it == index.end()) return std::nullopt;
  return it->second;
}

bool Graph::has_edge(EdgeType type, NodeId source, NodeId target) const {
  return edge_keys_.count(EdgeKey{type, source.value, target.value}) > 0;
}

std::vector<NodeId> Graph::node_ids() const {
  std::vector<NodeId> out;
  out.reserve(node_count_);
  for (const auto& s : nodes_) {
    if (s) out.push_back(s->node.id);
  }
  return out;
}

std::vector<EdgeId> Graph::edge_ids() const {
  std::vector<EdgeId> out;
  out.reserve(edge_count_);
  for (const auto& e : edges_) {
    if (e) out.push_back(e->id);
  }
  return out;
}

std::vector<EdgeId> Graph::edges_of_type(EdgeType type) const {
  std::vector<EdgeId> out;
  for (const auto& e : edges_) {
    if (e && e->type == type) out.push_back(e->id);
  }
  return out;
}

void Graph::attach_raster(NodeId dem, DemGrid grid) {
  if (node(dem).label != NodeLabel::DEM) {
    throw Error(ErrorCode::SchemaViolation, "rasters attach to DEM nodes only");
  }
  validate(grid);
  rasters_.insert_or_assign(dem.value, std::move(grid));
}

const DemGrid* Graph::raster(NodeId dem) const noexcept {
  const auto it = rasters_.find(dem.value);
  return it == rasters_.end() ? nullptr : &it->second;
}

std::vector<NodeId> Graph::raster_nodes() const {
  std::vector<NodeId> out;
  for (const auto& [id, grid] : rasters_) out.push_back(NodeId{id});
  std::sort(out.begin(), out.end());
  return out;
}

void Graph::restore_node(Node node) {
  if (node.id.value == 0) throw Error(ErrorCode::CorruptSnapshot, "node id 0");
  if (find_node(node.id)) {
    throw Error(ErrorCode::CorruptSnapshot, "duplicate " + describe(node.id));
  }
  const auto id = node.id.value;
  insert_node(std::move(node));
  next_node_ = std::max(next_node_, id + 1);
}

void Graph::restore_edge(Edge edge) {
  if (edge.id.value == 0) throw Error(ErrorCode::CorruptSnapshot, "edge id 0");
  if (find_edge(edge.id)) {
    throw Error(ErrorCode::CorruptSnapshot, "duplicate edge " + std::to_string(edge.id.value));
  }
  const auto id = edge.id.value;
  insert_edge(std::move(edge));
  next_edge_ = std::max(next_edge_, id + 1);
}

void Graph::reserve_ids(std::uint64_t next_node, std::uint64_t next_edge) {
  next_node_ = std::max(next_node_, next_node);
  next_edge_ = std::max(next_edge_, next_edge);
}

}  // namespace hydrograph
