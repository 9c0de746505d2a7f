#include "hydrograph/watersheds.hpp"

#include <algorithm>

namespace hydrograph {

std::optional<geo::MultiPolygon> node_polygon(const Node& node) {
  const auto* g = get_prop<GeometryRef>(node.props, "geometry");
  if (!g || !g->shape) return std::nullopt;
  return geo::as_multipolygon(*g->shape);
}

WatershedIndex::WatershedIndex(const Graph& graph) {
  for (NodeId id : graph.find_nodes(NodeLabel::Watershed)) {
    auto shape = node_polygon(graph.node(id));
    if (!shape) continue;
    Entry e{id, std::move(*shape), {}};
    std::vector<NodeId> stack{id};
    while (!stack.empty()) {
      const NodeId cur = stack.back();
      stack.pop_back();
      graph.for_each_neighbor(cur, EdgeType::PART_OF, Direction::Out, [&](EdgeId, NodeId up) {
        if (up == id || std::find(e.ancestors.begin(), e.ancestors.end(), up) != e.ancestors.end()) {
          return;
        }
        e.ancestors.push_back(up);
        stack.push_back(up);
      });
    }
    entries_.push_back(std::move(e));
  }
}

std::vector<NodeId> WatershedIndex::innermost(geo::Point p) const {
  std::vector<const Entry*> hits;
  for (const auto& e : entries_) {
    if (geo::point_in_multipolygon(p, e.shape)) hits.push_back(&e);
  }
  std::vector<NodeId> out;
  for (const Entry* w : hits) {
    const bool is_ancestor = std::any_of(hits.begin(), hits.end(), [&](const Entry* other) {
      return other != w && std::find(other->ancestors.begin(), other->ancestors.end(), w->id) !=
                               other->ancestors.end();
    });
    if (!is_ancestor) out.push_back(w->id);
  }
  return out;
}

std::size_t derive_part_of(Graph& graph, std::vector<std::string>* warnings) {
  struct Item {
    NodeId id;
    geo::MultiPolygon shape;
  };
  std::vector<Item> items;
  for (NodeId id : graph.find_nodes(NodeLabel::Watershed)) {
    if (auto shape = node_polygon(graph.node(id))) items.push_back({id, std::move(*shape)});
  }
  const std::size_t n = items.size();
  std::vector<std::vector<char>> within(n, std::vector<char>(n, 0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b) within[a][b] = geo::multipolygon_within(items[a].shape, items[b].shape);
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (within[a][b] && within[b][a]) {
        within[a][b] = within[b][a] = 0;
        if (warnings) {
          warnings->push_back("watersheds " + domain_id(graph.node(items[a].id)) + " and " +
                              domain_id(graph.node(items[b].id)) + " coincide; no PART_OF");
        }
      }
    }
  }

  std::size_t created = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t p = 0; p < n; ++p) {
      if (!within[a][p]) continue;
      bool immediate = true;
      for (std::size_t q = 0; q < n && immediate; ++q) {
        if (q != p && q != a && within[a][q] && within[q][p]) immediate = false;
      }
      if (!immediate || graph.has_edge(EdgeType::PART_OF, items[a].id, items[p].id)) continue;
      graph.create_edge(EdgeType::PART_OF, items[a].id, items[p].id);
      ++created;
    }
  }
  return created;
}

}  // namespace hydrograph
