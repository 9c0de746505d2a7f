#pragma once

#include <vector>

#include "hydrograph/geometry.hpp"
#include "hydrograph/graph.hpp"

namespace hydrograph {

// Watershed polygons of a graph with their PART_OF ancestry, for point and
// polygon containment lookups.
class WatershedIndex {
 public:
  explicit WatershedIndex(const Graph& graph);

  bool empty() const noexcept { return entries_.empty(); }

  // Watersheds containing `p`, minus any that is a PART_OF ancestor of
  // another containing watershed. Ordered by node id.
  std::vector<NodeId> innermost(geo::Point p) const;

 private:
  struct Entry {
    NodeId id;
    geo::MultiPolygon shape;
    std::vector<NodeId> ancestors;  // transitive PART_OF targets
  };
  std::vector<Entry> entries_;
};

// Adds PART_OF edges from each watershed to its immediate enclosing
// watersheds (transitive reduction of polygon_within). Identical polygons are
// left unrelated. Returns the number of edges created.
std::size_t derive_part_of(Graph& graph, std::vector<std::string>* warnings = nullptr);

// Polygon of a Watershed or LandUse node, if it has one.
std::optional<geo::MultiPolygon> node_polygon(const Node& node);

}  // namespace hydrograph
