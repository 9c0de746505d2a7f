#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "hydrograph/geometry.hpp"
#include "hydrograph/timeutil.hpp"

namespace hydrograph {

enum class NodeLabel : std::uint8_t {
  WaterSystem,
  WaterNode,
  QualityStation,
  QualityData,
  WaterStretch,
  Watershed,
  LandUse,
  Geometry,
  DEM,
};
inline constexpr std::size_t kNodeLabelCount = 9;

enum class EdgeType : std::uint8_t {
  CONNECTED,
  MONITORED_BY,
  STATION_OF,
  COLLECTED,
  FLOWS_TO,
  WITHIN,
  HAS_LANDUSE,
  HAS_WATERSHED,
  HAS_GEOMETRY,
  REPRESENTED,
  PART_OF,
};
inline constexpr std::size_t kEdgeTypeCount = 11;

std::string_view to_string(NodeLabel label) noexcept;
std::string_view to_string(EdgeType type) noexcept;
std::optional<NodeLabel> parse_node_label(std::string_view name) noexcept;
std::optional<EdgeType> parse_edge_type(std::string_view name) noexcept;

std::span<const NodeLabel> all_node_labels() noexcept;
std::span<const EdgeType> all_edge_types() noexcept;

struct LabelPair {
  NodeLabel source;
  NodeLabel target;
};

// The fixed metagraph. Every stored edge satisfies it.
std::span<const LabelPair> schema_pairs(EdgeType type) noexcept;
bool schema_allows(EdgeType type, NodeLabel source, NodeLabel target) noexcept;

// Shared immutable geometry held by a property. Compares by value.
struct GeometryRef {
  std::shared_ptr<const geo::Shape> shape;

  GeometryRef() = default;
  explicit GeometryRef(geo::Shape s) : shape(std::make_shared<const geo::Shape>(std::move(s))) {}

  friend bool operator==(const GeometryRef& a, const GeometryRef& b) {
    if (a.shape == b.shape) return true;
    return a.shape && b.shape && *a.shape == *b.shape;
  }
};

using PropValue = std::variant<std::string, std::int64_t, double, bool, Timestamp, GeometryRef>;
using PropertyMap = std::map<std::string, PropValue, std::less<>>;

// Throws Error(InvalidProperty) for empty names, non-finite floats or null geometry.
void validate_properties(const PropertyMap& props);

template <class T>
const T* get_prop(const PropertyMap& props, std::string_view name) {
  const auto it = props.find(name);
  if (it == props.end()) return nullptr;
  return std::get_if<T>(&it->second);
}

// Numeric property as double whether stored as integer or float.
std::optional<double> get_number(const PropertyMap& props, std::string_view name);

}  // namespace hydrograph
