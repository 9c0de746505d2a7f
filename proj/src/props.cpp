#include "hydrograph/props.hpp"

#include <algorithm>
#include <cmath>

#include "hydrograph/error.hpp"

namespace hydrograph {

namespace {

using L = NodeLabel;

constexpr std::array<std::string_view, kNodeLabelCount> kLabelNames = {
    "WaterSystem", "WaterNode", "QualityStation", "QualityData", "WaterStretch",
    "Watershed",   "LandUse",   "Geometry",       "DEM",
};

constexpr std::array<std::string_view, kEdgeTypeCount> kEdgeNames = {
    "CONNECTED", "MONITORED_BY",  "STATION_OF",    "COLLECTED",   "FLOWS_TO", "WITHIN",
    "HAS_LANDUSE", "HAS_WATERSHED", "HAS_GEOMETRY", "REPRESENTED", "PART_OF",
};

constexpr std::array<NodeLabel, kNodeLabelCount> kLabels = {
    L::WaterSystem, L::WaterNode, L::QualityStation, L::QualityData, L::WaterStretch,
    L::Watershed,   L::LandUse,   L::Geometry,       L::DEM,
};

constexpr std::array<EdgeType, kEdgeTypeCount> kTypes = {
    EdgeType::CONNECTED,     EdgeType::MONITORED_BY, EdgeType::STATION_OF,
    EdgeType::COLLECTED,     EdgeType::FLOWS_TO,     EdgeType::WITHIN,
    EdgeType::HAS_LANDUSE,   EdgeType::HAS_WATERSHED, EdgeType::HAS_GEOMETRY,
    EdgeType::REPRESENTED,   EdgeType::PART_OF,
};

constexpr LabelPair kConnected[] = {{L::WaterNode, L::WaterNode}};
constexpr LabelPair kMonitoredBy[] = {{L::WaterStretch, L::QualityStation},
                                      {L::WaterNode, L::QualityStation}};
constexpr LabelPair kStationOf[] = {{L::QualityStation, L::WaterSystem}};
constexpr LabelPair kCollected[] = {{L::QualityStation, L::QualityData}};
constexpr LabelPair kFlowsTo[] = {{L::WaterStretch, L::WaterStretch}};
constexpr LabelPair kWithin[] = {{L::QualityStation, L::Watershed},
                                 {L::WaterNode, L::Watershed},
                                 {L::WaterStretch, L::Watershed},
                                 {L::LandUse, L::Watershed}};
constexpr LabelPair kHasLanduse[] = {{L::WaterSystem, L::LandUse}};
constexpr LabelPair kHasWatershed[] = {{L::WaterSystem, L::Watershed}};
constexpr LabelPair kHasGeometry[] = {{L::WaterSystem, L::Geometry}};
constexpr LabelPair kRepresented[] = {{L::WaterNode, L::Geometry}};
constexpr LabelPair kPartOf[] = {{L::Watershed, L::Watershed}};

}  // namespace

std::string_view to_string(NodeLabel label) noexcept {
  return kLabelNames[static_cast<std::size_t>(label)];
}

std::string_view to_string(EdgeType type) noexcept {
  return kEdgeNames[static_cast<std::size_t>(type)];
}

std::optional<NodeLabel> parse_node_label(std::string_view name) noexcept {
  const auto it = std::find(kLabelNames.begin(), kLabelNames.end(), name);
  if (it == kLabelNames.end()) return std::nullopt;
  return kLabels[static_cast<std::size_t>(it - kLabelNames.begin())];
}

std::optional<EdgeType> parse_edge_type(std::string_view name) noexcept {
  const auto it = std::find(kEdgeNames.begin(), kEdgeNames.end(), name);
  if (it == kEdgeNames.end()) return std::nullopt;
  return kTypes[static_cast<std::size_t>(it - kEdgeNames.begin())];
}

std::span<const NodeLabel> all_node_labels() noexcept { return kLabels; }
std::span<const EdgeType> all_edge_types() noexcept { return kTypes; }

std::span<const LabelPair> schema_pairs(EdgeType type) noexcept {
  switch (type) {
    case EdgeType::CONNECTED: return kConnected;
    case EdgeType::MONITORED_BY: return kMonitoredBy;
    case EdgeType::STATION_OF: return kStationOf;
    case EdgeType::COLLECTED: return kCollected;
    case EdgeType::FLOWS_TO: return kFlowsTo;
    case EdgeType::WITHIN: return kWithin;
    case EdgeType::HAS_LANDUSE: return kHasLanduse;
    case EdgeType::HAS_WATERSHED: return kHasWatershed;
    case EdgeType::HAS_GEOMETRY: return kHasGeometry;
    case EdgeType::REPRESENTED: return kRepresented;
    case EdgeType::PART_OF: return kPartOf;
  }
  return {};
}

bool schema_allows(EdgeType type, NodeLabel source, NodeLabel target) noexcept {
  const auto pairs = schema_pairs(type);
  return std::any_of(pairs.begin(), pairs.end(), [&](const LabelPair& p) {
    return p.source == source && p.target == target;
  });
}

void validate_properties(const PropertyMap& props) {
  for (const auto& [name, value] : props) {
    if (name.empty()) throw Error(ErrorCode::InvalidProperty, "empty property name");
    if (const auto* d = std::get_if<double>(&value); d && !std::isfinite(*d)) {
      throw Error(ErrorCode::InvalidProperty, "property '" + name + "' is not finite");
    }
    if (const auto* g = std::get_if<GeometryRef>(&value); g && !g->shape) {
      throw Error(ErrorCode::InvalidProperty, "property '" + name + "' has null geometry");
    }
  }
}

std::optional<double> get_number(const PropertyMap& props, std::string_view name) {
  if (const auto* d = get_prop<double>(props, name)) return *d;
  if (const auto* i = get_prop<std::int64_t>(props, name)) return static_cast<double>(*i);
  return std::nullopt;
}

}  // namespace hydrograph
