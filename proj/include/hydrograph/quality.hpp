#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hydrograph/graph.hpp"
#include "hydrograph/timeutil.hpp"

namespace hydrograph {

struct ParamValue {
  double value = 0.0;
  bool below_detection = false;
  friend bool operator==(const ParamValue&, const ParamValue&) = default;
};

// One sampling event at a station.
struct QualitySample {
  std::string station_id;
  Timestamp timestamp;
  std::optional<double> depth_m;
  std::map<std::string, ParamValue> values;
  friend bool operator==(const QualitySample&, const QualitySample&) = default;
};

// QualityData node property layout. Parameter values are stored under their
// column name; a below-detection flag is stored as `bdl:<name>` = true.
namespace quality_props {
inline constexpr std::string_view kStation = "station_id";
inline constexpr std::string_view kTimestamp = "timestamp";
inline constexpr std::string_view kDepth = "depth_m";
inline constexpr std::string_view kBelowDetectionPrefix = "bdl:";
bool is_reserved(std::string_view name) noexcept;
}  // namespace quality_props

PropertyMap sample_to_props(const QualitySample& sample);
QualitySample sample_from_props(const PropertyMap& props);

// `<x` becomes (x, below_detection); plain numbers parse as-is. nullopt for
// empty cells; throws Error(InvalidArgument) for anything else.
std::optional<ParamValue> parse_param_cell(std::string_view cell);

struct ParsedQuality {
  std::vector<QualitySample> samples;
  std::vector<std::size_t> sample_lines;  // source line of each sample
  std::size_t data_rows = 0;
  std::size_t rows_skipped = 0;
  std::vector<std::string> warnings;
  bool long_format = false;
};

inline constexpr std::string_view kQualityExportHeader =
    "station_id,timestamp,parameter,value,below_detection,depth_m";

// Parses either the wide upload format
// (`station_id,timestamp[,depth_m],<param>...`) or the long export format.
// Throws Error(BadHeader) when the header fits neither.
ParsedQuality parse_quality_csv(std::string_view text);

struct QualityFilter {
  std::vector<std::string> stations;  // station domain ids; empty selects all
  std::vector<std::string> params;    // parameter names; empty selects all
  std::optional<Timestamp> from;
  std::optional<Timestamp> to;
  std::optional<std::pair<double, double>> depth;  // inclusive [min, max]
};

struct SeriesPoint {
  Timestamp timestamp;
  double value = 0.0;
  bool below_detection = false;
  std::optional<double> depth_m;
  friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};

struct SeriesKey {
  std::string station;
  std::string parameter;
  friend auto operator<=>(const SeriesKey&, const SeriesKey&) = default;
};

// Per (station, parameter) points ordered by (timestamp, depth).
using QualitySeries = std::map<SeriesKey, std::vector<SeriesPoint>>;

QualitySeries series_from_samples(const std::vector<QualitySample>& samples);

// Throws Error(UnknownStation) for a station id not in the graph and
// Error(InvalidArgument) for an inverted range.
QualitySeries filter_quality(const Graph& graph, const QualityFilter& filter);

std::string export_quality_csv(const QualitySeries& series);

}  // namespace hydrograph
