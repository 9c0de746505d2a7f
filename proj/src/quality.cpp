#include "hydrograph/quality.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "hydrograph/csv.hpp"
#include "hydrograph/error.hpp"
#include "hydrograph/raster.hpp"

namespace hydrograph {

namespace quality_props {

bool is_reserved(std::string_view name) noexcept {
  return name == "id" || name == kStation || name == kTimestamp || name == kDepth ||
         name.substr(0, kBelowDetectionPrefix.size()) == kBelowDetectionPrefix;
}

}  // namespace quality_props

namespace {

namespace qp = quality_props;

std::optional<double> parse_number(std::string_view s) {
  s = csv::trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string sample_domain_id(const QualitySample& s) {
  std::string id = s.station_id + "@" + format_timestamp(s.timestamp);
  if (s.depth_m) id += "#" + format_double(*s.depth_m);
  return id;
}

bool depth_less(const std::optional<double>& a, const std::optional<double>& b) {
  if (!a || !b) return !a && b;
  return *a < *b;
}

void sort_points(std::vector<SeriesPoint>& pts) {
  std::stable_sort(pts.begin(), pts.end(), [](const SeriesPoint& a, const SeriesPoint& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return depth_less(a.depth_m, b.depth_m);
  });
}

ParsedQuality parse_long(const csv::Table& table) {
  ParsedQuality out;
  out.long_format = true;
  out.data_rows = table.rows.size();
  std::map<std::string, std::size_t> index;  // sample domain id -> position

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.line_numbers[r];
    auto skip = [&](const std::string& why) {
      ++out.rows_skipped;
      out.warnings.push_back("line " + std::to_string(line) + ": " + why);
    };
    if (row.size() != 6) {
      skip("expected 6 columns, got " + std::to_string(row.size()));
      continue;
    }
    QualitySample key;
    key.station_id = std::string(csv::trim(row[0]));
    if (key.station_id.empty()) {
      skip("empty station_id");
      continue;
    }
    try {
      key.timestamp = parse_timestamp(row[1]);
    } catch (const Error& e) {
      skip(e.what());
      continue;
    }
    const std::string param(csv::trim(row[2]));
    const auto value = parse_number(row[3]);
    const std::string_view flag = csv::trim(row[4]);
    if (param.empty() || qp::is_reserved(param) || !value || (flag != "true" && flag != "false")) {
      skip("invalid parameter value row");
      continue;
    }
    if (!csv::trim(row[5]).empty()) {
      const auto depth = parse_number(row[5]);
      if (!depth || *depth < 0.0) {
        skip("invalid depth_m");
        continue;
      }
      key.depth_m = depth;
    }
    const std::string id = sample_domain_id(key);
    auto [it, inserted] = index.try_emplace(id, out.samples.size());
    if (inserted) {
      out.samples.push_back(key);
      out.sample_lines.push_back(line);
    }
    out.samples[it->second].values[param] = ParamValue{*value, flag == "true"};
  }
  return out;
}

ParsedQuality parse_wide(const csv::Table& table) {
  ParsedQuality out;
  const auto& header = table.header;
  const bool has_depth = header.size() > 2 && header[2] == qp::kDepth;
  const std::size_t first_param = has_depth ? 3 : 2;
  if (header.size() <= first_param) throw Error(ErrorCode::BadHeader, "no parameter columns");
  std::set<std::string> seen;
  for (std::size_t c = first_param; c < header.size(); ++c) {
    if (header[c].empty() || qp::is_reserved(header[c]) || !seen.insert(header[c]).second) {
      throw Error(ErrorCode::BadHeader, "invalid or duplicate parameter column '" + header[c] + "'");
    }
  }

  out.data_rows = table.rows.size();
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.line_numbers[r];
    auto warn = [&](const std::string& why) {
      out.warnings.push_back("line " + std::to_string(line) + ": " + why);
    };
    auto skip = [&](const std::string& why) {
      ++out.rows_skipped;
      warn(why);
    };
    if (row.size() != header.size()) {
      skip("expected " + std::to_string(header.size()) + " columns, got " +
           std::to_string(row.size()));
      continue;
    }
    QualitySample s;
    s.station_id = std::string(csv::trim(row[0]));
    if (s.station_id.empty()) {
      skip("empty station_id");
      continue;
    }
    try {
      s.timestamp = parse_timestamp(row[1]);
    } catch (const Error& e) {
      skip(e.what());
      continue;
    }
    if (has_depth && !csv::trim(row[2]).empty()) {
      const auto depth = parse_number(row[2]);
      if (!depth || *depth < 0.0) {
        skip("invalid depth_m '" + row[2] + "'");
        continue;
      }
      s.depth_m = depth;
    }
    for (std::size_t c = first_param; c < header.size(); ++c) {
      try {
        if (auto v = parse_param_cell(row[c])) s.values.emplace(header[c], *v);
      } catch (const Error&) {
        warn("ignored unparseable " + header[c] + " value '" + row[c] + "'");
      }
    }
    if (s.values.empty()) {
      skip("no parameter values");
      continue;
    }
    out.samples.push_back(std::move(s));
    out.sample_lines.push_back(line);
  }
  return out;
}

}  // namespace

std::optional<ParamValue> parse_param_cell(std::string_view cell) {
  cell = csv::trim(cell);
  if (cell.empty()) return std::nullopt;
  bool below = false;
  if (cell.front() == '<') {
    below = true;
    cell.remove_prefix(1);
  }
  const auto v = parse_number(cell);
  if (!v) throw Error(ErrorCode::InvalidArgument, "not a number: '" + std::string(cell) + "'");
  return ParamValue{*v, below};
}

PropertyMap sample_to_props(const QualitySample& s) {
  PropertyMap props;
  props.emplace("id", sample_domain_id(s));
  props.emplace(std::string(qp::kStation), s.station_id);
  props.emplace(std::string(qp::kTimestamp), s.timestamp);
  if (s.depth_m) props.emplace(std::string(qp::kDepth), *s.depth_m);
  for (const auto& [name, v] : s.values) {
    props.emplace(name, v.value);
    if (v.below_detection) props.emplace(std::string(qp::kBelowDetectionPrefix) + name, true);
  }
  return props;
}

QualitySample sample_from_props(const PropertyMap& props) {
  QualitySample s;
  if (const auto* st = get_prop<std::string>(props, qp::kStation)) s.station_id = *st;
  if (const auto* ts = get_prop<Timestamp>(props, qp::kTimestamp)) s.timestamp = *ts;
  s.depth_m = get_number(props, qp::kDepth);
  for (const auto& [name, value] : props) {
    if (qp::is_reserved(name)) continue;
    const auto* d = std::get_if<double>(&value);
    if (!d) continue;
    const auto* bdl = get_prop<bool>(props, std::string(qp::kBelowDetectionPrefix) + name);
    s.values.emplace(name, ParamValue{*d, bdl && *bdl});
  }
  return s;
}

ParsedQuality parse_quality_csv(std::string_view text) {
  const csv::Table table = csv::parse(text);
  const auto& h = table.header;
  if (h.size() < 2 || h[0] != qp::kStation || h[1] != qp::kTimestamp) {
    throw Error(ErrorCode::BadHeader, "quality data header must start with station_id,timestamp");
  }
  std::string joined;
  for (std::size_t i = 0; i < h.size(); ++i) joined += (i ? "," : "") + h[i];
  if (joined == kQualityExportHeader) return parse_long(table);
  return parse_wide(table);
}

QualitySeries series_from_samples(const std::vector<QualitySample>& samples) {
  QualitySeries series;
  for (const auto& s : samples) {
    for (const auto& [name, v] : s.values) {
      series[SeriesKey{s.station_id, name}].push_back(
          SeriesPoint{s.timestamp, v.value, v.below_detection, s.depth_m});
    }
  }
  for (auto& [key, pts] : series) sort_points(pts);
  return series;
}

QualitySeries filter_quality(const Graph& graph, const QualityFilter& filter) {
  if (filter.from && filter.to && *filter.from > *filter.to) {
    throw Error(ErrorCode::InvalidArgument, "time range 'from' is after 'to'");
  }
  if (filter.depth && filter.depth->first > filter.depth->second) {
    throw Error(ErrorCode::InvalidArgument, "depth range is inverted");
  }

  std::vector<NodeId> stations;
  if (filter.stations.empty()) {
    stations = graph.find_nodes(NodeLabel::QualityStation);
  } else {
    for (const auto& id : filter.stations) {
      const auto node = graph.find_by_domain_id(NodeLabel::QualityStation, id);
      if (!node) throw Error(ErrorCode::UnknownStation, "unknown station '" + id + "'");
      stations.push_back(*node);
    }
  }
  const std::set<std::string, std::less<>> wanted(filter.params.begin(), filter.params.end());

  QualitySeries series;
  for (NodeId station : stations) {
    const std::string station_id = domain_id(graph.node(station));
    graph.for_each_neighbor(station, EdgeType::COLLECTED, Direction::Out, [&](EdgeId, NodeId d) {
      const Node& data = graph.node(d);
      const auto* ts = get_prop<Timestamp>(data.props, qp::kTimestamp);
      if (!ts) return;
      if ((filter.from && *ts < *filter.from) || (filter.to && *ts > *filter.to)) return;
      const auto depth = get_number(data.props, qp::kDepth);
      if (filter.depth) {
        if (!depth || *depth < filter.depth->first || *depth > filter.depth->second) return;
      }
      for (const auto& [name, value] : data.props) {
        if (qp::is_reserved(name)) continue;
        if (!wanted.empty() && !wanted.count(name)) continue;
        const auto* v = std::get_if<double>(&value);
        if (!v) continue;
        const auto* bdl = get_prop<bool>(data.props, std::string(qp::kBelowDetectionPrefix) + name);
        series[SeriesKey{station_id, name}].push_back(SeriesPoint{*ts, *v, bdl && *bdl, depth});
      }
    });
  }
  for (auto& [key, pts] : series) sort_points(pts);
  return series;
}

std::string export_quality_csv(const QualitySeries& series) {
  std::string out(kQualityExportHeader);
  out += '\n';
  for (const auto& [key, pts] : series) {
    for (const auto& p : pts) {
      out += csv::escape(key.station);
      out += ',';
      out += format_timestamp(p.timestamp);
      out += ',';
      out += csv::escape(key.parameter);
      out += ',';
      out += format_double(p.value);
      out += ',';
      out += p.below_detection ? "true" : "false";
      out += ',';
      if (p.depth_m) out += format_double(*p.depth_m);
      out += '\n';
    }
  }
  return out;
}

}  // namespace hydrograph
