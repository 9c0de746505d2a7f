#include <gtest/gtest.h>

#include <random>

#include "hydrograph/ingest.hpp"
#include "hydrograph/quality.hpp"
#include "support/expect.hpp"
#include "support/oracles.hpp"

using namespace hydrograph;

namespace {

constexpr const char* kStations =
    "id,name,lon,lat,operator\n"
    "S1,First,-7.9,38.1,apa\n"
    "S2,Second,-7.8,38.2,apa\n";

constexpr const char* kQuality =
    "station_id,timestamp,depth_m,NO3,PO4\n"
    "S1,2020-01-01T00:00:00Z,0.5,1.2,<0.01\n"
    "S1,2020-02-01T00:00:00Z,,2.5,0.3\n"
    "S1,2020-03-01T00:00:00Z,1.0,3.1,\n"
    "S2,2020-01-15T00:00:00Z,,4.0,0.2\n";

Graph loaded() {
  Graph g;
  const NodeId sys = ensure_water_system(g, "main");
  ingest_stations(g, kStations, sys);
  ingest_quality_data(g, kQuality);
  return g;
}

std::size_t points(const QualitySeries& s) {
  std::size_t n = 0;
  for (const auto& [k, v] : s) n += v.size();
  return n;
}

}  // namespace

TEST(ParamCell, Forms) {
  EXPECT_EQ(parse_param_cell("1.5"), (ParamValue{1.5, false}));
  EXPECT_EQ(parse_param_cell("<0.01"), (ParamValue{0.01, true}));
  EXPECT_EQ(parse_param_cell(""), std::nullopt);
  EXPECT_ERROR_CODE(parse_param_cell("abc"), ErrorCode::InvalidArgument);
  EXPECT_ERROR_CODE(parse_param_cell("<"), ErrorCode::InvalidArgument);
}

TEST(QualityParse, WideFormat) {
  const ParsedQuality p = parse_quality_csv(kQuality);
  EXPECT_FALSE(p.long_format);
  ASSERT_EQ(p.samples.size(), 4u);
  EXPECT_EQ(p.samples[0].depth_m, std::optional<double>(0.5));
  EXPECT_EQ(p.samples[0].values.at("PO4"), (ParamValue{0.01, true}));
  EXPECT_EQ(p.samples[1].depth_m, std::nullopt);
  EXPECT_EQ(p.samples[2].values.count("PO4"), 0u);
  EXPECT_ERROR_CODE(parse_quality_csv("a,b\n1,2\n"), ErrorCode::BadHeader);
}

TEST(QualityParse, BadRowsSkipped) {
  const ParsedQuality p = parse_quality_csv(
      "station_id,timestamp,NO3\nS1,2020-01-01,1\nS1,not-a-date,2\nS1,2020-01-02,x\n");
  EXPECT_EQ(p.samples.size(), 1u);
  EXPECT_EQ(p.rows_skipped, 2u);
  // The unparseable cell is reported before its row is dropped as empty.
  EXPECT_EQ(p.warnings.size(), 3u);
}

TEST(QualityProps, RoundTrip) {
  const QualitySample s = parse_quality_csv(kQuality).samples[0];
  EXPECT_EQ(sample_from_props(sample_to_props(s)), s);
}

TEST(QualityFilter, SelectsByStationParamTimeAndDepth) {
  const Graph g = loaded();
  QualityFilter f;
  f.stations = {"S1"};
  f.params = {"NO3"};
  const auto no3 = filter_quality(g, f);
  ASSERT_EQ(no3.size(), 1u);
  const auto& pts = no3.at(SeriesKey{"S1", "NO3"});
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_EQ(pts[0].value, 1.2);
  EXPECT_EQ(pts[2].value, 3.1);

  EXPECT_EQ(points(filter_quality(g, {})), 7u);

  f.params = {"Zn"};
  EXPECT_TRUE(filter_quality(g, f).empty());

  QualityFilter window;
  window.from = parse_timestamp("2020-01-10");
  window.to = parse_timestamp("2020-02-01");
  EXPECT_EQ(points(filter_quality(g, window)), 4u);  // S1 Feb (2) and S2 Jan (2)
  window.from = parse_timestamp("2030-01-01");
  window.to = parse_timestamp("2031-01-01");
  EXPECT_TRUE(filter_quality(g, window).empty());

  QualityFilter depth;
  depth.depth = {{0.4, 0.6}};
  EXPECT_EQ(points(filter_quality(g, depth)), 2u);
}

TEST(QualityFilter, Errors) {
  const Graph g = loaded();
  QualityFilter f;
  f.stations = {"S9"};
  EXPECT_ERROR_CODE(filter_quality(g, f), ErrorCode::UnknownStation);
  QualityFilter inverted;
  inverted.from = parse_timestamp("2021-01-01");
  inverted.to = parse_timestamp("2020-01-01");
  EXPECT_ERROR_CODE(filter_quality(g, inverted), ErrorCode::InvalidArgument);
  QualityFilter depth;
  depth.depth = {{2.0, 1.0}};
  EXPECT_ERROR_CODE(filter_quality(g, depth), ErrorCode::InvalidArgument);
}

TEST(QualityExport, EmptyIsHeaderOnly) {
  EXPECT_EQ(export_quality_csv({}), std::string(kQualityExportHeader) + "\n");
}

TEST(QualityExport, RowsInSeriesOrder) {
  const Graph g = loaded();
  QualityFilter f;
  f.stations = {"S1"};
  EXPECT_EQ(export_quality_csv(filter_quality(g, f)),
            std::string(kQualityExportHeader) + "\n"
            "S1,2020-01-01T00:00:00Z,NO3,1.2,false,0.5\n"
            "S1,2020-02-01T00:00:00Z,NO3,2.5,false,\n"
            "S1,2020-03-01T00:00:00Z,NO3,3.1,false,1\n"
            "S1,2020-01-01T00:00:00Z,PO4,0.01,true,0.5\n"
            "S1,2020-02-01T00:00:00Z,PO4,0.3,false,\n");
}

TEST(QualityExport, SameTimestampOrderedByDepth) {
  const auto series = series_from_samples(parse_quality_csv(
                                              "station_id,timestamp,depth_m,NO3\n"
                                              "S1,2020-01-01,5,1\nS1,2020-01-01,1,2\nS1,2020-01-01,,3\n")
                                              .samples);
  const auto& pts = series.at(SeriesKey{"S1", "NO3"});
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_EQ(pts[0].depth_m, std::nullopt);
  EXPECT_EQ(pts[1].depth_m, std::optional<double>(1));
  EXPECT_EQ(pts[2].depth_m, std::optional<double>(5));
}

TEST(QualityExport, LongFormatRoundTripIsLossless) {
  std::mt19937 gen(77);
  for (int trial = 0; trial < 20; ++trial) {
    std::string csv = "station_id,timestamp,depth_m,NO3,pH\n";
    for (int row = 0; row < 30; ++row) {
      csv += "S" + std::to_string(gen() % 3) + ",";
      csv += format_timestamp(Timestamp::from_epoch(1577836800 + static_cast<std::int64_t>(gen() % 100000000))) + ",";
      if (gen() % 2) csv += format_double(oracle::uniform(gen, 0, 10));
      csv += ",";
      if (gen() % 4) csv += (gen() % 5 == 0 ? "<" : "") + format_double(oracle::uniform(gen, 0, 50));
      csv += "," + format_double(oracle::uniform(gen, 5, 9)) + "\n";
    }
    const auto series = series_from_samples(parse_quality_csv(csv).samples);
    const std::string exported = export_quality_csv(series);
    const ParsedQuality back = parse_quality_csv(exported);
    EXPECT_TRUE(back.long_format);
    EXPECT_EQ(back.rows_skipped, 0u);
    EXPECT_EQ(series_from_samples(back.samples), series) << "trial " << trial;
    EXPECT_EQ(export_quality_csv(series_from_samples(back.samples)), exported);
  }
}
