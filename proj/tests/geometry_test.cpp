#include <gtest/gtest.h>

#include <random>

#include "hydrograph/error.hpp"
#include "hydrograph/geometry.hpp"
#include "hydrograph/json_codec.hpp"
#include "support/oracles.hpp"

using namespace hydrograph;
using namespace hydrograph::geo;

namespace {

Polygon square(double x0, double y0, double x1, double y1) {
  return {{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}, {x0, y0}}, {}};
}

}  // namespace

TEST(PointInPolygon, InteriorExteriorAndBoundary) {
  const Polygon sq = square(0, 0, 1, 1);
  EXPECT_TRUE(point_in_polygon({0.5, 0.5}, sq));
  EXPECT_FALSE(point_in_polygon({1.5, 0.5}, sq));
  EXPECT_TRUE(point_in_polygon({1.0, 0.5}, sq));
  EXPECT_TRUE(point_in_polygon({0.0, 0.0}, sq));
  EXPECT_TRUE(point_in_polygon({1.0 + 1e-10, 0.5}, sq));
  EXPECT_FALSE(point_in_polygon({1.0 + 1e-6, 0.5}, sq));
}

TEST(PointInPolygon, HoleExcludesInterior) {
  Polygon p = square(0, 0, 4, 4);
  p.holes.push_back({{1, 1}, {1, 3}, {3, 3}, {3, 1}, {1, 1}});
  EXPECT_FALSE(point_in_polygon({2, 2}, p));
  EXPECT_TRUE(point_in_polygon({0.5, 2}, p));
  EXPECT_TRUE(point_in_polygon({1, 2}, p));  // hole boundary is polygon boundary
}

TEST(PointInPolygon, AgreesWithWindingNumberOnRandomStars) {
  std::mt19937 gen(5);
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Polygon poly{oracle::star_ring(gen, 0, 0, 0.2, 1.0, 3 + gen() % 20, trial % 2 == 1), {}};
    if (trial % 5 == 0) poly.holes.push_back(oracle::star_ring(gen, 0, 0, 0.05, 0.15, 6));
    const Point p{oracle::uniform(gen, -1.2, 1.2), oracle::uniform(gen, -1.2, 1.2)};
    if (oracle::boundary_distance(p, poly) < 1e-7) continue;
    ASSERT_EQ(point_in_polygon(p, poly), oracle::inside(p, poly)) << "trial " << trial;
    ++checked;
  }
  EXPECT_GT(checked, 990);
}

TEST(PolygonWithin, NestedTouchingAndCrossing) {
  const Polygon outer = square(0, 0, 10, 10);
  EXPECT_TRUE(polygon_within(square(1, 1, 2, 2), outer));
  EXPECT_TRUE(polygon_within(square(0, 0, 5, 5), outer));  // shares two sides
  EXPECT_FALSE(polygon_within(square(5, 5, 11, 6), outer));
  EXPECT_FALSE(polygon_within(outer, square(1, 1, 2, 2)));
  EXPECT_TRUE(polygon_within(outer, outer));

  // Concave outer: all vertices of the inner square are inside, but an edge
  // passes through the notch.
  const Polygon notch{{{0, 0}, {10, 0}, {10, 10}, {6, 10}, {5, 4}, {4, 10}, {0, 10}, {0, 0}}, {}};
  EXPECT_FALSE(polygon_within(square(2, 6, 8, 8), notch));

  Polygon holed = outer;
  holed.holes.push_back({{4, 4}, {4, 6}, {6, 6}, {6, 4}, {4, 4}});
  EXPECT_FALSE(polygon_within(square(3, 3, 7, 7), holed));
  EXPECT_TRUE(polygon_within(square(1, 1, 3, 3), holed));
}

TEST(SegmentsCross, ProperOnly) {
  EXPECT_TRUE(segments_cross({0, 0}, {2, 2}, {0, 2}, {2, 0}));
  EXPECT_FALSE(segments_cross({0, 0}, {1, 1}, {1, 1}, {2, 0}));
  EXPECT_FALSE(segments_cross({0, 0}, {2, 0}, {1, 0}, {3, 0}));
  EXPECT_FALSE(segments_cross({0, 0}, {1, 0}, {0, 1}, {1, 1}));
}

TEST(Snap, NearestSegmentWithinTolerance) {
  const Polyline line{{{0, 0}, {1, 0}, {1, 1}}};
  const auto hit = snap_point_to_polyline({0.5, 0.002}, line, kDefaultSnapTolerance);
  ASSERT_TRUE(hit);
  EXPECT_EQ(hit->segment, 0u);
  EXPECT_NEAR(hit->distance, 0.002, 1e-15);
  EXPECT_FALSE(snap_point_to_polyline({0.5, 0.03}, line, kDefaultSnapTolerance));
  EXPECT_EQ(snap_point_to_polyline({1.002, 0.5}, line, 0.01)->segment, 1u);
}

TEST(Snap, TieGoesToLowestSegmentAcrossRuns) {
  // (1 - d, d) with d = 0.001 is equidistant from the segments meeting at
  // the corner (1, 0).
  const Polyline line{{{0, 0}, {1, 0}, {1, 1}}};
  const Point p{0.999, 0.001};
  std::vector<std::size_t> picks;
  for (int run = 0; run < 3; ++run) picks.push_back(snap_point_to_polyline(p, line, 0.01)->segment);
  EXPECT_EQ(picks, (std::vector<std::size_t>{0, 0, 0}));

  const Polyline rev{{{1, 1}, {1, 0}, {0, 0}}};
  const Point q{1.001, 0.0};  // nearest point is the shared vertex
  EXPECT_EQ(snap_point_to_polyline(q, rev, 0.01)->segment, 0u);
}

TEST(Distance, PointSegmentMatchesClosedForm) {
  EXPECT_DOUBLE_EQ(point_segment_distance({0, 1}, {-1, 0}, {1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(point_segment_distance({3, 4}, {0, 0}, {0, 0}), 5.0);
  EXPECT_DOUBLE_EQ(point_segment_distance({2, 1}, {0, 0}, {1, 0}), std::sqrt(2.0));
}

TEST(RingArea, SignFollowsOrientation) {
  const Polygon sq = square(0, 0, 2, 3);
  EXPECT_DOUBLE_EQ(ring_area(sq.outer), 6.0);
  Ring cw(sq.outer.rbegin(), sq.outer.rend());
  EXPECT_DOUBLE_EQ(ring_area(cw), -6.0);
}

TEST(Validate, RejectsDegenerateShapes) {
  EXPECT_THROW(validate(Polygon{{{0, 0}, {1, 0}, {0, 0}}, {}}), Error);
  EXPECT_THROW(validate(Polyline{{{0, 0}}}), Error);
  EXPECT_THROW(validate(Point{std::nan(""), 0}), Error);
  EXPECT_NO_THROW(validate(square(0, 0, 1, 1)));
}

TEST(GeoJson, RoundTripsSupportedTypes) {
  const std::vector<Shape> shapes{Point{1.5, -2}, Polyline{{{0, 0}, {1, 1}}}, square(0, 0, 1, 1),
                                  MultiPolygon{{square(0, 0, 1, 1), square(2, 2, 3, 3)}}};
  for (const Shape& s : shapes) EXPECT_EQ(shape_from_geojson(shape_to_geojson(s)), s);
}

TEST(GeoJson, RejectsUnsupportedAndMalformed) {
  try {
    shape_from_geojson(json::parse(R"({"type":"GeometryCollection","geometries":[]})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedGeometry);
  }
  try {
    shape_from_geojson(json::parse(R"({"type":"Point","coordinates":[1]})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadGeoJson);
  }
}

TEST(RepresentativePoint, FirstVertex) {
  EXPECT_EQ(representative_point(Polyline{{{3, 4}, {5, 6}}}), (Point{3, 4}));
  EXPECT_EQ(representative_point(square(1, 2, 3, 4)), (Point{1, 2}));
  EXPECT_EQ(representative_point(Point{7, 8}), (Point{7, 8}));
}

TEST(PolygonWithin, MatchingHolesStillWithin) {
  Polygon holed = square(0, 0, 10, 10);
  holed.holes.push_back({{4, 4}, {4, 6}, {6, 6}, {6, 4}, {4, 4}});
  Polygon inner = square(2, 2, 8, 8);
  inner.holes = holed.holes;
  EXPECT_TRUE(polygon_within(inner, holed));
}
