#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace hydrograph::geo {

// Planar lon/lat geometry. All predicates work directly in degrees.

struct Point {
  double lon = 0.0;
  double lat = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

using Ring = std::vector<Point>;

struct Polyline {
  std::vector<Point> points;

  friend bool operator==(const Polyline&, const Polyline&) = default;
};

struct Polygon {
  Ring outer;
  std::vector<Ring> holes;

  friend bool operator==(const Polygon&, const Polygon&) = default;
};

struct MultiPolygon {
  std::vector<Polygon> parts;

  friend bool operator==(const MultiPolygon&, const MultiPolygon&) = default;
};

using Shape = std::variant<Point, Polyline, Polygon, MultiPolygon>;

// Points closer than this to a polygon boundary count as inside.
inline constexpr double kBoundaryEpsilon = 1e-9;

// Station-to-stretch snapping radius, roughly 300 m at Iberian latitudes.
inline constexpr double kDefaultSnapTolerance = 0.003;

// Validation; each throws Error(InvalidArgument) describing the violation.
void validate(const Point& p);
void validate(const Polyline& line);
void validate(const Polygon& poly);
void validate(const Shape& shape);

bool point_in_polygon(Point p, const Polygon& poly);
bool point_in_multipolygon(Point p, const MultiPolygon& poly);

// Every outer vertex of `inner` lies in `outer` and no edge of `inner`
// properly crosses an edge of `outer`.
bool polygon_within(const Polygon& inner, const Polygon& outer);

// Each part of `inner` is within some part of `outer`.
bool multipolygon_within(const MultiPolygon& inner, const MultiPolygon& outer);

// True when the open segments ab and cd intersect transversally at a single
// interior point. Touching and collinear overlap are not crossings.
bool segments_cross(Point a, Point b, Point c, Point d);

double point_segment_distance(Point p, Point a, Point b);
double point_polyline_distance(Point p, const Polyline& line);

struct SnapResult {
  std::size_t segment = 0;
  double distance = 0.0;
};

// Nearest segment within `tolerance`; ties go to the lowest segment index.
std::optional<SnapResult> snap_point_to_polyline(Point p, const Polyline& line,
                                                 double tolerance);

// Signed shoelace area, positive for counter-clockwise rings.
double ring_area(std::span<const Point> ring);

// First vertex of lines and polygons; the point itself for points.
Point representative_point(const Shape& shape);

// Polygonal shapes viewed as a multipolygon; nullopt for points and lines.
std::optional<MultiPolygon> as_multipolygon(const Shape& shape);

}  // namespace hydrograph::geo
