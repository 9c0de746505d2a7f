#include "hydrograph/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hydrograph/error.hpp"

namespace hydrograph::geo {

namespace {

// Ties closer than this are resolved by index order.
constexpr double kTieEpsilon = 1e-12;

void fail(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

double cross(Point o, Point a, Point b) {
  return (a.lon - o.lon) * (b.lat - o.lat) - (a.lat - o.lat) * (b.lon - o.lon);
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

void validate_ring(const Ring& ring) {
  if (ring.size() < 4) fail("polygon ring needs at least 4 points");
  if (ring.front() != ring.back()) fail("polygon ring is not closed");
  for (const auto& p : ring) validate(p);
  std::vector<Point> distinct(ring.begin(), ring.end() - 1);
  std::sort(distinct.begin(), distinct.end(), [](Point a, Point b) {
    return a.lon < b.lon || (a.lon == b.lon && a.lat < b.lat);
  });
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3) fail("polygon ring needs at least 3 distinct vertices");
}

bool near_ring_boundary(Point p, const Ring& ring) {
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    if (point_segment_distance(p, ring[i], ring[i + 1]) <= kBoundaryEpsilon) return true;
  }
  return false;
}

// Crossing-number parity test on a closed ring.
bool inside_ring(Point p, const Ring& ring) {
  bool inside = false;
  for (std::size_t i = 0, n = ring.size(); i + 1 < n; ++i) {
    const Point a = ring[i];
    const Point b = ring[i + 1];
    if ((a.lat > p.lat) != (b.lat > p.lat)) {
      const double x = a.lon + (p.lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat);
      if (p.lon < x) inside = !inside;
    }
  }
  return inside;
}

bool ring_crosses(const Ring& a, const Ring& b) {
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
      if (segments_cross(a[i], a[i + 1], b[j], b[j + 1])) return true;
    }
  }
  return false;
}

}  // namespace

void validate(const Point& p) {
  if (!std::isfinite(p.lon) || !std::isfinite(p.lat)) fail("non-finite coordinate");
  if (p.lon < -180.0 || p.lon > 180.0) fail("longitude out of range");
  if (p.lat < -90.0 || p.lat > 90.0) fail("latitude out of range");
}

void validate(const Polyline& line) {
  if (line.points.size() < 2) fail("polyline needs at least 2 points");
  for (std::size_t i = 0; i < line.points.size(); ++i) {
    validate(line.points[i]);
    if (i > 0 && line.points[i] == line.points[i - 1]) {
      fail("polyline has repeated consecutive points");
    }
  }
}

void validate(const Polygon& poly) {
  validate_ring(poly.outer);
  for (const auto& hole : poly.holes) validate_ring(hole);
}

void validate(const Shape& shape) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, MultiPolygon>) {
          if (s.parts.empty()) fail("multipolygon has no parts");
          for (const auto& part : s.parts) validate(part);
        } else {
          validate(s);
        }
      },
      shape);
}

bool point_in_polygon(Point p, const Polygon& poly) {
  if (near_ring_boundary(p, poly.outer)) return true;
  for (const auto& hole : poly.holes) {
    if (near_ring_boundary(p, hole)) return true;
  }
  if (!inside_ring(p, poly.outer)) return false;
  return std::none_of(poly.holes.begin(), poly.holes.end(),
                      [&](const Ring& hole) { return inside_ring(p, hole); });
}

bool point_in_multipolygon(Point p, const MultiPolygon& poly) {
  return std::any_of(poly.parts.begin(), poly.parts.end(),
                     [&](const Polygon& part) { return point_in_polygon(p, part); });
}

bool segments_cross(Point a, Point b, Point c, Point d) {
  const int d1 = sign(cross(a, b, c));
  const int d2 = sign(cross(a, b, d));
  const int d3 = sign(cross(c, d, a));
  const int d4 = sign(cross(c, d, b));
  return d1 * d2 < 0 && d3 * d4 < 0;
}

bool polygon_within(const Polygon& inner, const Polygon& outer) {
  for (std::size_t i = 0; i + 1 < inner.outer.size(); ++i) {
    if (!point_in_polygon(inner.outer[i], outer)) return false;
  }
  if (ring_crosses(inner.outer, outer.outer)) return false;
  auto on_inner_boundary = [&](Point v) {
    if (point_polyline_distance(v, Polyline{inner.outer}) <= kBoundaryEpsilon) return true;
    return std::any_of(inner.holes.begin(), inner.holes.end(), [&](const Ring& h) {
      return point_polyline_distance(v, Polyline{h}) <= kBoundaryEpsilon;
    });
  };
  return std::none_of(outer.holes.begin(), outer.holes.end(), [&](const Ring& hole) {
    if (ring_crosses(inner.outer, hole)) return true;
    // A hole strictly inside the inner polygon punctures it.
    return std::any_of(hole.begin(), hole.end(), [&](Point v) {
      return point_in_polygon(v, inner) && !on_inner_boundary(v);
    });
  });
}

bool multipolygon_within(const MultiPolygon& inner, const MultiPolygon& outer) {
  return std::all_of(inner.parts.begin(), inner.parts.end(), [&](const Polygon& a) {
    return std::any_of(outer.parts.begin(), outer.parts.end(),
                       [&](const Polygon& b) { return polygon_within(a, b); });
  });
}

double point_segment_distance(Point p, Point a, Point b) {
  const double dx = b.lon - a.lon;
  const double dy = b.lat - a.lat;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) {
    t = ((p.lon - a.lon) * dx + (p.lat - a.lat) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
  }
  return std::hypot(p.lon - (a.lon + t * dx), p.lat - (a.lat + t * dy));
}

double point_polyline_distance(Point p, const Polyline& line) {
  if (line.points.size() == 1) return point_segment_distance(p, line.points[0], line.points[0]);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < line.points.size(); ++i) {
    best = std::min(best, point_segment_distance(p, line.points[i], line.points[i + 1]));
  }
  return best;
}

std::optional<SnapResult> snap_point_to_polyline(Point p, const Polyline& line,
                                                 double tolerance) {
  if (!(tolerance > 0.0)) fail("snap tolerance must be positive");
  std::optional<SnapResult> best;
  for (std::size_t i = 0; i + 1 < line.points.size(); ++i) {
    const double d = point_segment_distance(p, line.points[i], line.points[i + 1]);
    if (d > tolerance) continue;
    if (!best || d < best->distance - kTieEpsilon) best = SnapResult{i, d};
  }
  return best;
}

double ring_area(std::span<const Point> ring) {
  double twice = 0.0;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    twice += ring[i].lon * ring[i + 1].lat - ring[i + 1].lon * ring[i].lat;
  }
  return 0.5 * twice;
}

Point representative_point(const Shape& shape) {
  struct Visitor {
    Point operator()(const Point& p) const { return p; }
    Point operator()(const Polyline& l) const { return l.points.front(); }
    Point operator()(const Polygon& g) const { return g.outer.front(); }
    Point operator()(const MultiPolygon& m) const { return m.parts.front().outer.front(); }
  };
  return std::visit(Visitor{}, shape);
}

std::optional<MultiPolygon> as_multipolygon(const Shape& shape) {
  if (const auto* poly = std::get_if<Polygon>(&shape)) return MultiPolygon{{*poly}};
  if (const auto* multi = std::get_if<MultiPolygon>(&shape)) return *multi;
  return std::nullopt;
}

}  // namespace hydrograph::geo
