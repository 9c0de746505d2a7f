#include "hydrograph/json_codec.hpp"

#include "hydrograph/error.hpp"

namespace hydrograph {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::BadGeoJson, what); }

geo::Point point_from(const json& c) {
  if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number()) {
    bad("position must be [lon, lat]");
  }
  return {c[0].get<double>(), c[1].get<double>()};
}

std::vector<geo::Point> points_from(const json& c) {
  if (!c.is_array()) bad("expected an array of positions");
  std::vector<geo::Point> out;
  out.reserve(c.size());
  for (const auto& p : c) out.push_back(point_from(p));
  return out;
}

geo::Polygon polygon_from(const json& c) {
  if (!c.is_array() || c.empty()) bad("polygon needs at least one ring");
  geo::Polygon poly;
  poly.outer = points_from(c[0]);
  for (std::size_t i = 1; i < c.size(); ++i) poly.holes.push_back(points_from(c[i]));
  return poly;
}

json point_to(geo::Point p) { return json::array({p.lon, p.lat}); }

json points_to(const std::vector<geo::Point>& pts) {
  json out = json::array();
  for (const auto& p : pts) out.push_back(point_to(p));
  return out;
}

json polygon_to(const geo::Polygon& poly) {
  json rings = json::array({points_to(poly.outer)});
  for (const auto& h : poly.holes) rings.push_back(points_to(h));
  return rings;
}

}  // namespace

geo::Shape shape_from_geojson(const json& g) {
  if (!g.is_object() || !g.contains("type") || !g["type"].is_string()) {
    bad("geometry object needs a type");
  }
  const std::string type = g["type"].get<std::string>();
  if (type != "Point" && type != "LineString" && type != "Polygon" && type != "MultiPolygon") {
    throw Error(ErrorCode::UnsupportedGeometry, "unsupported geometry type '" + type + "'");
  }
  if (!g.contains("coordinates")) bad(type + " without coordinates");
  const json& c = g["coordinates"];

  geo::Shape shape;
  if (type == "Point") {
    shape = point_from(c);
  } else if (type == "LineString") {
    shape = geo::Polyline{points_from(c)};
  } else if (type == "Polygon") {
    shape = polygon_from(c);
  } else {
    if (!c.is_array()) bad("MultiPolygon coordinates must be an array");
    geo::MultiPolygon multi;
    for (const auto& part : c) multi.parts.push_back(polygon_from(part));
    shape = std::move(multi);
  }
  try {
    geo::validate(shape);
  } catch (const Error& e) {
    bad(std::string("invalid ") + type + ": " + e.what());
  }
  return shape;
}

json shape_to_geojson(const geo::Shape& shape) {
  struct Visitor {
    json operator()(const geo::Point& p) const {
      return {{"type", "Point"}, {"coordinates", point_to(p)}};
    }
    json operator()(const geo::Polyline& l) const {
      return {{"type", "LineString"}, {"coordinates", points_to(l.points)}};
    }
    json operator()(const geo::Polygon& g) const {
      return {{"type", "Polygon"}, {"coordinates", polygon_to(g)}};
    }
    json operator()(const geo::MultiPolygon& m) const {
      json parts = json::array();
      for (const auto& p : m.parts) parts.push_back(polygon_to(p));
      return {{"type", "MultiPolygon"}, {"coordinates", parts}};
    }
  };
  return std::visit(Visitor{}, shape);
}

json prop_to_json(const PropValue& value) {
  struct Visitor {
    json operator()(const std::string& s) const { return s; }
    json operator()(std::int64_t i) const { return i; }
    json operator()(double d) const { return d; }
    json operator()(bool b) const { return b; }
    json operator()(Timestamp t) const { return {{"$ts", format_timestamp(t)}}; }
    json operator()(const GeometryRef& g) const { return {{"$geom", shape_to_geojson(*g.shape)}}; }
  };
  return std::visit(Visitor{}, value);
}

PropValue prop_from_json(const json& v) {
  switch (v.type()) {
    case json::value_t::string: return v.get<std::string>();
    case json::value_t::boolean: return v.get<bool>();
    case json::value_t::number_integer: return v.get<std::int64_t>();
    case json::value_t::number_unsigned: return static_cast<std::int64_t>(v.get<std::uint64_t>());
    case json::value_t::number_float: return v.get<double>();
    case json::value_t::object:
      if (v.size() == 1 && v.contains("$ts") && v["$ts"].is_string()) {
        return parse_timestamp(v["$ts"].get<std::string>());
      }
      if (v.size() == 1 && v.contains("$geom")) return GeometryRef(shape_from_geojson(v["$geom"]));
      break;
    default: break;
  }
  throw Error(ErrorCode::InvalidProperty, "unsupported property value " + v.dump());
}

json props_to_json(const PropertyMap& props) {
  json out = json::object();
  for (const auto& [k, v] : props) out[k] = prop_to_json(v);
  return out;
}

PropertyMap props_from_json(const json& object) {
  if (!object.is_object()) throw Error(ErrorCode::InvalidProperty, "props must be an object");
  PropertyMap out;
  for (const auto& [k, v] : object.items()) out.emplace(k, prop_from_json(v));
  return out;
}

json prop_to_plain_json(const PropValue& value) {
  if (const auto* t = std::get_if<Timestamp>(&value)) return format_timestamp(*t);
  if (const auto* g = std::get_if<GeometryRef>(&value)) return shape_to_geojson(*g->shape);
  return prop_to_json(value);
}

}  // namespace hydrograph
