#pragma once

#include <json.hpp>

#include "hydrograph/geometry.hpp"
#include "hydrograph/props.hpp"

namespace hydrograph {

using json = nlohmann::json;

// GeoJSON geometry objects (RFC 7946 subset: Point, LineString, Polygon,
// MultiPolygon). Other types throw Error(UnsupportedGeometry); malformed
// coordinates throw Error(BadGeoJson).
geo::Shape shape_from_geojson(const json& geometry);
json shape_to_geojson(const geo::Shape& shape);

// Property values keep their type through JSON: text, integers and floats map
// to JSON scalars, timestamps to {"$ts": "..."} and geometry to {"$geom": {...}}.
json prop_to_json(const PropValue& value);
PropValue prop_from_json(const json& value);
json props_to_json(const PropertyMap& props);
PropertyMap props_from_json(const json& object);

// Plain JSON view for API responses: timestamps as ISO strings, geometry as
// GeoJSON.
json prop_to_plain_json(const PropValue& value);

}  // namespace hydrograph
