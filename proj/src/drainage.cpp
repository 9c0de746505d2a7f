#include "hydrograph/drainage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>

#include "hydrograph/error.hpp"
#include "hydrograph/watersheds.hpp"

namespace hydrograph {

namespace {

constexpr Offset kOffsets[9] = {{0, 0},  {0, 1},  {1, 1},   {1, 0}, {1, -1},
                                {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}};

bool neighbour(std::size_t nrows, std::size_t ncols, std::size_t i, Offset o, std::size_t& out) {
  const auto r = static_cast<long long>(i / ncols) + o.drow;
  const auto c = static_cast<long long>(i % ncols) + o.dcol;
  if (r < 0 || c < 0 || r >= static_cast<long long>(nrows) || c >= static_cast<long long>(ncols)) {
    return false;
  }
  out = static_cast<std::size_t>(r) * ncols + static_cast<std::size_t>(c);
  return true;
}

bool index_increasing(FlowDir d) {
  return d == FlowDir::E || d == FlowDir::S || d == FlowDir::SE || d == FlowDir::SW;
}

}  // namespace

Offset offset(FlowDir dir) noexcept {
  const auto v = static_cast<int>(dir);
  return v >= 1 && v <= 8 ? kOffsets[v] : Offset{0, 0};
}

bool is_diagonal(FlowDir dir) noexcept {
  return dir == FlowDir::SE || dir == FlowDir::SW || dir == FlowDir::NW || dir == FlowDir::NE;
}

std::optional<std::size_t> FlowDirGrid::downstream(std::size_t i) const noexcept {
  const FlowDir d = dirs[i];
  if (d == FlowDir::Outlet || d == FlowDir::Nodata) return std::nullopt;
  std::size_t j = 0;
  if (!neighbour(nrows, ncols, i, offset(d), j)) return std::nullopt;
  return j;
}

DemGrid fill_depressions(const DemGrid& dem) {
  validate(dem);
  DemGrid out = dem;
  const std::size_t n = out.size();
  std::vector<char> closed(n, 0);

  struct Item {
    double z;
    std::uint64_t order;
    std::size_t cell;
    bool operator>(const Item& o) const { return z > o.z || (z == o.z && order > o.order); }
  };
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  std::uint64_t order = 0;

  bool any_data = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (out.is_nodata(i)) continue;
    any_data = true;
    const std::size_t r = i / out.ncols;
    const std::size_t c = i % out.ncols;
    bool seed = r == 0 || c == 0 || r + 1 == out.nrows || c + 1 == out.ncols;
    for (int k = 1; k <= 8 && !seed; ++k) {
      std::size_t j = 0;
      if (neighbour(out.nrows, out.ncols, i, kOffsets[k], j) && out.is_nodata(j)) seed = true;
    }
    if (seed) {
      closed[i] = 1;
      open.push({out.elevations[i], order++, i});
    }
  }
  if (!any_data) throw Error(ErrorCode::AllNodata, "DEM has no data cells");

  while (!open.empty()) {
    const Item top = open.top();
    open.pop();
    const double raised = std::nextafter(out.elevations[top.cell], std::numeric_limits<double>::infinity());
    for (int k = 1; k <= 8; ++k) {
      std::size_t j = 0;
      if (!neighbour(out.nrows, out.ncols, top.cell, kOffsets[k], j)) continue;
      if (closed[j] || out.is_nodata(j)) continue;
      closed[j] = 1;
      if (out.elevations[j] <= raised) out.elevations[j] = raised;
      open.push({out.elevations[j], order++, j});
    }
  }
  return out;
}

FlowDirGrid flow_direction_d8(const DemGrid& dem) {
  validate(dem);
  FlowDirGrid out{dem.ncols, dem.nrows, std::vector<FlowDir>(dem.size(), FlowDir::Nodata)};
  const double diag = std::sqrt(2.0) * dem.cellsize;

  for (std::size_t i = 0; i < dem.size(); ++i) {
    if (dem.is_nodata(i)) continue;
    const double z = dem.elevations[i];
    double best_slope = -std::numeric_limits<double>::infinity();
    FlowDir best = FlowDir::Outlet;
    bool best_is_exit = true;

    for (FlowDir d : kTieOrder) {
      std::size_t j = 0;
      const bool in_grid = neighbour(dem.nrows, dem.ncols, i, offset(d), j);
      const bool exit = !in_grid || dem.is_nodata(j);
      const double slope = exit ? 0.0 : (z - dem.elevations[j]) / (is_diagonal(d) ? diag : dem.cellsize);
      const bool admissible = slope > 0.0 || (slope == 0.0 && (exit || index_increasing(d)));
      if (admissible && slope > best_slope) {
        best_slope = slope;
        best = d;
        best_is_exit = exit;
      }
    }
    out.dirs[i] = best_is_exit ? FlowDir::Outlet : best;
  }
  return out;
}

AccumGrid flow_accumulation(const FlowDirGrid& dirs) {
  const std::size_t n = dirs.size();
  AccumGrid acc{dirs.ncols, dirs.nrows, std::vector<std::uint64_t>(n, 0)};
  std::vector<std::uint32_t> indegree(n, 0);
  std::size_t valid = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (dirs.dirs[i] == FlowDir::Nodata) continue;
    ++valid;
    acc.counts[i] = 1;
    if (auto d = dirs.downstream(i)) {
      if (dirs.dirs[*d] == FlowDir::Nodata) {
        throw Error(ErrorCode::CycleDetected, "flow into a nodata cell");
      }
      ++indegree[*d];
    }
  }
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (dirs.dirs[i] != FlowDir::Nodata && indegree[i] == 0) ready.push_back(i);
  }
  std::size_t processed = 0;
  while (!ready.empty()) {
    const std::size_t i = ready.back();
    ready.pop_back();
    ++processed;
    if (auto d = dirs.downstream(i)) {
      acc.counts[*d] += acc.counts[i];
      if (--indegree[*d] == 0) ready.push_back(*d);
    }
  }
  if (processed != valid) {
    throw Error(ErrorCode::CycleDetected,
                std::to_string(valid - processed) + " cells lie on or above a flow cycle");
  }
  return acc;
}

std::string write_flowdir_grid(const DemGrid& frame, const FlowDirGrid& dirs) {
  std::vector<int> codes(dirs.size());
  std::transform(dirs.dirs.begin(), dirs.dirs.end(), codes.begin(),
                 [](FlowDir d) { return static_cast<int>(d); });
  return write_ascii_grid(frame, codes, -1);
}

std::size_t StreamNetwork::flows_to_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(stretches.begin(), stretches.end(),
                                                [](const Stretch& s) { return s.downstream.has_value(); }));
}

StreamNetwork compute_stream_network(const DemGrid& frame, const FlowDirGrid& dirs,
                                     const AccumGrid& acc, std::uint64_t threshold) {
  if (threshold == 0) throw Error(ErrorCode::InvalidArgument, "threshold must be at least 1");
  const std::size_t n = dirs.size();
  std::vector<char> stream(n, 0);
  for (std::size_t i = 0; i < n; ++i) stream[i] = acc.counts[i] >= threshold;

  std::vector<std::uint32_t> inflows(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!stream[i]) continue;
    if (auto d = dirs.downstream(i)) ++inflows[*d];
  }

  StreamNetwork net;
  std::vector<std::size_t> stretch_of_head(n, std::numeric_limits<std::size_t>::max());
  std::vector<std::optional<std::size_t>> receiver_cell;
  for (std::size_t head = 0; head < n; ++head) {
    if (!stream[head] || inflows[head] == 1) continue;
    Stretch s;
    std::size_t cur = head;
    s.cells.push_back(cur);
    std::optional<std::size_t> next = dirs.downstream(cur);
    while (next && inflows[*next] == 1) {
      cur = *next;
      s.cells.push_back(cur);
      next = dirs.downstream(cur);
    }
    stretch_of_head[head] = net.stretches.size();
    receiver_cell.push_back(next);
    net.stretches.push_back(std::move(s));
  }

  for (std::size_t k = 0; k < net.stretches.size(); ++k) {
    Stretch& s = net.stretches[k];
    for (std::size_t cell : s.cells) s.line.points.push_back(frame.cell_center(frame.cell(cell)));
    if (receiver_cell[k]) {
      s.downstream = stretch_of_head[*receiver_cell[k]];
      s.line.points.push_back(frame.cell_center(frame.cell(*receiver_cell[k])));
    }
    if (s.line.points.size() == 1) {
      const geo::Point p = s.line.points.front();
      s.line.points.push_back({p.lon + 0.5 * frame.cellsize, p.lat});
    }
  }
  return net;
}

IngestReport store_stream_network(Graph& graph, const StreamNetwork& network,
                                  std::string_view id_prefix, std::string_view system_id) {
  IngestReport report;
  report.kind = FileKind::DemAsciiGrid;
  std::vector<std::optional<NodeId>> nodes(network.stretches.size());
  for (std::size_t k = 0; k < network.stretches.size(); ++k) {
    const Stretch& s = network.stretches[k];
    const std::string id = std::string(id_prefix) + "S" + std::to_string(k + 1);
    if (auto existing = graph.find_by_domain_id(NodeLabel::WaterStretch, id)) {
      nodes[k] = existing;
      ++report.rows_skipped;
      continue;
    }
    nodes[k] = graph.create_node(NodeLabel::WaterStretch,
                                 {{"id", id},
                                  {"geometry", GeometryRef(s.line)},
                                  {"cells", static_cast<std::int64_t>(s.cells.size())},
                                  {"system", std::string(system_id)}});
    ++report.nodes_created;
  }
  for (std::size_t k = 0; k < network.stretches.size(); ++k) {
    const auto& down = network.stretches[k].downstream;
    if (!down) continue;
    if (graph.has_edge(EdgeType::FLOWS_TO, *nodes[k], *nodes[*down])) continue;
    graph.create_edge(EdgeType::FLOWS_TO, *nodes[k], *nodes[*down]);
    ++report.edges_created;
  }
  return report;
}

IngestReport extract_stream_network(Graph& graph, const DemGrid& frame, const FlowDirGrid& dirs,
                                    const AccumGrid& acc, std::uint64_t threshold, NodeId system) {
  const StreamNetwork net = compute_stream_network(frame, dirs, acc, threshold);
  const std::string prefix = "t" + std::to_string(threshold) + "/";
  return store_stream_network(graph, net, prefix, domain_id(graph.node(system)));
}

namespace {

// Lattice headings, counter-clockwise: east, north, west, south.
enum Heading { kEast = 0, kNorth = 1, kWest = 2, kSouth = 3 };

struct BoundaryEdge {
  std::size_t from;
  std::size_t to;
  int heading;
  bool used = false;
};

geo::Polygon trace_boundary(const DemGrid& frame, const std::vector<char>& in_set) {
  const std::size_t nc = frame.ncols;
  const std::size_t stride = nc + 1;
  auto vertex = [&](std::size_t r, std::size_t c) { return r * stride + c; };
  auto member = [&](long long r, long long c) {
    return r >= 0 && c >= 0 && r < static_cast<long long>(frame.nrows) &&
           c < static_cast<long long>(nc) && in_set[static_cast<std::size_t>(r) * nc + static_cast<std::size_t>(c)];
  };

  // Interior stays on the left when walking each edge.
  std::vector<BoundaryEdge> edges;
  for (std::size_t r = 0; r < frame.nrows; ++r) {
    for (std::size_t c = 0; c < nc; ++c) {
      if (!in_set[r * nc + c]) continue;
      const auto rr = static_cast<long long>(r);
      const auto cc = static_cast<long long>(c);
      if (!member(rr + 1, cc)) edges.push_back({vertex(r + 1, c), vertex(r + 1, c + 1), kEast});
      if (!member(rr, cc + 1)) edges.push_back({vertex(r + 1, c + 1), vertex(r, c + 1), kNorth});
      if (!member(rr - 1, cc)) edges.push_back({vertex(r, c + 1), vertex(r, c), kWest});
      if (!member(rr, cc - 1)) edges.push_back({vertex(r, c), vertex(r + 1, c), kSouth});
    }
  }
  std::multimap<std::size_t, std::size_t> outgoing;
  for (std::size_t e = 0; e < edges.size(); ++e) outgoing.emplace(edges[e].from, e);

  auto next_edge = [&](std::size_t at, int heading) -> std::optional<std::size_t> {
    // Right turn first so diagonally touching cells share one ring.
    for (int turn : {3, 0, 1}) {
      const int want = (heading + turn) % 4;
      auto [lo, hi] = outgoing.equal_range(at);
      for (auto it = lo; it != hi; ++it) {
        if (!edges[it->second].used && edges[it->second].heading == want) return it->second;
      }
    }
    return std::nullopt;
  };

  std::vector<geo::Ring> rings;
  for (std::size_t start = 0; start < edges.size(); ++start) {
    if (edges[start].used) continue;
    std::vector<std::size_t> verts;
    std::vector<int> headings;
    std::size_t e = start;
    while (true) {
      edges[e].used = true;
      verts.push_back(edges[e].from);
      headings.push_back(edges[e].heading);
      const auto nxt = next_edge(edges[e].to, edges[e].heading);
      if (!nxt) break;
      e = *nxt;
    }
    geo::Ring ring;
    for (std::size_t k = 0; k < verts.size(); ++k) {
      const int prev = headings[(k + headings.size() - 1) % headings.size()];
      if (prev == headings[k]) continue;  // collinear
      ring.push_back(frame.corner(verts[k] / stride, verts[k] % stride));
    }
    ring.push_back(ring.front());
    rings.push_back(std::move(ring));
  }

  geo::Polygon poly;
  double best = 0.0;
  std::size_t outer = 0;
  for (std::size_t k = 0; k < rings.size(); ++k) {
    const double a = geo::ring_area(rings[k]);
    if (a > best) {
      best = a;
      outer = k;
    }
  }
  for (std::size_t k = 0; k < rings.size(); ++k) {
    if (k == outer) {
      poly.outer = rings[k];
    } else if (geo::ring_area(rings[k]) < 0.0) {
      poly.holes.push_back(rings[k]);
    }
  }
  return poly;
}

}  // namespace

WatershedCells delineate_watershed(const DemGrid& frame, const FlowDirGrid& dirs, CellIndex pour) {
  if (pour.row >= dirs.nrows || pour.col >= dirs.ncols) {
    throw Error(ErrorCode::OutOfBounds, "pour point outside the grid");
  }
  const std::size_t start = dirs.index(pour);
  if (dirs.dirs[start] == FlowDir::Nodata) {
    throw Error(ErrorCode::OutOfBounds, "pour point on a nodata cell");
  }
  const std::size_t n = dirs.size();
  std::vector<char> in_set(n, 0);
  in_set[start] = 1;
  std::vector<std::size_t> stack{start};
  while (!stack.empty()) {
    const std::size_t cur = stack.back();
    stack.pop_back();
    for (int k = 1; k <= 8; ++k) {
      std::size_t j = 0;
      if (!neighbour(dirs.nrows, dirs.ncols, cur, kOffsets[k], j) || in_set[j]) continue;
      if (dirs.downstream(j) == cur) {
        in_set[j] = 1;
        stack.push_back(j);
      }
    }
  }
  WatershedCells out;
  for (std::size_t i = 0; i < n; ++i) {
    if (in_set[i]) out.cells.push_back({i / dirs.ncols, i % dirs.ncols});
  }
  out.boundary = trace_boundary(frame, in_set);
  return out;
}

namespace {

struct Box {
  double minx, miny, maxx, maxy;
  bool near(geo::Point p, double tol) const {
    return p.lon >= minx - tol && p.lon <= maxx + tol && p.lat >= miny - tol && p.lat <= maxy + tol;
  }
};

Box bounds(const geo::Polyline& l) {
  Box b{l.points[0].lon, l.points[0].lat, l.points[0].lon, l.points[0].lat};
  for (const auto& p : l.points) {
    b.minx = std::min(b.minx, p.lon);
    b.maxx = std::max(b.maxx, p.lon);
    b.miny = std::min(b.miny, p.lat);
    b.maxy = std::max(b.maxy, p.lat);
  }
  return b;
}

std::optional<geo::Point> node_point(const Node& n) {
  if (const auto* g = get_prop<GeometryRef>(n.props, "geometry"); g && g->shape) {
    return geo::representative_point(*g->shape);
  }
  const auto lon = get_number(n.props, "lon");
  const auto lat = get_number(n.props, "lat");
  if (lon && lat) return geo::Point{*lon, *lat};
  return std::nullopt;
}

}  // namespace

std::size_t link_stations_to_stretches(Graph& graph, double tolerance,
                                       std::vector<std::string>* warnings) {
  if (!(tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  struct Line {
    NodeId id;
    const geo::Polyline* line;
    Box box;
  };
  std::vector<Line> lines;
  for (NodeId id : graph.find_nodes(NodeLabel::WaterStretch)) {
    const auto* g = get_prop<GeometryRef>(graph.node(id).props, "geometry");
    if (!g || !g->shape) continue;
    if (const auto* l = std::get_if<geo::Polyline>(g->shape.get())) lines.push_back({id, l, bounds(*l)});
  }

  std::size_t created = 0;
  for (NodeId station : graph.find_nodes(NodeLabel::QualityStation)) {
    const auto p = node_point(graph.node(station));
    if (!p) continue;
    std::optional<NodeId> best;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& l : lines) {
      if (!l.box.near(*p, tolerance)) continue;
      const double d = geo::point_polyline_distance(*p, *l.line);
      if (d <= tolerance && d < best_d - 1e-12) {
        best_d = d;
        best = l.id;
      }
    }
    if (!best) {
      if (warnings) {
        warnings->push_back("station '" + domain_id(graph.node(station)) +
                            "' is not within tolerance of any stretch");
      }
      continue;
    }
    if (graph.has_edge(EdgeType::MONITORED_BY, *best, station)) continue;
    graph.create_edge(EdgeType::MONITORED_BY, *best, station);
    ++created;
  }
  return created;
}

std::size_t compute_within_edges(Graph& graph, std::vector<std::string>* warnings) {
  const WatershedIndex index(graph);
  std::size_t created = 0;
  for (NodeLabel label : {NodeLabel::QualityStation, NodeLabel::WaterNode, NodeLabel::WaterStretch,
                          NodeLabel::LandUse}) {
    for (NodeId id : graph.find_nodes(label)) {
      const auto p = node_point(graph.node(id));
      if (!p) continue;
      const auto hits = index.innermost(*p);
      if (hits.empty() && warnings) {
        warnings->push_back(std::string(to_string(label)) + " '" + domain_id(graph.node(id)) +
                            "' lies outside every watershed");
      }
      for (NodeId w : hits) {
        if (graph.has_edge(EdgeType::WITHIN, id, w)) continue;
        graph.create_edge(EdgeType::WITHIN, id, w);
        ++created;
      }
    }
  }
  return created;
}

DrainageComputation compute_drainage(const DemGrid& dem, std::uint64_t threshold) {
  if (threshold == 0) throw Error(ErrorCode::InvalidArgument, "threshold must be at least 1");
  DrainageComputation out;
  out.threshold = threshold;
  out.filled = fill_depressions(dem);
  out.dirs = flow_direction_d8(out.filled);
  out.acc = flow_accumulation(out.dirs);
  out.network = compute_stream_network(out.filled, out.dirs, out.acc, threshold);
  return out;
}

DrainageReport apply_drainage(Graph& graph, NodeId dem_node, const DrainageComputation& result,
                              double snap_tolerance) {
  const Node& dem = graph.node(dem_node);
  if (dem.label != NodeLabel::DEM) throw Error(ErrorCode::InvalidArgument, "not a DEM node");
  const std::string dem_id = domain_id(dem);
  std::string system_id;
  if (const auto* s = get_prop<std::string>(dem.props, "system")) system_id = *s;
  if (!system_id.empty()) ensure_water_system(graph, system_id);

  DrainageReport report;
  store_stream_network(graph, result.network,
                       dem_id + "/t" + std::to_string(result.threshold) + "/", system_id);
  report.stretches = result.network.stretches.size();
  report.flows_to = result.network.flows_to_count();
  report.monitored_by = link_stations_to_stretches(graph, snap_tolerance, &report.warnings);
  report.within = compute_within_edges(graph, &report.warnings);
  return report;
}

}  // namespace hydrograph
