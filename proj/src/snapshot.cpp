#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hydrograph/error.hpp"
#include "hydrograph/graph.hpp"
#include "hydrograph/json_codec.hpp"

namespace hydrograph {

namespace {

constexpr int kSnapshotVersion = 1;
constexpr const char* kSchemaName = "efma-1";

[[noreturn]] void corrupt(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::CorruptSnapshot, "line " + std::to_string(line) + ": " + what);
}

std::uint64_t id_field(const json& rec, const char* key, std::size_t line) {
  if (!rec.contains(key) || !rec[key].is_number_unsigned()) {
    corrupt(line, std::string("missing or invalid '") + key + "'");
  }
  return rec[key].get<std::uint64_t>();
}

}  // namespace

std::string snapshot_serialize(const Graph& graph) {
  std::string out;
  auto emit = [&](const json& rec) {
    out += rec.dump();
    out += '\n';
  };
  emit({{"kind", "header"},
        {"version", kSnapshotVersion},
        {"schema", kSchemaName},
        {"next_node", graph.next_node_id()},
        {"next_edge", graph.next_edge_id()}});
  for (NodeId id : graph.node_ids()) {
    const Node& n = graph.node(id);
    emit({{"kind", "node"},
          {"id", n.id.value},
          {"label", to_string(n.label)},
          {"props", props_to_json(n.props)}});
  }
  for (EdgeId id : graph.edge_ids()) {
    const Edge& e = graph.edge(id);
    emit({{"kind", "edge"},
          {"id", e.id.value},
          {"type", to_string(e.type)},
          {"src", e.source.value},
          {"dst", e.target.value},
          {"props", props_to_json(e.props)}});
  }
  for (NodeId id : graph.raster_nodes()) {
    const DemGrid& g = *graph.raster(id);
    emit({{"kind", "raster"},
          {"node", id.value},
          {"ncols", g.ncols},
          {"nrows", g.nrows},
          {"xll", g.xll},
          {"yll", g.yll},
          {"cellsize", g.cellsize},
          {"nodata", g.nodata},
          {"values", g.elevations}});
  }
  return out;
}

Graph snapshot_parse(std::string_view text) {
  Graph graph;
  std::size_t line_no = 0;
  bool seen_header = false;
  bool seen_edge = false;
  std::uint64_t next_node = 1;
  std::uint64_t next_edge = 1;

  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;

    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      corrupt(line_no, std::string("bad JSON: ") + e.what());
    }
    if (!rec.is_object() || !rec.contains("kind") || !rec["kind"].is_string()) {
      corrupt(line_no, "record without kind");
    }
    const std::string kind = rec["kind"].get<std::string>();

    try {
      if (!seen_header) {
        if (kind != "header" || rec.value("version", 0) != kSnapshotVersion ||
            rec.value("schema", std::string()) != kSchemaName) {
          corrupt(line_no, "bad snapshot header");
        }
        next_node = rec.value("next_node", std::uint64_t{1});
        next_edge = rec.value("next_edge", std::uint64_t{1});
        seen_header = true;
      } else if (kind == "node") {
        if (seen_edge) corrupt(line_no, "node record after edge records");
        const auto label = parse_node_label(rec.value("label", std::string()));
        if (!label) corrupt(line_no, "unknown label");
        graph.restore_node(Node{NodeId{id_field(rec, "id", line_no)}, *label,
                                props_from_json(rec.value("props", json::object()))});
      } else if (kind == "edge") {
        seen_edge = true;
        const auto type = parse_edge_type(rec.value("type", std::string()));
        if (!type) corrupt(line_no, "unknown edge type");
        graph.restore_edge(Edge{EdgeId{id_field(rec, "id", line_no)}, *type,
                                NodeId{id_field(rec, "src", line_no)},
                                NodeId{id_field(rec, "dst", line_no)},
                                props_from_json(rec.value("props", json::object()))});
      } else if (kind == "raster") {
        DemGrid g;
        g.ncols = rec.at("ncols").get<std::size_t>();
        g.nrows = rec.at("nrows").get<std::size_t>();
        g.xll = rec.at("xll").get<double>();
        g.yll = rec.at("yll").get<double>();
        g.cellsize = rec.at("cellsize").get<double>();
        g.nodata = rec.at("nodata").get<double>();
        g.elevations = rec.at("values").get<std::vector<double>>();
        graph.attach_raster(NodeId{id_field(rec, "node", line_no)}, std::move(g));
      } else {
        corrupt(line_no, "unknown record kind '" + kind + "'");
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::CorruptSnapshot) throw;
      corrupt(line_no, e.what());
    } catch (const json::exception& e) {
      corrupt(line_no, e.what());
    }
  }
  if (!seen_header) corrupt(line_no, "missing header");
  graph.reserve_ids(next_node, next_edge);
  return graph;
}

void snapshot_save(const Graph& graph, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot open '" + tmp + "' for writing");
    const std::string data = snapshot_serialize(graph);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error(ErrorCode::Io, "write to '" + tmp + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot replace '" + path + "': " + ec.message());
}

Graph snapshot_load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return snapshot_parse(buf.str());
}

}  // namespace hydrograph
