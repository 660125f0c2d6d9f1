#include "pgm/io/graph_json.hpp"

#include <cctype>
#include <map>

#include <json.hpp>

#include "pgm/core/error.hpp"
#include "pgm/io/convert.hpp"
#include "pgm/io/network_json.hpp"

namespace pgm {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kCpdagFormat = "pgm-cpdag";

// The "format" field of a JSON document, or "" for non-JSON text.
std::string sniff_format(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i == text.size() || text[i] != '{') return "";
  try {
    const Json doc = Json::parse(text);
    return doc.value("format", "?");
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

std::string write_cpdag_json(const std::vector<DiscreteVariable>& variables, const PdagGraph& graph,
                             const SepsetMap& sepsets) {
  const auto name = [&](VarId v) { return variables.at(static_cast<std::size_t>(v)).name; };
  Json doc;
  doc["format"] = kCpdagFormat;
  doc["version"] = 1;
  Json vars = Json::array();
  for (const auto& v : variables) vars.push_back({{"name", v.name}, {"states", v.states}});
  doc["variables"] = std::move(vars);
  Json edges = Json::array();
  for (const auto& e : graph.edges()) {
    edges.push_back({{"from", name(e.from)}, {"to", name(e.to)}, {"directed", e.directed}});
  }
  doc["edges"] = std::move(edges);
  Json seps = Json::array();
  for (const auto& [pair, set] : sepsets.entries()) {
    Json given = Json::array();
    for (VarId z : set) given.push_back(name(z));
    seps.push_back({{"x", name(pair.first)}, {"y", name(pair.second)}, {"sepset", std::move(given)}});
  }
  doc["sepsets"] = std::move(seps);
  return doc.dump(2) + "\n";
}

DagStructure parse_structure_auto(std::string_view text) {
  const std::string format = sniff_format(text);
  if (format == "pgm-structure") return parse_structure_json(text);
  if (format.empty() || format == "pgm-network") return parse_network_auto(text).structure();
  throw Error(ErrorCode::kUnknownFormat, "expected a structure, network JSON or BIF document, got '" + format + "'");
}

GraphDocument parse_graph_auto(std::string_view text) {
  GraphDocument out;
  if (sniff_format(text) != kCpdagFormat) {
    DagStructure dag = parse_structure_auto(text);
    out.graph = PdagGraph::from_parents(dag.parents);
    out.variables = std::move(dag.variables);
    out.is_dag = true;
    return out;
  }
  try {
    const Json doc = Json::parse(text);
    std::map<std::string, VarId> index;
    for (const auto& jv : doc.at("variables")) {
      DiscreteVariable v;
      v.id = static_cast<VarId>(out.variables.size());
      v.name = jv.at("name").get<std::string>();
      v.states = jv.at("states").get<std::vector<std::string>>();
      index[v.name] = v.id;
      out.variables.push_back(std::move(v));
    }
    validate_variables(out.variables);
    out.graph = PdagGraph(out.variables.size());
    const auto lookup = [&](const std::string& name) {
      const auto it = index.find(name);
      if (it == index.end()) throw Error(ErrorCode::kParse, "unknown variable reference '" + name + "'");
      return it->second;
    };
    for (const auto& je : doc.at("edges")) {
      const VarId a = lookup(je.at("from").get<std::string>());
      const VarId b = lookup(je.at("to").get<std::string>());
      if (a == b || out.graph.adjacent(a, b)) throw Error(ErrorCode::kParse, "self-loop or duplicate edge");
      if (je.value("directed", false)) {
        out.graph.orient(a, b);
      } else {
        out.graph.add_undirected(a, b);
      }
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed cpdag document: ") + e.what());
  }
  return out;
}

PdagGraph align_graph(const PdagGraph& g, const std::vector<DiscreteVariable>& from,
                      const std::vector<DiscreteVariable>& to) {
  if (from.size() != to.size()) throw Error(ErrorCode::kVariableMismatch, "graphs have different variable sets");
  std::map<std::string, VarId> index;
  for (const auto& v : to) index[v.name] = v.id;
  std::vector<VarId> map(from.size());
  for (std::size_t v = 0; v < from.size(); ++v) {
    const auto it = index.find(from[v].name);
    if (it == index.end()) {
      throw Error(ErrorCode::kVariableMismatch, "variable '" + from[v].name + "' is missing from the other graph");
    }
    map[v] = it->second;
  }
  PdagGraph out(to.size());
  for (const auto& e : g.edges()) {
    const VarId a = map[static_cast<std::size_t>(e.from)];
    const VarId b = map[static_cast<std::size_t>(e.to)];
    if (e.directed) {
      out.orient(a, b);
    } else {
      out.add_undirected(a, b);
    }
  }
  return out;
}

}  // namespace pgm
