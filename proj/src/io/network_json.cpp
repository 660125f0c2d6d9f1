#include "pgm/io/network_json.hpp"

#include <map>

#include <json.hpp>

#include "pgm/core/error.hpp"

namespace pgm {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kNetworkFormat = "pgm-network";
constexpr const char* kStructureFormat = "pgm-structure";

Json parse_document(std::string_view text, const char* expected_format) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != expected_format) {
    throw Error(ErrorCode::kParse, std::string("expected a JSON document with format '") + expected_format + "'");
  }
  return doc;
}

// Reads variables and parent lists shared by both document kinds.
DagStructure read_structure(const Json& doc) {
  DagStructure dag;
  try {
    const auto& vars = doc.at("variables");
    std::map<std::string, VarId> index;
    for (const auto& jv : vars) {
      DiscreteVariable v;
      v.id = static_cast<VarId>(dag.variables.size());
      v.name = jv.at("name").get<std::string>();
      v.states = jv.at("states").get<std::vector<std::string>>();
      index[v.name] = v.id;
      dag.variables.push_back(std::move(v));
    }
    for (const auto& jv : vars) {
      std::vector<VarId> parents;
      for (const auto& p : jv.value("parents", Json::array())) {
        const auto name = p.get<std::string>();
        const auto it = index.find(name);
        if (it == index.end()) throw Error(ErrorCode::kParse, "unknown variable reference '" + name + "'");
        parents.push_back(it->second);
      }
      dag.parents.push_back(std::move(parents));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed document: ") + e.what());
  }
  validate_variables(dag.variables);
  if (!topological_order(dag.parents)) throw Error(ErrorCode::kParse, "cyclic parent structure");
  return dag;
}

Json variable_header(const DiscreteVariable& v, const std::vector<VarId>& parents,
                     const std::vector<DiscreteVariable>& all) {
  Json jv;
  jv["name"] = v.name;
  jv["states"] = v.states;
  Json jp = Json::array();
  for (VarId p : parents) jp.push_back(all[static_cast<std::size_t>(p)].name);
  jv["parents"] = std::move(jp);
  return jv;
}

}  // namespace

std::string write_network_json(const Network& net) {
  Json doc;
  doc["format"] = kNetworkFormat;
  doc["version"] = 1;
  doc["name"] = net.name();
  Json vars = Json::array();
  for (const auto& v : net.variables()) {
    Json jv = variable_header(v, net.parents(v.id), net.variables());
    const auto rows = net.cpt_rows(v.id);
    const auto card = static_cast<std::size_t>(v.cardinality());
    Json cpt = Json::array();
    for (std::size_t r = 0; r < rows.size(); r += card) {
      cpt.push_back(std::vector<double>(rows.begin() + static_cast<std::ptrdiff_t>(r),
                                        rows.begin() + static_cast<std::ptrdiff_t>(r + card)));
    }
    jv["cpt"] = std::move(cpt);
    vars.push_back(std::move(jv));
  }
  doc["variables"] = std::move(vars);
  return doc.dump(2) + "\n";
}

Network parse_network_json(std::string_view text) {
  const Json doc = parse_document(text, kNetworkFormat);
  DagStructure dag = read_structure(doc);
  std::vector<std::vector<double>> rows;
  try {
    for (const auto& jv : doc.at("variables")) {
      std::vector<double> flat;
      for (const auto& row : jv.at("cpt")) {
        for (const auto& p : row) flat.push_back(p.get<double>());
      }
      rows.push_back(std::move(flat));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed cpt: ") + e.what());
  }
  try {
    return Network::from_rows(doc.value("name", "unknown"), std::move(dag.variables), std::move(dag.parents), rows);
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
}

std::string write_structure_json(const DagStructure& dag) {
  Json doc;
  doc["format"] = kStructureFormat;
  doc["version"] = 1;
  Json vars = Json::array();
  for (std::size_t v = 0; v < dag.variables.size(); ++v) {
    vars.push_back(variable_header(dag.variables[v], dag.parents[v], dag.variables));
  }
  doc["variables"] = std::move(vars);
  return doc.dump(2) + "\n";
}

DagStructure parse_structure_json(std::string_view text) {
  return read_structure(parse_document(text, kStructureFormat));
}

}  // namespace pgm
