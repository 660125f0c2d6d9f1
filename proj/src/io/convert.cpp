#include "pgm/io/convert.hpp"

#include <cctype>
#include <sstream>

#include "pgm/core/error.hpp"
#include "pgm/io/bif.hpp"
#include "pgm/io/network_json.hpp"

namespace pgm {

namespace {

std::string dot_id(const std::string& name) {
  bool plain = !name.empty() && !std::isdigit(static_cast<unsigned char>(name[0]));
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') plain = false;
  }
  if (plain) return name;
  std::string quoted = "\"";
  for (char c : name) {
    if (c == '"' || c == '\\') quoted += '\\';
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace

NetworkFormat parse_network_format(std::string_view id) {
  if (id == "bif") return NetworkFormat::kBif;
  if (id == "dot") return NetworkFormat::kDot;
  if (id == "json") return NetworkFormat::kJson;
  throw Error(ErrorCode::kUnknownFormat, "unknown target format '" + std::string(id) + "' (expected bif, dot or json)");
}

std::string write_dot(const Network& net) {
  std::ostringstream out;
  out << "digraph " << dot_id(net.name().empty() ? "network" : net.name()) << " {\n";
  for (const auto& v : net.variables()) out << "  " << dot_id(v.name) << ";\n";
  for (const auto& v : net.variables()) {
    for (VarId p : net.parents(v.id)) {
      out << "  " << dot_id(net.variable(p).name) << " -> " << dot_id(v.name) << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string convert(const Network& net, NetworkFormat target) {
  switch (target) {
    case NetworkFormat::kBif: return write_bif(net);
    case NetworkFormat::kDot: return write_dot(net);
    case NetworkFormat::kJson: return write_network_json(net);
  }
  throw Error(ErrorCode::kUnknownFormat, "unknown target format");
}

std::string convert(const Network& net, std::string_view target) {
  return convert(net, parse_network_format(target));
}

Network parse_network_auto(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i < text.size() && text[i] == '{') return parse_network_json(text);
  return parse_bif(text);
}

}  // namespace pgm
