#pragma once

#include <string>
#include <string_view>

#include "pgm/core/network.hpp"

namespace pgm {

enum class NetworkFormat { kBif, kDot, kJson };

/// Accepts "bif", "dot" and "json"; anything else is kUnknownFormat.
NetworkFormat parse_network_format(std::string_view id);

/// DOT digraph of the DAG, one `A -> B;` line per edge.
std::string write_dot(const Network& net);

std::string convert(const Network& net, NetworkFormat target);
std::string convert(const Network& net, std::string_view target);

/// Loads a BIF or network-JSON document, sniffing the content.
Network parse_network_auto(std::string_view text);

}  // namespace pgm
