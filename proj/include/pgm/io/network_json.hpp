#pragma once

#include <string>
#include <string_view>

#include "pgm/core/network.hpp"

namespace pgm {

/// Lossless JSON form of a network (schema in docs/formats.md).
std::string write_network_json(const Network& net);
Network parse_network_json(std::string_view text);

/// Structure-only JSON (variables, states, parents) as written by structure learning.
std::string write_structure_json(const DagStructure& dag);
DagStructure parse_structure_json(std::string_view text);

}  // namespace pgm
