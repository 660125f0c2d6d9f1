#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pgm/core/network.hpp"
#include "pgm/learn/pdag.hpp"

namespace pgm {

struct GraphDocument {
  std::vector<DiscreteVariable> variables;
  PdagGraph graph;
  /// True when the source held a DAG (structure, network or BIF) rather than a CPDAG.
  bool is_dag = false;
};

/// CPDAG with its separating sets (schema in docs/formats.md).
std::string write_cpdag_json(const std::vector<DiscreteVariable>& variables, const PdagGraph& graph,
                             const SepsetMap& sepsets);

/// Reads a pgm-cpdag, pgm-structure or pgm-network JSON document, or BIF text.
GraphDocument parse_graph_auto(std::string_view text);

/// Structure of a pgm-structure or pgm-network JSON document, or of BIF text.
DagStructure parse_structure_auto(std::string_view text);

/// Relabels g (over `from`) onto the ids of `to`, matching variables by name.
PdagGraph align_graph(const PdagGraph& g, const std::vector<DiscreteVariable>& from,
                      const std::vector<DiscreteVariable>& to);

}  // namespace pgm
