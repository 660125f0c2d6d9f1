#pragma once

#include <vector>

#include "pgm/core/executor.hpp"
#include "pgm/core/network.hpp"

namespace pgm {

/// Dense symmetric adjacency matrix.
using UndirectedGraph = std::vector<std::vector<char>>;

/// Moral graph: parents married, directions dropped.
UndirectedGraph moral_graph(const Network& net);

/// Greedy min-fill elimination of the vertices flagged in `eliminate`, ties
/// by lowest id. Fill edges are added as vertices go. When cliques is given,
/// it receives each eliminated vertex together with its remaining neighbors
/// (sorted).
std::vector<VarId> min_fill_order(UndirectedGraph graph, const std::vector<char>& eliminate,
                                  std::vector<std::vector<VarId>>* cliques = nullptr);

/// Min-fill order over the moral graph with evidence vertices deleted,
/// eliminating every variable that is neither a target nor observed.
std::vector<VarId> elimination_order(const Network& net, const std::vector<VarId>& targets,
                                     const Evidence& evidence = {});

/// Posterior P(query | evidence) by variable elimination. Evidence is
/// sliced into the CPTs up front and nodes that are not ancestors of the
/// query or the evidence are dropped. A query on an observed variable
/// returns the one-hot table.
PotentialTable variable_elimination(const Network& net, VarId query, const Evidence& evidence = {},
                                    const Executor& exec = serial_executor());

}  // namespace pgm
