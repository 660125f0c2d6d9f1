#pragma once

#include <vector>

#include "pgm/learn/pc_stable.hpp"
#include "pgm/learn/pdag.hpp"

namespace pgm {

/// Orients x -> z <- y for every unshielded triple x - z - y whose sepset
/// lacks z. Triples are visited in lexicographic (x, y, z) order and a later
/// triple overwrites an earlier orientation. A missing sepset counts as empty.
PdagGraph orient_v_structures(const PdagGraph& skeleton, const SepsetMap& sepsets);

/// Applies Meek rules R1-R4 until no rule fires.
PdagGraph apply_meek_rules(PdagGraph g);

/// Dor-Tarsi extension of a PDAG to a DAG in its class. Returns sorted
/// parent lists. Among admissible sinks the highest id is removed first, so
/// free edges point from the lower id to the higher id.
std::vector<std::vector<VarId>> extend_to_dag(const PdagGraph& pdag);

/// CPDAG of a DAG: v-structure edges stay directed, Meek rules finish the rest.
PdagGraph dag_to_cpdag(const std::vector<std::vector<VarId>>& parents);

struct PcResult {
  PcSkeleton search;
  PdagGraph cpdag;
  std::vector<std::vector<VarId>> dag_parents;
};

/// Skeleton search, v-structures, Meek rules and DAG extension in sequence.
PcResult learn_structure(const Dataset& data, const PcOptions& options = {},
                         const Executor& exec = serial_executor());

}  // namespace pgm
