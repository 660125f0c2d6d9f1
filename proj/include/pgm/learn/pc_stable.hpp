#pragma once

#include <cstddef>

#include "pgm/core/executor.hpp"
#include "pgm/io/dataset.hpp"
#include "pgm/learn/pdag.hpp"

namespace pgm {

struct PcOptions {
  double alpha = 0.05;
  /// Largest conditioning-set size; negative means unlimited (n - 2).
  int max_depth = -1;
};

struct PcSkeleton {
  PdagGraph skeleton;
  SepsetMap sepsets;
  std::size_t ci_tests = 0;
  int levels = 0;
};

/// PC-stable adjacency search.
///
/// Adjacency sets are frozen at the start of every level, so each edge's
/// tests depend only on the snapshot. Edges are independent tasks on the
/// executor; removals are committed once the level finishes. Candidate
/// conditioning sets are enumerated in lexicographic order of variable
/// names, which makes the output invariant under relabeling of ids.
PcSkeleton pc_stable_skeleton(const Dataset& data, const PcOptions& options = {},
                              const Executor& exec = serial_executor());

}  // namespace pgm
