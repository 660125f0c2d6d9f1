#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "pgm/core/executor.hpp"
#include "pgm/core/marginals.hpp"
#include "pgm/core/network.hpp"

namespace pgm {

struct TreeEdge {
  std::size_t a;  // a < b
  std::size_t b;
  std::vector<VarId> separator;
};

/// Static part of a junction tree, built once per network and shared by
/// every propagated copy.
struct JunctionTreeShape {
  std::vector<std::vector<VarId>> cliques;
  std::vector<std::vector<int>> clique_cards;
  std::vector<TreeEdge> edges;
  std::size_t root = 0;
  std::vector<int> level;
  /// Parent clique and the edge leading to it; parent[root] == root.
  std::vector<std::size_t> parent;
  std::vector<std::size_t> parent_edge;
  std::vector<std::vector<std::size_t>> children;
  /// Cliques grouped by depth from the root.
  std::vector<std::vector<std::size_t>> by_level;
  /// Clique receiving each CPT.
  std::vector<std::size_t> cpt_home;
  /// Smallest clique containing each variable (ties: lowest index) and the
  /// plan projecting it onto that variable.
  std::vector<std::size_t> var_home;
  std::vector<ProjectionPlan> var_plan;
  /// Projections of each edge's child and parent clique onto its separator.
  std::vector<ProjectionPlan> child_plan;
  std::vector<ProjectionPlan> parent_plan;
  /// Clique tables before evidence: the product of assigned CPTs.
  std::vector<PotentialTable> initial;
  std::vector<DiscreteVariable> variables;
};

/// Junction tree with Hugin-style two-phase propagation.
///
/// Evidence is absorbed by zeroing entries so every index map stays valid
/// across queries. Messages move level by level: during collect all cliques
/// of the deepest remaining level send at once, during distribute all
/// children of one level receive at once. A level with several cliques runs
/// them as parallel tasks; a lone clique parallelizes inside its table
/// kernels instead. Either way the arithmetic is the same, so results do not
/// depend on the worker count.
class JunctionTree {
 public:
  JunctionTree() = default;

  static JunctionTree build(const Network& net);

  const JunctionTreeShape& shape() const { return *shape_; }
  std::size_t clique_count() const { return shape_->cliques.size(); }
  const std::vector<PotentialTable>& clique_tables() const noexcept { return cliques_; }
  const std::vector<PotentialTable>& separator_tables() const noexcept { return separators_; }
  bool calibrated() const noexcept { return calibrated_; }

  /// Resets to the initial tables, absorbs evidence and calibrates.
  void propagate(const Evidence& evidence, const Executor& exec = serial_executor());

  /// Normalized marginal of var from its smallest containing clique.
  PotentialTable query(VarId var) const;
  MarginalSet marginals() const;

 private:
  std::shared_ptr<const JunctionTreeShape> shape_;
  std::vector<PotentialTable> cliques_;
  std::vector<PotentialTable> separators_;
  Evidence evidence_;
  bool calibrated_ = false;
};

JunctionTree build_junction_tree(const Network& net);
JunctionTree jt_propagate(const JunctionTree& tree, const Evidence& evidence,
                          const Executor& exec = serial_executor());
PotentialTable jt_query(const JunctionTree& tree, VarId var);

}  // namespace pgm
