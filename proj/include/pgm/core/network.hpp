#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pgm/core/potential_table.hpp"
#include "pgm/core/types.hpp"

namespace pgm {

/// Graph part of a Bayesian network: variables plus ordered parent lists.
struct DagStructure {
  std::vector<DiscreteVariable> variables;
  std::vector<std::vector<VarId>> parents;
};

/// Returns a topological order (ties by lowest id) or nullopt when cyclic.
std::optional<std::vector<VarId>> topological_order(const std::vector<std::vector<VarId>>& parents);

/// A discrete Bayesian network: a DAG plus one CPT per node.
///
/// CPTs are stored as canonical PotentialTables over {node} ∪ parents. The
/// declared parent order is kept separately because file formats list rows
/// in that order.
class Network {
 public:
  Network() = default;
  Network(std::string name, std::vector<DiscreteVariable> variables,
          std::vector<std::vector<VarId>> parents, std::vector<PotentialTable> cpts);

  /// Builds CPTs from rows in declared-parent order: one row per parent
  /// configuration (row-major over declared parents, last parent fastest),
  /// each row listing the node's states.
  static Network from_rows(std::string name, std::vector<DiscreteVariable> variables,
                           std::vector<std::vector<VarId>> parents,
                           const std::vector<std::vector<double>>& rows_per_node);

  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return variables_.size(); }
  const std::vector<DiscreteVariable>& variables() const noexcept { return variables_; }
  const DiscreteVariable& variable(VarId id) const { return variables_.at(static_cast<std::size_t>(id)); }
  const std::vector<VarId>& parents(VarId id) const { return parents_.at(static_cast<std::size_t>(id)); }
  const std::vector<std::vector<VarId>>& all_parents() const noexcept { return parents_; }
  const PotentialTable& cpt(VarId id) const { return cpts_.at(static_cast<std::size_t>(id)); }
  const std::vector<PotentialTable>& cpts() const noexcept { return cpts_; }
  const std::vector<VarId>& topological_order() const noexcept { return topo_; }
  std::vector<VarId> children(VarId id) const;

  std::optional<VarId> find(const std::string& name) const;
  DagStructure structure() const { return {variables_, parents_}; }

  /// CPT of a node laid out as declared-parent-order rows (see from_rows).
  std::vector<double> cpt_rows(VarId id) const;

 private:
  std::string name_;
  std::vector<DiscreteVariable> variables_;
  std::vector<std::vector<VarId>> parents_;
  std::vector<PotentialTable> cpts_;
  std::vector<VarId> topo_;
};

/// Tolerance used when validating that every CPT row sums to one.
inline constexpr double kCptRowTolerance = 1e-9;

/// Maps between a family's declared-row layout and its canonical table.
/// Entry k of the returned vector is the canonical flat index of declared
/// entry k.
std::vector<std::size_t> declared_to_canonical(const std::vector<DiscreteVariable>& variables,
                                               VarId node, const std::vector<VarId>& parents);

/// Structural equality plus CPT entries within tol.
bool networks_equal(const Network& a, const Network& b, double tol);

}  // namespace pgm
