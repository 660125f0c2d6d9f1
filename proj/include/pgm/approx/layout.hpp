#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pgm/core/network.hpp"

namespace pgm {

/// Per-node sampling data, stored in topological order.
struct FusedNode {
  VarId var = 0;
  int card = 0;
  /// Start of this node's rows in a row array.
  std::size_t offset = 0;
  std::vector<VarId> parents;
  std::vector<std::size_t> parent_strides;
  std::size_t configs = 1;
};

/// Network flattened for forward sampling. Each node keeps its parent list
/// and strides next to its rows, and rows of all nodes share one array
/// (row for parent configuration c starts at offset + c * card). Importance
/// functions use the same layout, so a proposal is just another row array.
class SamplingLayout {
 public:
  explicit SamplingLayout(const Network& net);

  const std::vector<FusedNode>& nodes() const noexcept { return nodes_; }
  /// Index into nodes() of a variable.
  std::size_t position(VarId var) const { return position_.at(static_cast<std::size_t>(var)); }
  const std::vector<double>& cpt_rows() const noexcept { return rows_; }
  std::size_t row_size() const noexcept { return rows_.size(); }

  /// First entry of var's block in a per-variable marginal tally.
  std::size_t marginal_offset(VarId var) const { return marg_offset_.at(static_cast<std::size_t>(var)); }
  std::size_t marginal_size() const noexcept { return marg_size_; }
  std::size_t variable_count() const noexcept { return nodes_.size(); }

  std::size_t config_of(const FusedNode& node, std::span<const StateIndex> state) const noexcept {
    std::size_t c = 0;
    for (std::size_t k = 0; k < node.parents.size(); ++k) {
      c += static_cast<std::size_t>(state[static_cast<std::size_t>(node.parents[k])]) * node.parent_strides[k];
    }
    return c;
  }

 private:
  std::vector<FusedNode> nodes_;
  std::vector<std::size_t> position_;
  std::vector<double> rows_;
  std::vector<std::size_t> marg_offset_;
  std::size_t marg_size_ = 0;
};

/// Inverse-CDF draw from a row; never returns a zero-probability state.
int draw_state(const double* row, int card, double u) noexcept;

}  // namespace pgm
