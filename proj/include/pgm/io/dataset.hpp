#pragma once

#include <cstddef>
#include <vector>

#include "pgm/core/types.hpp"

namespace pgm {

/// Complete discrete data stored column-major: columns[v][row] is the state
/// index of variable v in that row. Counting passes over a family touch only
/// that family's columns.
struct Dataset {
  std::vector<DiscreteVariable> variables;
  std::vector<std::vector<StateIndex>> columns;
  std::size_t n_rows = 0;

  std::size_t n_columns() const noexcept { return columns.size(); }
  std::optional<VarId> find(const std::string& name) const;
};

/// Checks column lengths and state ranges.
void validate_dataset(const Dataset& data);

/// Keeps only the given rows, in the given order.
Dataset select_rows(const Dataset& data, const std::vector<std::size_t>& rows);

}  // namespace pgm
