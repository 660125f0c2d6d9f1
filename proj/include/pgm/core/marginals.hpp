#pragma once

#include <map>

#include "pgm/core/potential_table.hpp"

namespace pgm {

/// Normalized single-variable tables keyed by variable id. Observed
/// variables appear as one-hot tables.
using MarginalSet = std::map<VarId, PotentialTable>;

/// One-hot table over {var} with mass on state.
PotentialTable one_hot(VarId var, int cardinality, StateIndex state);

}  // namespace pgm
