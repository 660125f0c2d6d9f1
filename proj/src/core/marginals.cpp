#include "pgm/core/marginals.hpp"

namespace pgm {

PotentialTable one_hot(VarId var, int cardinality, StateIndex state) {
  std::vector<double> values(static_cast<std::size_t>(cardinality), 0.0);
  values.at(static_cast<std::size_t>(state)) = 1.0;
  return PotentialTable({var}, {cardinality}, std::move(values));
}

}  // namespace pgm
