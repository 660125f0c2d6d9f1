#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pgm {

using VarId = std::int32_t;
using StateIndex = std::int32_t;

struct DiscreteVariable {
  VarId id = 0;
  std::string name;
  std::vector<std::string> states;

  int cardinality() const noexcept { return static_cast<int>(states.size()); }
  std::optional<StateIndex> state_index(const std::string& state) const;

  friend bool operator==(const DiscreteVariable&, const DiscreteVariable&) = default;
};

/// Checks cardinality >= 2, unique state names, and ids forming 0..n-1 in order.
void validate_variables(const std::vector<DiscreteVariable>& variables);

/// Observed states keyed by variable id.
using Evidence = std::map<VarId, StateIndex>;

void validate_evidence(const std::vector<DiscreteVariable>& variables, const Evidence& evidence);

}  // namespace pgm
