#include "pgm/core/types.hpp"

#include <set>

#include "pgm/core/error.hpp"

namespace pgm {

std::optional<StateIndex> DiscreteVariable::state_index(const std::string& state) const {
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i] == state) return static_cast<StateIndex>(i);
  }
  return std::nullopt;
}

void validate_variables(const std::vector<DiscreteVariable>& variables) {
  std::set<std::string> names;
  for (std::size_t i = 0; i < variables.size(); ++i) {
    const auto& v = variables[i];
    if (v.id != static_cast<VarId>(i)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "variable '" + v.name + "' has id " + std::to_string(v.id) + ", expected " +
                      std::to_string(i));
    }
    if (v.name.empty()) throw Error(ErrorCode::kInvalidArgument, "variable with empty name");
    if (!names.insert(v.name).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate variable name '" + v.name + "'");
    }
    if (v.cardinality() < 2) {
      throw Error(ErrorCode::kInvalidArgument,
                  "variable '" + v.name + "' needs at least 2 states");
    }
    std::set<std::string> states(v.states.begin(), v.states.end());
    if (states.size() != v.states.size()) {
      throw Error(ErrorCode::kInvalidArgument, "variable '" + v.name + "' has duplicate states");
    }
  }
}

void validate_evidence(const std::vector<DiscreteVariable>& variables, const Evidence& evidence) {
  for (const auto& [var, state] : evidence) {
    if (var < 0 || static_cast<std::size_t>(var) >= variables.size()) {
      throw Error(ErrorCode::kInvalidArgument, "evidence on unknown variable id " + std::to_string(var));
    }
    const auto& v = variables[static_cast<std::size_t>(var)];
    if (state < 0 || state >= v.cardinality()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "evidence state " + std::to_string(state) + " out of range for '" + v.name + "'");
    }
  }
}

}  // namespace pgm
