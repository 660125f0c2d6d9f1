#include "pgm/io/dataset.hpp"

#include "pgm/core/error.hpp"

namespace pgm {

std::optional<VarId> Dataset::find(const std::string& name) const {
  for (const auto& v : variables) {
    if (v.name == name) return v.id;
  }
  return std::nullopt;
}

void validate_dataset(const Dataset& data) {
  if (data.columns.size() != data.variables.size()) {
    throw Error(ErrorCode::kInvalidArgument, "dataset has a column count different from its variables");
  }
  for (std::size_t c = 0; c < data.columns.size(); ++c) {
    if (data.variables[c].id != static_cast<VarId>(c)) {
      throw Error(ErrorCode::kInvalidArgument, "dataset variable ids must match column positions");
    }
    const auto& col = data.columns[c];
    const int card = data.variables[c].cardinality();
    if (col.size() != data.n_rows) {
      throw Error(ErrorCode::kInvalidArgument, "column '" + data.variables[c].name + "' has the wrong length");
    }
    for (StateIndex s : col) {
      if (s < 0 || s >= card) {
        throw Error(ErrorCode::kInvalidArgument,
                    "column '" + data.variables[c].name + "' holds an out-of-range state");
      }
    }
  }
}

Dataset select_rows(const Dataset& data, const std::vector<std::size_t>& rows) {
  Dataset out;
  out.variables = data.variables;
  out.n_rows = rows.size();
  out.columns.resize(data.columns.size());
  for (std::size_t c = 0; c < data.columns.size(); ++c) {
    auto& dst = out.columns[c];
    dst.reserve(rows.size());
    for (std::size_t r : rows) dst.push_back(data.columns[c].at(r));
  }
  return out;
}

}  // namespace pgm
