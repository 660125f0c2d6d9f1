#include "pgm/learn/mle.hpp"

#include <cmath>

#include "pgm/core/error.hpp"

namespace pgm {

namespace {

// Dataset column index for each structure variable.
std::vector<std::size_t> match_columns(const DagStructure& structure, const Dataset& data) {
  std::vector<std::string> missing;
  std::vector<std::size_t> column(structure.variables.size());
  for (std::size_t v = 0; v < structure.variables.size(); ++v) {
    const auto& var = structure.variables[v];
    const auto found = data.find(var.name);
    if (!found) {
      missing.push_back(var.name);
      continue;
    }
    const auto& dvar = data.variables[static_cast<std::size_t>(*found)];
    if (dvar.states != var.states) {
      throw Error(ErrorCode::kVariableMismatch, "variable '" + var.name + "' has different states in the data");
    }
    column[v] = static_cast<std::size_t>(*found);
  }
  if (!missing.empty() || data.variables.size() != structure.variables.size()) {
    std::string msg = "structure and data variables differ";
    if (!missing.empty()) {
      msg += "; missing from data:";
      for (const auto& m : missing) msg += " " + m;
    }
    for (const auto& dv : data.variables) {
      bool known = false;
      for (const auto& sv : structure.variables) known = known || sv.name == dv.name;
      if (!known) msg += "; not in structure: " + dv.name;
    }
    throw Error(ErrorCode::kVariableMismatch, msg);
  }
  return column;
}

}  // namespace

Network fit_mle(const DagStructure& structure, const Dataset& data, double pseudocount, const Executor& exec,
                std::string name) {
  if (!(pseudocount >= 0.0) || !std::isfinite(pseudocount)) {
    throw Error(ErrorCode::kInvalidArgument, "pseudocount must be a finite value >= 0");
  }
  validate_variables(structure.variables);
  validate_dataset(data);
  const auto column = match_columns(structure, data);
  const std::size_t n = structure.variables.size();
  if (structure.parents.size() != n) {
    throw Error(ErrorCode::kInvalidArgument, "parent lists do not match variable count");
  }
  for (const auto& pa : structure.parents) {
    for (VarId p : pa) {
      if (p < 0 || static_cast<std::size_t>(p) >= n) {
        throw Error(ErrorCode::kInvalidArgument, "unknown parent id " + std::to_string(p));
      }
    }
  }

  std::vector<std::vector<double>> rows(n);
  exec.parallel_for(n, [&](std::size_t v) {
    const auto& pa = structure.parents[v];
    const auto card = static_cast<std::size_t>(structure.variables[v].cardinality());
    std::vector<int> cards;
    for (VarId p : pa) cards.push_back(structure.variables.at(static_cast<std::size_t>(p)).cardinality());
    cards.push_back(static_cast<int>(card));
    const std::size_t size = checked_table_size(cards);

    std::vector<std::size_t> idx(data.n_rows, 0);
    for (std::size_t k = 0; k < cards.size(); ++k) {
      const std::size_t src = k + 1 < cards.size() ? column[static_cast<std::size_t>(pa[k])] : column[v];
      const auto& col = data.columns[src];
      const auto c = static_cast<std::size_t>(cards[k]);
      for (std::size_t r = 0; r < data.n_rows; ++r) idx[r] = idx[r] * c + static_cast<std::size_t>(col[r]);
    }
    std::vector<double> counts(size, 0.0);
    for (std::size_t r = 0; r < data.n_rows; ++r) counts[idx[r]] += 1.0;

    for (std::size_t base = 0; base < size; base += card) {
      double total = 0.0;
      for (std::size_t s = 0; s < card; ++s) total += counts[base + s];
      const double denom = total + pseudocount * static_cast<double>(card);
      for (std::size_t s = 0; s < card; ++s) {
        counts[base + s] = denom > 0.0 ? (counts[base + s] + pseudocount) / denom : 1.0 / static_cast<double>(card);
      }
    }
    rows[v] = std::move(counts);
  });
  return Network::from_rows(std::move(name), structure.variables, structure.parents, rows);
}

}  // namespace pgm
