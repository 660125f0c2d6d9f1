#include "pgm/sim/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "pgm/core/error.hpp"

namespace pgm {

int shd(const PdagGraph& g1, const PdagGraph& g2) {
  if (g1.size() != g2.size()) {
    throw Error(ErrorCode::kVariableMismatch, "graphs have different variable counts");
  }
  const auto n = static_cast<VarId>(g1.size());
  int d = 0;
  for (VarId i = 0; i < n; ++i) {
    for (VarId j = i + 1; j < n; ++j) {
      const bool a1 = g1.adjacent(i, j);
      const bool a2 = g2.adjacent(i, j);
      if (a1 != a2) {
        ++d;
      } else if (a1 && (g1.has_arrow(i, j) != g2.has_arrow(i, j) || g1.has_arrow(j, i) != g2.has_arrow(j, i))) {
        ++d;
      }
    }
  }
  return d;
}

double hellinger(const PotentialTable& p, const PotentialTable& q) {
  if (p.scope() != q.scope() || p.cards() != q.cards()) {
    throw Error(ErrorCode::kScopeViolation, "hellinger needs tables over the same scope");
  }
  if (std::abs(p.sum() - 1.0) > 1e-6 || std::abs(q.sum() - 1.0) > 1e-6) {
    throw Error(ErrorCode::kInvalidArgument, "hellinger needs normalized tables");
  }
  double s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double d = std::sqrt(p.values()[k]) - std::sqrt(q.values()[k]);
    s += d * d;
  }
  return std::clamp(std::sqrt(0.5 * s), 0.0, 1.0);
}

double mean_hellinger(const MarginalSet& a, const MarginalSet& b) {
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& [var, table] : a) {
    const auto it = b.find(var);
    if (it == b.end()) continue;
    total += hellinger(table, it->second);
    ++count;
  }
  if (count == 0) throw Error(ErrorCode::kVariableMismatch, "marginal sets share no variables");
  return total / static_cast<double>(count);
}

}  // namespace pgm
