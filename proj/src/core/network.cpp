#include "pgm/core/network.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>

#include "pgm/core/error.hpp"

namespace pgm {

std::optional<std::vector<VarId>> topological_order(const std::vector<std::vector<VarId>>& parents) {
  const std::size_t n = parents.size();
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<VarId>> children(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (VarId p : parents[v]) {
      children[static_cast<std::size_t>(p)].push_back(static_cast<VarId>(v));
      ++indegree[v];
    }
  }
  std::priority_queue<VarId, std::vector<VarId>, std::greater<>> ready;
  for (std::size_t v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.push(static_cast<VarId>(v));
  }
  std::vector<VarId> order;
  order.reserve(n);
  while (!ready.empty()) {
    const VarId v = ready.top();
    ready.pop();
    order.push_back(v);
    for (VarId c : children[static_cast<std::size_t>(v)]) {
      if (--indegree[static_cast<std::size_t>(c)] == 0) ready.push(c);
    }
  }
  if (order.size() != n) return std::nullopt;
  return order;
}

std::vector<std::size_t> declared_to_canonical(const std::vector<DiscreteVariable>& variables,
                                               VarId node, const std::vector<VarId>& parents) {
  std::vector<VarId> declared = parents;
  declared.push_back(node);
  std::vector<VarId> canonical = declared;
  std::sort(canonical.begin(), canonical.end());

  std::vector<std::size_t> canon_stride(canonical.size(), 1);
  for (std::size_t k = canonical.size(); k-- > 1;) {
    canon_stride[k - 1] =
        canon_stride[k] * static_cast<std::size_t>(variables[static_cast<std::size_t>(canonical[k])].cardinality());
  }
  std::vector<int> cards;
  std::vector<std::size_t> strides;
  for (VarId v : declared) {
    const int card = variables[static_cast<std::size_t>(v)].cardinality();
    cards.push_back(card);
    const auto pos = std::lower_bound(canonical.begin(), canonical.end(), v) - canonical.begin();
    strides.push_back(canon_stride[static_cast<std::size_t>(pos)]);
  }

  return strided_offsets(cards, strides);
}

namespace {

void validate_parents(const std::vector<DiscreteVariable>& variables,
                      const std::vector<std::vector<VarId>>& parents) {
  if (parents.size() != variables.size()) {
    throw Error(ErrorCode::kInvalidArgument, "parent lists do not match variable count");
  }
  const auto n = static_cast<VarId>(variables.size());
  for (std::size_t v = 0; v < parents.size(); ++v) {
    std::set<VarId> seen;
    for (VarId p : parents[v]) {
      if (p < 0 || p >= n) {
        throw Error(ErrorCode::kInvalidArgument,
                    "variable '" + variables[v].name + "' has unknown parent id " + std::to_string(p));
      }
      if (p == static_cast<VarId>(v)) {
        throw Error(ErrorCode::kInvalidArgument, "variable '" + variables[v].name + "' is its own parent");
      }
      if (!seen.insert(p).second) {
        throw Error(ErrorCode::kInvalidArgument,
                    "variable '" + variables[v].name + "' lists parent '" +
                        variables[static_cast<std::size_t>(p)].name + "' twice");
      }
    }
  }
}

}  // namespace

Network::Network(std::string name, std::vector<DiscreteVariable> variables,
                 std::vector<std::vector<VarId>> parents, std::vector<PotentialTable> cpts)
    : name_(std::move(name)),
      variables_(std::move(variables)),
      parents_(std::move(parents)),
      cpts_(std::move(cpts)) {
  validate_variables(variables_);
  validate_parents(variables_, parents_);
  auto order = pgm::topological_order(parents_);
  if (!order) throw Error(ErrorCode::kInvalidArgument, "cyclic parent structure");
  topo_ = std::move(*order);
  if (cpts_.size() != variables_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "expected one CPT per variable");
  }
  for (std::size_t v = 0; v < variables_.size(); ++v) {
    std::vector<VarId> family = parents_[v];
    family.push_back(static_cast<VarId>(v));
    std::sort(family.begin(), family.end());
    const auto& t = cpts_[v];
    if (t.scope() != family) {
      throw Error(ErrorCode::kInvalidArgument, "CPT of '" + variables_[v].name + "' has the wrong scope");
    }
    for (std::size_t k = 0; k < family.size(); ++k) {
      if (t.cards()[k] != variables_[static_cast<std::size_t>(family[k])].cardinality()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "CPT of '" + variables_[v].name + "' has the wrong cardinalities");
      }
    }
    const auto rows = cpt_rows(static_cast<VarId>(v));
    const auto card = static_cast<std::size_t>(variables_[v].cardinality());
    for (std::size_t r = 0; r < rows.size(); r += card) {
      double s = 0.0;
      for (std::size_t k = 0; k < card; ++k) s += rows[r + k];
      if (std::abs(s - 1.0) > kCptRowTolerance) {
        std::ostringstream msg;
        msg << "CPT row " << r / card << " of '" << variables_[v].name << "' sums to " << s;
        throw Error(ErrorCode::kInvalidArgument, msg.str());
      }
    }
  }
}

Network Network::from_rows(std::string name, std::vector<DiscreteVariable> variables,
                           std::vector<std::vector<VarId>> parents,
                           const std::vector<std::vector<double>>& rows_per_node) {
  validate_variables(variables);
  validate_parents(variables, parents);
  if (rows_per_node.size() != variables.size()) {
    throw Error(ErrorCode::kInvalidArgument, "expected one row block per variable");
  }
  std::vector<PotentialTable> cpts;
  cpts.reserve(variables.size());
  for (std::size_t v = 0; v < variables.size(); ++v) {
    const auto map = declared_to_canonical(variables, static_cast<VarId>(v), parents[v]);
    const auto& rows = rows_per_node[v];
    if (rows.size() != map.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "CPT of '" + variables[v].name + "' has " + std::to_string(rows.size()) +
                      " entries, expected " + std::to_string(map.size()));
    }
    std::vector<double> values(map.size());
    for (std::size_t k = 0; k < map.size(); ++k) values[map[k]] = rows[k];
    std::vector<VarId> scope = parents[v];
    scope.push_back(static_cast<VarId>(v));
    std::sort(scope.begin(), scope.end());
    std::vector<int> cards;
    for (VarId s : scope) cards.push_back(variables[static_cast<std::size_t>(s)].cardinality());
    cpts.emplace_back(std::move(scope), std::move(cards), std::move(values));
  }
  return Network(std::move(name), std::move(variables), std::move(parents), std::move(cpts));
}

std::vector<VarId> Network::children(VarId id) const {
  std::vector<VarId> out;
  for (std::size_t v = 0; v < parents_.size(); ++v) {
    if (std::find(parents_[v].begin(), parents_[v].end(), id) != parents_[v].end()) {
      out.push_back(static_cast<VarId>(v));
    }
  }
  return out;
}

std::optional<VarId> Network::find(const std::string& name) const {
  for (const auto& v : variables_) {
    if (v.name == name) return v.id;
  }
  return std::nullopt;
}

std::vector<double> Network::cpt_rows(VarId id) const {
  const auto map = declared_to_canonical(variables_, id, parents(id));
  const auto& values = cpt(id).values();
  std::vector<double> rows(map.size());
  for (std::size_t k = 0; k < map.size(); ++k) rows[k] = values[map[k]];
  return rows;
}

bool networks_equal(const Network& a, const Network& b, double tol) {
  if (a.variables() != b.variables() || a.all_parents() != b.all_parents()) return false;
  for (std::size_t v = 0; v < a.size(); ++v) {
    const auto& x = a.cpts()[v].values();
    const auto& y = b.cpts()[v].values();
    if (x.size() != y.size()) return false;
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (std::abs(x[k] - y[k]) > tol) return false;
    }
  }
  return true;
}

}  // namespace pgm
