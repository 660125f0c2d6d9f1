#include "pgm/exact/junction_tree.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "pgm/core/error.hpp"
#include "pgm/exact/elimination.hpp"

namespace pgm {

namespace {

std::vector<VarId> intersect(const std::vector<VarId>& a, const std::vector<VarId>& b) {
  std::vector<VarId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool is_subset(const std::vector<VarId>& small, const std::vector<VarId>& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
};

// Distances from src over the clique tree.
std::vector<int> tree_distances(const std::vector<std::vector<std::size_t>>& adj, std::size_t src) {
  std::vector<int> dist(adj.size(), -1);
  std::queue<std::size_t> q;
  dist[src] = 0;
  q.push(src);
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop();
    for (std::size_t v : adj[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
    }
  }
  return dist;
}

}  // namespace

JunctionTree JunctionTree::build(const Network& net) {
  const std::size_t n = net.size();
  auto shape = std::make_shared<JunctionTreeShape>();
  shape->variables = net.variables();
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "cannot build a junction tree for an empty network");

  std::vector<std::vector<VarId>> elim_cliques;
  min_fill_order(moral_graph(net), std::vector<char>(n, 1), &elim_cliques);
  for (std::size_t i = 0; i < elim_cliques.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < elim_cliques.size() && !dominated; ++j) {
      if (i == j || !is_subset(elim_cliques[i], elim_cliques[j])) continue;
      // Equal sets keep the earlier copy.
      dominated = elim_cliques[i].size() < elim_cliques[j].size() || j < i;
    }
    if (!dominated) shape->cliques.push_back(elim_cliques[i]);
  }
  const std::size_t m = shape->cliques.size();
  for (const auto& c : shape->cliques) {
    std::vector<int> cards;
    for (VarId v : c) cards.push_back(net.variable(v).cardinality());
    checked_table_size(cards);
    shape->clique_cards.push_back(std::move(cards));
  }

  // Maximum spanning tree on separator size, ties by smaller clique pair.
  std::vector<TreeEdge> candidates;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      candidates.push_back({a, b, intersect(shape->cliques[a], shape->cliques[b])});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const TreeEdge& x, const TreeEdge& y) {
    return x.separator.size() > y.separator.size();
  });
  DisjointSets sets(m);
  std::vector<std::vector<std::size_t>> adj(m);
  for (auto& e : candidates) {
    const std::size_t ra = sets.find(e.a);
    const std::size_t rb = sets.find(e.b);
    if (ra == rb) continue;
    sets.parent[ra] = rb;
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
    shape->edges.push_back(std::move(e));
    if (shape->edges.size() + 1 == m) break;
  }

  // Root = minimum eccentricity, ties by lowest index.
  int best_ecc = -1;
  for (std::size_t c = 0; c < m; ++c) {
    const auto dist = tree_distances(adj, c);
    const int ecc = *std::max_element(dist.begin(), dist.end());
    if (best_ecc < 0 || ecc < best_ecc) {
      best_ecc = ecc;
      shape->root = c;
    }
  }
  shape->level = tree_distances(adj, shape->root);
  shape->parent.assign(m, shape->root);
  shape->parent_edge.assign(m, 0);
  shape->children.assign(m, {});
  shape->by_level.assign(static_cast<std::size_t>(best_ecc) + 1, {});
  for (std::size_t e = 0; e < shape->edges.size(); ++e) {
    const auto& edge = shape->edges[e];
    const bool a_is_child = shape->level[edge.a] > shape->level[edge.b];
    const std::size_t child = a_is_child ? edge.a : edge.b;
    shape->parent[child] = a_is_child ? edge.b : edge.a;
    shape->parent_edge[child] = e;
  }
  for (std::size_t c = 0; c < m; ++c) {
    if (c != shape->root) shape->children[shape->parent[c]].push_back(c);
    shape->by_level[static_cast<std::size_t>(shape->level[c])].push_back(c);
  }
  for (std::size_t e = 0; e < shape->edges.size(); ++e) {
    const auto& edge = shape->edges[e];
    const bool a_is_child = shape->level[edge.a] > shape->level[edge.b];
    const std::size_t child = a_is_child ? edge.a : edge.b;
    const std::size_t par = a_is_child ? edge.b : edge.a;
    shape->child_plan.emplace_back(shape->cliques[child], shape->clique_cards[child], edge.separator);
    shape->parent_plan.emplace_back(shape->cliques[par], shape->clique_cards[par], edge.separator);
  }

  // CPT to the lowest-index clique holding its family.
  shape->cpt_home.assign(n, m);
  for (std::size_t v = 0; v < n; ++v) {
    const auto& family = net.cpt(static_cast<VarId>(v)).scope();
    for (std::size_t c = 0; c < m; ++c) {
      if (is_subset(family, shape->cliques[c])) {
        shape->cpt_home[v] = c;
        break;
      }
    }
    if (shape->cpt_home[v] == m) {
      throw Error(ErrorCode::kInvalidArgument, "internal error: family not covered by any clique");
    }
  }
  for (std::size_t c = 0; c < m; ++c) {
    PotentialTable t = PotentialTable::filled(shape->cliques[c], shape->clique_cards[c], 1.0);
    for (std::size_t v = 0; v < n; ++v) {
      if (shape->cpt_home[v] != c) continue;
      const auto& cpt = net.cpt(static_cast<VarId>(v));
      multiply_in_place(t, cpt, ProjectionPlan(t.scope(), t.cards(), cpt.scope()));
    }
    shape->initial.push_back(std::move(t));
  }

  shape->var_home.assign(n, m);
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t best = m;
    for (std::size_t c = 0; c < m; ++c) {
      if (!std::binary_search(shape->cliques[c].begin(), shape->cliques[c].end(), static_cast<VarId>(v))) continue;
      if (best == m || shape->initial[c].size() < shape->initial[best].size()) best = c;
    }
    shape->var_home[v] = best;
    shape->var_plan.emplace_back(shape->cliques[best], shape->clique_cards[best],
                                 std::vector<VarId>{static_cast<VarId>(v)});
  }

  JunctionTree tree;
  tree.shape_ = std::move(shape);
  return tree;
}

void JunctionTree::propagate(const Evidence& evidence, const Executor& exec) {
  if (!shape_) throw Error(ErrorCode::kInvalidArgument, "junction tree was not built");
  const JunctionTreeShape& s = *shape_;
  validate_evidence(s.variables, evidence);
  cliques_ = s.initial;
  separators_.clear();
  for (const auto& plan : s.child_plan) {
    separators_.push_back(PotentialTable::filled(plan.sub_scope(), plan.sub_cards(), 1.0));
  }
  evidence_ = evidence;
  calibrated_ = false;

  for (const auto& [var, state] : evidence) {
    const auto v = static_cast<std::size_t>(var);
    restrict_in_place(cliques_[s.var_home[v]], s.var_plan[v], static_cast<std::size_t>(state));
  }

  // Several cliques on one level: one task each, kernels run inline. A single
  // clique: hand the executor to its kernels.
  const auto for_each = [&](const std::vector<std::size_t>& items, const auto& fn) {
    if (items.size() > 1) {
      exec.parallel_for(items.size(), [&](std::size_t k) { fn(items[k], serial_executor()); });
    } else if (items.size() == 1) {
      fn(items[0], exec);
    }
  };

  // Hugin update: target *= new_sep / old_sep, old_sep := new_sep.
  const auto absorb = [&](std::size_t target, std::size_t edge, const ProjectionPlan& target_plan,
                          PotentialTable new_sep, const Executor& ex) {
    const PotentialTable ratio = table_divide(new_sep, separators_[edge], ex);
    multiply_in_place(cliques_[target], ratio, target_plan, ex);
    separators_[edge] = std::move(new_sep);
  };

  std::vector<PotentialTable> outgoing(s.cliques.size());
  for (std::size_t d = s.by_level.size(); d-- > 1;) {
    for_each(s.by_level[d], [&](std::size_t c, const Executor& ex) {
      outgoing[c] = marginalize_with(cliques_[c], s.child_plan[s.parent_edge[c]], ex);
    });
    for_each(s.by_level[d - 1], [&](std::size_t p, const Executor& ex) {
      for (std::size_t c : s.children[p]) {
        const std::size_t e = s.parent_edge[c];
        absorb(p, e, s.parent_plan[e], std::move(outgoing[c]), ex);
      }
    });
  }
  if (!(cliques_[s.root].sum() > 0.0)) {
    throw Error(ErrorCode::kImpossibleEvidence, "impossible evidence: the evidence has probability zero");
  }
  for (std::size_t d = 1; d < s.by_level.size(); ++d) {
    for_each(s.by_level[d], [&](std::size_t c, const Executor& ex) {
      const std::size_t e = s.parent_edge[c];
      absorb(c, e, s.child_plan[e], marginalize_with(cliques_[s.parent[c]], s.parent_plan[e], ex), ex);
    });
  }
  calibrated_ = true;
}

PotentialTable JunctionTree::query(VarId var) const {
  if (!calibrated_) throw Error(ErrorCode::kInvalidArgument, "junction tree is not calibrated");
  const JunctionTreeShape& s = *shape_;
  if (var < 0 || static_cast<std::size_t>(var) >= s.var_home.size()) {
    throw Error(ErrorCode::kInvalidArgument, "variable id " + std::to_string(var) + " is not in the tree");
  }
  const auto v = static_cast<std::size_t>(var);
  if (const auto it = evidence_.find(var); it != evidence_.end()) {
    return one_hot(var, s.variables[v].cardinality(), it->second);
  }
  return table_normalize(marginalize_with(cliques_[s.var_home[v]], s.var_plan[v]));
}

MarginalSet JunctionTree::marginals() const {
  MarginalSet out;
  for (std::size_t v = 0; v < shape_->variables.size(); ++v) {
    out.emplace(static_cast<VarId>(v), query(static_cast<VarId>(v)));
  }
  return out;
}

JunctionTree build_junction_tree(const Network& net) { return JunctionTree::build(net); }

JunctionTree jt_propagate(const JunctionTree& tree, const Evidence& evidence, const Executor& exec) {
  JunctionTree out = tree;
  out.propagate(evidence, exec);
  return out;
}

PotentialTable jt_query(const JunctionTree& tree, VarId var) { return tree.query(var); }

}  // namespace pgm
