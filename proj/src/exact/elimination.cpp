#include "pgm/exact/elimination.hpp"

#include <algorithm>

#include "pgm/core/error.hpp"
#include "pgm/core/marginals.hpp"

namespace pgm {

UndirectedGraph moral_graph(const Network& net) {
  const std::size_t n = net.size();
  UndirectedGraph g(n, std::vector<char>(n, 0));
  for (std::size_t v = 0; v < n; ++v) {
    const auto& pa = net.all_parents()[v];
    for (std::size_t a = 0; a < pa.size(); ++a) {
      const auto p = static_cast<std::size_t>(pa[a]);
      g[p][v] = g[v][p] = 1;
      for (std::size_t b = a + 1; b < pa.size(); ++b) {
        const auto q = static_cast<std::size_t>(pa[b]);
        g[p][q] = g[q][p] = 1;
      }
    }
  }
  return g;
}

std::vector<VarId> min_fill_order(UndirectedGraph graph, const std::vector<char>& eliminate,
                                  std::vector<std::vector<VarId>>* cliques) {
  const std::size_t n = graph.size();
  std::vector<char> alive(n, 1);
  std::vector<char> pending = eliminate;
  std::vector<VarId> order;
  std::vector<std::size_t> nbrs;

  const auto neighbors_of = [&](std::size_t v) {
    nbrs.clear();
    for (std::size_t u = 0; u < n; ++u) {
      if (u != v && alive[u] && graph[v][u]) nbrs.push_back(u);
    }
  };

  for (;;) {
    std::size_t best = n;
    std::size_t best_fill = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (!pending[v]) continue;
      neighbors_of(v);
      std::size_t fill = 0;
      for (std::size_t a = 0; a < nbrs.size(); ++a) {
        for (std::size_t b = a + 1; b < nbrs.size(); ++b) {
          if (!graph[nbrs[a]][nbrs[b]]) ++fill;
        }
      }
      if (best == n || fill < best_fill) {
        best = v;
        best_fill = fill;
      }
    }
    if (best == n) break;
    neighbors_of(best);
    for (std::size_t a = 0; a < nbrs.size(); ++a) {
      for (std::size_t b = a + 1; b < nbrs.size(); ++b) graph[nbrs[a]][nbrs[b]] = graph[nbrs[b]][nbrs[a]] = 1;
    }
    if (cliques) {
      std::vector<VarId> clique{static_cast<VarId>(best)};
      for (std::size_t u : nbrs) clique.push_back(static_cast<VarId>(u));
      std::sort(clique.begin(), clique.end());
      cliques->push_back(std::move(clique));
    }
    order.push_back(static_cast<VarId>(best));
    alive[best] = 0;
    pending[best] = 0;
  }
  return order;
}

std::vector<VarId> elimination_order(const Network& net, const std::vector<VarId>& targets,
                                     const Evidence& evidence) {
  validate_evidence(net.variables(), evidence);
  const std::size_t n = net.size();
  UndirectedGraph g = moral_graph(net);
  std::vector<char> eliminate(n, 1);
  for (VarId t : targets) eliminate.at(static_cast<std::size_t>(t)) = 0;
  for (const auto& [v, s] : evidence) {
    const auto i = static_cast<std::size_t>(v);
    eliminate[i] = 0;
    for (std::size_t u = 0; u < n; ++u) g[i][u] = g[u][i] = 0;
  }
  return min_fill_order(std::move(g), eliminate);
}

PotentialTable variable_elimination(const Network& net, VarId query, const Evidence& evidence,
                                    const Executor& exec) {
  validate_evidence(net.variables(), evidence);
  if (query < 0 || static_cast<std::size_t>(query) >= net.size()) {
    throw Error(ErrorCode::kInvalidArgument, "unknown query variable id " + std::to_string(query));
  }
  const std::size_t n = net.size();

  // Ancestral closure of the query and evidence; everything else is barren.
  std::vector<char> relevant(n, 0);
  std::vector<VarId> stack{query};
  for (const auto& [v, s] : evidence) stack.push_back(v);
  while (!stack.empty()) {
    const VarId v = stack.back();
    stack.pop_back();
    if (relevant[static_cast<std::size_t>(v)]) continue;
    relevant[static_cast<std::size_t>(v)] = 1;
    for (VarId p : net.parents(v)) stack.push_back(p);
  }

  std::vector<PotentialTable> factors;
  UndirectedGraph g(n, std::vector<char>(n, 0));
  for (std::size_t v = 0; v < n; ++v) {
    if (!relevant[v]) continue;
    const PotentialTable& cpt = net.cpt(static_cast<VarId>(v));
    std::vector<VarId> keep;
    for (VarId s : cpt.scope()) {
      if (!evidence.contains(s)) keep.push_back(s);
    }
    PotentialTable f = keep.size() == cpt.scope().size()
                           ? cpt
                           : table_marginalize(table_reduce(cpt, evidence), keep, exec);
    for (VarId a : keep) {
      for (VarId b : keep) {
        if (a != b) g[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = 1;
      }
    }
    factors.push_back(std::move(f));
  }

  const auto observed = evidence.find(query);
  std::vector<char> eliminate(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    eliminate[v] = relevant[v] && !evidence.contains(static_cast<VarId>(v)) && static_cast<VarId>(v) != query;
  }
  for (VarId v : min_fill_order(std::move(g), eliminate)) {
    std::vector<PotentialTable> rest;
    PotentialTable product;
    for (auto& f : factors) {
      if (f.contains(v)) {
        product = table_multiply(product, f, exec);
      } else {
        rest.push_back(std::move(f));
      }
    }
    std::vector<VarId> keep;
    for (VarId s : product.scope()) {
      if (s != v) keep.push_back(s);
    }
    rest.push_back(table_marginalize(product, keep, exec));
    factors = std::move(rest);
  }

  PotentialTable result;
  for (const auto& f : factors) result = table_multiply(result, f, exec);
  if (!(result.sum() > 0.0)) {
    throw Error(ErrorCode::kImpossibleEvidence, "impossible evidence: the evidence has probability zero");
  }
  if (observed != evidence.end()) {
    return one_hot(query, net.variable(query).cardinality(), observed->second);
  }
  return table_normalize(result);
}

}  // namespace pgm
