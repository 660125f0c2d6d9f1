#include "pgm/learn/orientation.hpp"

#include <algorithm>

#include "pgm/core/error.hpp"

namespace pgm {

PdagGraph orient_v_structures(const PdagGraph& skeleton, const SepsetMap& sepsets) {
  PdagGraph g = skeleton;
  const auto n = static_cast<VarId>(skeleton.size());
  for (VarId x = 0; x < n; ++x) {
    for (VarId y = x + 1; y < n; ++y) {
      if (skeleton.adjacent(x, y)) continue;
      const auto* sep = sepsets.find(x, y);
      for (VarId z = 0; z < n; ++z) {
        if (z == x || z == y || !skeleton.adjacent(x, z) || !skeleton.adjacent(y, z)) continue;
        if (sep && std::binary_search(sep->begin(), sep->end(), z)) continue;
        g.orient(x, z);
        g.orient(y, z);
      }
    }
  }
  return g;
}

namespace {

// True when one of R1-R4 forces the undirected edge i - j to become i -> j.
bool meek_forces(const PdagGraph& g, VarId i, VarId j) {
  const auto n = static_cast<VarId>(g.size());
  for (VarId k = 0; k < n; ++k) {
    if (k == i || k == j) continue;
    // R1: k -> i - j, k and j nonadjacent.
    if (g.has_arrow(k, i) && !g.adjacent(k, j)) return true;
    // R2: i -> k -> j.
    if (g.has_arrow(i, k) && g.has_arrow(k, j)) return true;
  }
  for (VarId k = 0; k < n; ++k) {
    if (k == i || k == j) continue;
    for (VarId l = k + 1; l < n; ++l) {
      if (l == i || l == j) continue;
      // R3: i - k -> j, i - l -> j, k and l nonadjacent.
      if (g.undirected(i, k) && g.undirected(i, l) && g.has_arrow(k, j) && g.has_arrow(l, j) &&
          !g.adjacent(k, l)) {
        return true;
      }
    }
  }
  for (VarId k = 0; k < n; ++k) {
    if (k == i || k == j || !g.adjacent(i, k) || g.adjacent(k, j)) continue;
    for (VarId l = 0; l < n; ++l) {
      if (l == i || l == j || l == k) continue;
      // R4: i adjacent to k and l, k -> l -> j, k and j nonadjacent.
      if (g.adjacent(i, l) && g.has_arrow(k, l) && g.has_arrow(l, j)) return true;
    }
  }
  return false;
}

}  // namespace

PdagGraph apply_meek_rules(PdagGraph g) {
  const auto n = static_cast<VarId>(g.size());
  bool changed = true;
  while (changed) {
    changed = false;
    for (VarId a = 0; a < n; ++a) {
      for (VarId b = a + 1; b < n; ++b) {
        if (!g.undirected(a, b)) continue;
        if (meek_forces(g, a, b)) {
          g.orient(a, b);
          changed = true;
        } else if (meek_forces(g, b, a)) {
          g.orient(b, a);
          changed = true;
        }
      }
    }
  }
  return g;
}

std::vector<std::vector<VarId>> extend_to_dag(const PdagGraph& pdag) {
  const std::size_t n = pdag.size();
  PdagGraph work = pdag;
  PdagGraph result = pdag;
  std::vector<bool> alive(n, true);

  for (std::size_t removed = 0; removed < n; ++removed) {
    VarId sink = -1;
    for (std::size_t s = n; s-- > 0;) {
      if (!alive[s]) continue;
      const auto v = static_cast<VarId>(s);
      bool ok = true;
      std::vector<VarId> nbrs;
      for (std::size_t u = 0; u < n && ok; ++u) {
        if (!alive[u] || u == s) continue;
        const auto w = static_cast<VarId>(u);
        if (work.has_arrow(v, w)) ok = false;
        if (work.adjacent(v, w)) nbrs.push_back(w);
      }
      for (std::size_t a = 0; a < nbrs.size() && ok; ++a) {
        if (!work.undirected(v, nbrs[a])) continue;
        for (std::size_t b = 0; b < nbrs.size() && ok; ++b) {
          if (a != b && !work.adjacent(nbrs[a], nbrs[b])) ok = false;
        }
      }
      if (ok) {
        sink = v;
        break;
      }
    }
    if (sink < 0) throw Error(ErrorCode::kNoConsistentExtension, "graph admits no consistent DAG extension");
    for (std::size_t u = 0; u < n; ++u) {
      const auto w = static_cast<VarId>(u);
      if (!alive[u] || w == sink) continue;
      if (work.undirected(w, sink)) result.orient(w, sink);
      if (work.adjacent(w, sink)) work.remove(w, sink);
    }
    alive[static_cast<std::size_t>(sink)] = false;
  }

  std::vector<std::vector<VarId>> parents(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t u = 0; u < n; ++u) {
      if (u != v && result.has_arrow(static_cast<VarId>(u), static_cast<VarId>(v))) {
        parents[v].push_back(static_cast<VarId>(u));
      }
    }
  }
  return parents;
}

PdagGraph dag_to_cpdag(const std::vector<std::vector<VarId>>& parents) {
  const std::size_t n = parents.size();
  PdagGraph g(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (VarId p : parents[v]) g.add_undirected(p, static_cast<VarId>(v));
  }
  for (std::size_t v = 0; v < n; ++v) {
    const auto& pa = parents[v];
    for (std::size_t a = 0; a < pa.size(); ++a) {
      for (std::size_t b = a + 1; b < pa.size(); ++b) {
        if (g.adjacent(pa[a], pa[b])) continue;
        g.orient(pa[a], static_cast<VarId>(v));
        g.orient(pa[b], static_cast<VarId>(v));
      }
    }
  }
  return apply_meek_rules(std::move(g));
}

PcResult learn_structure(const Dataset& data, const PcOptions& options, const Executor& exec) {
  PcResult out;
  out.search = pc_stable_skeleton(data, options, exec);
  out.cpdag = apply_meek_rules(orient_v_structures(out.search.skeleton, out.search.sepsets));
  out.dag_parents = extend_to_dag(out.cpdag);
  return out;
}

}  // namespace pgm
