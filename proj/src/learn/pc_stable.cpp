#include "pgm/learn/pc_stable.hpp"

#include <algorithm>
#include <numeric>

#include "pgm/core/error.hpp"
#include "pgm/learn/ci_test.hpp"

namespace pgm {

namespace {

// Advances idx to the next size-k combination of {0..m-1} in lexicographic order.
bool next_combination(std::vector<std::size_t>& idx, std::size_t m) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < m - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

struct EdgeOutcome {
  bool removed = false;
  std::vector<VarId> sepset;
  std::size_t tests = 0;
};

struct EdgeTask {
  VarId x;
  VarId y;
};

}  // namespace

PcSkeleton pc_stable_skeleton(const Dataset& data, const PcOptions& options, const Executor& exec) {
  validate_dataset(data);
  if (data.n_rows < 1) throw Error(ErrorCode::kInvalidArgument, "structure learning needs at least one row");
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must be in (0,1)");
  }
  const std::size_t n = data.variables.size();

  // Name rank fixes every enumeration order independently of the id labeling.
  std::vector<VarId> by_name(n);
  std::iota(by_name.begin(), by_name.end(), 0);
  std::sort(by_name.begin(), by_name.end(), [&](VarId a, VarId b) {
    return data.variables[static_cast<std::size_t>(a)].name < data.variables[static_cast<std::size_t>(b)].name;
  });
  std::vector<std::size_t> rank(n);
  for (std::size_t r = 0; r < n; ++r) rank[static_cast<std::size_t>(by_name[r])] = r;
  const auto rank_less = [&](VarId a, VarId b) {
    return rank[static_cast<std::size_t>(a)] < rank[static_cast<std::size_t>(b)];
  };

  PcSkeleton out;
  out.skeleton = PdagGraph::complete(n);
  const std::size_t max_level = options.max_depth < 0 ? (n >= 2 ? n - 2 : 0)
                                                      : static_cast<std::size_t>(options.max_depth);

  for (std::size_t level = 0; level <= max_level; ++level) {
    std::vector<std::vector<VarId>> adj(n);
    for (std::size_t v = 0; v < n; ++v) {
      adj[v] = out.skeleton.neighbors(static_cast<VarId>(v));
      std::sort(adj[v].begin(), adj[v].end(), rank_less);
    }
    std::vector<EdgeTask> tasks;
    bool any_testable = false;
    for (std::size_t a = 0; a < n; ++a) {
      const VarId x = by_name[a];
      for (VarId y : adj[static_cast<std::size_t>(x)]) {
        if (!rank_less(x, y)) continue;
        tasks.push_back({x, y});
        if (adj[static_cast<std::size_t>(x)].size() - 1 >= level ||
            adj[static_cast<std::size_t>(y)].size() - 1 >= level) {
          any_testable = true;
        }
      }
    }
    if (!any_testable) break;

    std::vector<EdgeOutcome> outcomes(tasks.size());
    exec.parallel_for(tasks.size(), [&](std::size_t t) {
      const VarId x = tasks[t].x;
      const VarId y = tasks[t].y;
      std::vector<VarId> ax;
      std::vector<VarId> ay;
      for (VarId v : adj[static_cast<std::size_t>(x)]) {
        if (v != y) ax.push_back(v);
      }
      for (VarId v : adj[static_cast<std::size_t>(y)]) {
        if (v != x) ay.push_back(v);
      }
      if (ax.size() < level && ay.size() < level) return;

      std::vector<VarId> candidates = ax;
      for (VarId v : ay) {
        if (std::find(candidates.begin(), candidates.end(), v) == candidates.end()) candidates.push_back(v);
      }
      const EdgeCounts counts(data, x, y, candidates);
      EdgeOutcome& result = outcomes[t];
      std::vector<VarId> z(level);

      const auto run = [&](const std::vector<VarId>& pool, bool skip_covered) {
        if (pool.size() < level) return false;
        std::vector<std::size_t> idx(level);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        do {
          for (std::size_t k = 0; k < level; ++k) z[k] = pool[idx[k]];
          if (skip_covered && std::all_of(z.begin(), z.end(), [&](VarId v) {
                return std::find(ax.begin(), ax.end(), v) != ax.end();
              })) {
            continue;
          }
          ++result.tests;
          CiResult r;
          if (small_sample_skip(data, x, y, z)) {
            r.skipped = true;
          } else {
            r = g_squared_test(counts.contingency(z), options.alpha);
          }
          if (r.independent) {
            result.removed = true;
            result.sepset = z;
            return true;
          }
        } while (level > 0 && next_combination(idx, pool.size()));
        return false;
      };
      if (!run(ax, false)) run(ay, true);
    });

    for (std::size_t t = 0; t < tasks.size(); ++t) {
      out.ci_tests += outcomes[t].tests;
      if (outcomes[t].removed) {
        out.skeleton.remove(tasks[t].x, tasks[t].y);
        out.sepsets.set(tasks[t].x, tasks[t].y, outcomes[t].sepset);
      }
    }
    out.levels = static_cast<int>(level) + 1;
  }
  return out;
}

}  // namespace pgm
