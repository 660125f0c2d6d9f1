#include "pgm/approx/lbp.hpp"

#include <algorithm>
#include <cmath>

#include "pgm/core/error.hpp"

namespace pgm {

namespace {

void normalize_message(std::vector<double>& m) {
  double s = 0.0;
  for (double v : m) s += v;
  if (!(s > 0.0)) {
    throw Error(ErrorCode::kImpossibleEvidence, "impossible evidence: a belief propagation message vanished");
  }
  for (double& v : m) v /= s;
}

}  // namespace

LbpResult loopy_belief_propagation(const Network& net, const Evidence& evidence, const LbpOptions& options,
                                   const Executor& exec) {
  if (options.max_iters < 1) throw Error(ErrorCode::kInvalidArgument, "max_iters must be >= 1");
  if (!(options.tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "tol must be > 0");
  if (!(options.damping >= 0.0 && options.damping < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "damping must be in [0,1)");
  }
  validate_evidence(net.variables(), evidence);
  const std::size_t n = net.size();
  if (n == 0) return {{}, true, 0, {}};

  // Factor f is the CPT of variable f; slot k pairs it with scope()[k].
  struct Link {
    std::size_t factor;
    std::size_t slot;
  };
  std::vector<std::vector<ProjectionPlan>> plans(n);
  std::vector<std::vector<Link>> links(n);
  std::vector<std::vector<std::vector<double>>> to_var(n);
  std::vector<std::vector<std::vector<double>>> to_factor(n);
  for (std::size_t f = 0; f < n; ++f) {
    const auto& t = net.cpt(static_cast<VarId>(f));
    for (std::size_t k = 0; k < t.scope().size(); ++k) {
      const VarId u = t.scope()[k];
      plans[f].emplace_back(t.scope(), t.cards(), std::vector<VarId>{u});
      links[static_cast<std::size_t>(u)].push_back({f, k});
      const auto card = static_cast<std::size_t>(t.cards()[k]);
      to_var[f].emplace_back(card, 1.0 / static_cast<double>(card));
      to_factor[f].emplace_back(card, 1.0 / static_cast<double>(card));
    }
  }
  std::vector<std::vector<double>> unary(n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto card = static_cast<std::size_t>(net.variables()[v].cardinality());
    unary[v].assign(card, 1.0);
    if (const auto it = evidence.find(static_cast<VarId>(v)); it != evidence.end()) {
      std::fill(unary[v].begin(), unary[v].end(), 0.0);
      unary[v][static_cast<std::size_t>(it->second)] = 1.0;
    }
  }
  // Initial variable-to-factor messages carry the evidence.
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto& l : links[v]) {
      to_factor[l.factor][l.slot] = unary[v];
      normalize_message(to_factor[l.factor][l.slot]);
    }
  }

  LbpResult out;
  std::vector<double> factor_delta(n, 0.0);
  for (int iter = 1; iter <= options.max_iters; ++iter) {
    exec.parallel_for(n, [&](std::size_t f) {
      const auto& t = net.cpt(static_cast<VarId>(f));
      double delta = 0.0;
      for (std::size_t k = 0; k < t.scope().size(); ++k) {
        PotentialTable work = t;
        for (std::size_t j = 0; j < t.scope().size(); ++j) {
          if (j == k) continue;
          const PotentialTable msg({t.scope()[j]}, {t.cards()[j]}, to_factor[f][j]);
          multiply_in_place(work, msg, plans[f][j]);
        }
        std::vector<double> m = marginalize_with(work, plans[f][k]).values();
        normalize_message(m);
        auto& old = to_var[f][k];
        for (std::size_t s = 0; s < m.size(); ++s) {
          const double updated = (1.0 - options.damping) * m[s] + options.damping * old[s];
          delta = std::max(delta, std::abs(updated - old[s]));
          old[s] = updated;
        }
      }
      factor_delta[f] = delta;
    });
    exec.parallel_for(n, [&](std::size_t v) {
      for (const auto& target : links[v]) {
        std::vector<double> m = unary[v];
        for (const auto& l : links[v]) {
          if (l.factor == target.factor) continue;
          const auto& in = to_var[l.factor][l.slot];
          for (std::size_t s = 0; s < m.size(); ++s) m[s] *= in[s];
        }
        normalize_message(m);
        to_factor[target.factor][target.slot] = std::move(m);
      }
    });
    out.iterations = iter;
    const double delta = *std::max_element(factor_delta.begin(), factor_delta.end());
    if (delta < options.tol) {
      out.converged = true;
      break;
    }
  }

  out.child_messages.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<double> belief = unary[v];
    std::vector<double> lambda(belief.size(), 1.0);
    for (const auto& l : links[v]) {
      const auto& in = to_var[l.factor][l.slot];
      for (std::size_t s = 0; s < belief.size(); ++s) {
        belief[s] *= in[s];
        if (l.factor != v) lambda[s] *= in[s];
      }
    }
    normalize_message(belief);
    normalize_message(lambda);
    const auto card = net.variables()[v].cardinality();
    out.beliefs.emplace(static_cast<VarId>(v), PotentialTable({static_cast<VarId>(v)}, {card}, std::move(belief)));
    out.child_messages[v] = std::move(lambda);
  }
  return out;
}

}  // namespace pgm
