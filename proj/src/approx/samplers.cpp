#include "pgm/approx/samplers.hpp"

#include <algorithm>
#include <cmath>

#include "pgm/approx/rng.hpp"
#include "pgm/core/error.hpp"

namespace pgm {

namespace {

struct Tally {
  std::vector<double> marginals;
  std::vector<double> families;
  double sum_w = 0.0;
  double sum_w2 = 0.0;
  std::size_t accepted = 0;
};

struct RunPlan {
  const SamplingLayout* layout = nullptr;
  const double* prior = nullptr;
  /// Proposal rows; equal to prior for plain forward sampling.
  const double* proposal = nullptr;
  std::vector<StateIndex> observed;
  bool reject = false;
  bool families = false;
  std::uint64_t seed = 0;
};

RunPlan make_plan(const SamplingLayout& layout, const Network& net, const Evidence& evidence, std::uint64_t seed) {
  RunPlan plan;
  plan.layout = &layout;
  plan.prior = layout.cpt_rows().data();
  plan.proposal = plan.prior;
  plan.observed.assign(net.size(), -1);
  for (const auto& [v, s] : evidence) plan.observed[static_cast<std::size_t>(v)] = s;
  plan.seed = seed;
  return plan;
}

Tally run_block(const RunPlan& plan, std::size_t begin, std::size_t end) {
  const SamplingLayout& layout = *plan.layout;
  Tally t;
  t.marginals.assign(layout.marginal_size(), 0.0);
  if (plan.families) t.families.assign(layout.row_size(), 0.0);
  std::vector<StateIndex> x(layout.variable_count(), 0);
  std::vector<std::size_t> row_at(layout.variable_count(), 0);
  const bool same_proposal = plan.proposal == plan.prior;

  for (std::size_t i = begin; i < end; ++i) {
    CounterRng rng(plan.seed, i);
    double w = 1.0;
    std::size_t pos = 0;
    for (const FusedNode& node : layout.nodes()) {
      const std::size_t row = node.offset + layout.config_of(node, x) * static_cast<std::size_t>(node.card);
      row_at[pos++] = row;
      const StateIndex e = plan.observed[static_cast<std::size_t>(node.var)];
      StateIndex s;
      if (e >= 0 && !plan.reject) {
        s = e;
        w *= plan.prior[row + static_cast<std::size_t>(s)];
      } else {
        s = draw_state(plan.proposal + row, node.card, rng.uniform());
        if (e >= 0 && s != e) {
          w = 0.0;
        } else if (!same_proposal) {
          w *= plan.prior[row + static_cast<std::size_t>(s)] / plan.proposal[row + static_cast<std::size_t>(s)];
        }
      }
      if (w == 0.0) break;
      x[static_cast<std::size_t>(node.var)] = s;
    }
    if (w == 0.0) continue;
    ++t.accepted;
    t.sum_w += w;
    t.sum_w2 += w * w;
    for (std::size_t v = 0; v < x.size(); ++v) {
      t.marginals[layout.marginal_offset(static_cast<VarId>(v)) + static_cast<std::size_t>(x[v])] += w;
    }
    if (plan.families) {
      pos = 0;
      for (const FusedNode& node : layout.nodes()) {
        t.families[row_at[pos++] + static_cast<std::size_t>(x[static_cast<std::size_t>(node.var)])] += w;
      }
    }
  }
  return t;
}

Tally fold(Tally acc, Tally part) {
  if (acc.marginals.empty()) return part;
  for (std::size_t k = 0; k < acc.marginals.size(); ++k) acc.marginals[k] += part.marginals[k];
  for (std::size_t k = 0; k < acc.families.size(); ++k) acc.families[k] += part.families[k];
  acc.sum_w += part.sum_w;
  acc.sum_w2 += part.sum_w2;
  acc.accepted += part.accepted;
  return acc;
}

Tally run_samples(const RunPlan& plan, std::size_t begin, std::size_t end, const Executor& exec) {
  return deterministic_reduce(
      exec, end - begin, kSampleBlock, Tally{},
      [&](BlockRange r) { return run_block(plan, begin + r.begin, begin + r.end); }, fold);
}

SamplerResult finish(const Network& net, const Evidence& evidence, const SamplingLayout& layout, const Tally& t,
                     std::size_t n, bool rejection) {
  if (!(t.sum_w > 0.0)) {
    if (rejection) {
      throw Error(ErrorCode::kAllSamplesRejected,
                  "all samples rejected (rejection rate 1 over " + std::to_string(n) + " samples)");
    }
    throw Error(ErrorCode::kZeroTotalWeight, "zero total weight: no sample is consistent with the evidence");
  }
  SamplerResult out;
  for (std::size_t v = 0; v < net.size(); ++v) {
    const auto var = static_cast<VarId>(v);
    const int card = net.variables()[v].cardinality();
    if (const auto it = evidence.find(var); it != evidence.end()) {
      out.marginals.emplace(var, one_hot(var, card, it->second));
      continue;
    }
    std::vector<double> values(static_cast<std::size_t>(card));
    const std::size_t off = layout.marginal_offset(var);
    for (std::size_t s = 0; s < values.size(); ++s) values[s] = t.marginals[off + s] / t.sum_w;
    out.marginals.emplace(var, PotentialTable({var}, {card}, std::move(values)));
  }
  out.diagnostics.samples = n;
  out.diagnostics.acceptance_rate = static_cast<double>(t.accepted) / static_cast<double>(n);
  out.diagnostics.effective_sample_size = t.sum_w * t.sum_w / t.sum_w2;
  return out;
}

void check_inputs(const Network& net, const Evidence& evidence, const SamplerConfig& cfg) {
  validate_sampler_config(cfg);
  validate_evidence(net.variables(), evidence);
}

// Weighted frequency estimate of one row, or false when the row saw no weight.
bool row_estimate(const Tally& t, std::size_t row, int card, std::vector<double>& est) {
  double total = 0.0;
  for (int s = 0; s < card; ++s) total += t.families[row + static_cast<std::size_t>(s)];
  if (!(total > 0.0)) return false;
  est.resize(static_cast<std::size_t>(card));
  for (int s = 0; s < card; ++s) est[static_cast<std::size_t>(s)] = t.families[row + static_cast<std::size_t>(s)] / total;
  return true;
}

template <class Update>
void update_unobserved_rows(const SamplingLayout& layout, const RunPlan& plan, const Tally& t,
                            std::vector<double>& proposal, Update&& update) {
  std::vector<double> est;
  for (const FusedNode& node : layout.nodes()) {
    if (plan.observed[static_cast<std::size_t>(node.var)] >= 0) continue;
    for (std::size_t c = 0; c < node.configs; ++c) {
      const std::size_t row = node.offset + c * static_cast<std::size_t>(node.card);
      if (!row_estimate(t, row, node.card, est)) continue;
      update(std::span<double>(proposal.data() + row, static_cast<std::size_t>(node.card)), est);
    }
  }
}

}  // namespace

void validate_sampler_config(const SamplerConfig& cfg) {
  if (cfg.n_samples == 0) throw Error(ErrorCode::kInvalidArgument, "n_samples must be > 0");
  if (cfg.epsilon_cutoff && !(*cfg.epsilon_cutoff > 0.0 && *cfg.epsilon_cutoff < 0.5)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon_cutoff must be in (0,0.5)");
  }
  if (!(cfg.sis_blend > 0.0 && cfg.sis_blend <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "sis_blend must be in (0,1]");
  }
  if (!(cfg.learning_rate_start >= 0.0 && cfg.learning_rate_start <= 1.0) ||
      !(cfg.learning_rate_end >= 0.0 && cfg.learning_rate_end <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "learning rates must be in [0,1]");
  }
  if (cfg.ais_stages < 1) throw Error(ErrorCode::kInvalidArgument, "ais_stages must be >= 1");
  if (cfg.lbp.max_iters < 1 || !(cfg.lbp.tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "lbp needs max_iters >= 1 and tol > 0");
  }
}

void apply_epsilon_cutoff(std::span<double> row, double eps) {
  const std::size_t card = row.size();
  std::vector<char> floored(card, 0);
  for (std::size_t round = 0; round < card; ++round) {
    std::size_t k = 0;
    double rest = 0.0;
    for (std::size_t s = 0; s < card; ++s) {
      if (floored[s] || row[s] < eps) {
        floored[s] = 1;
        ++k;
      } else {
        rest += row[s];
      }
    }
    if (k == 0) return;
    const double room = 1.0 - static_cast<double>(k) * eps;
    if (!(room > 0.0) || !(rest > 0.0)) {
      std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(card));
      return;
    }
    bool stable = true;
    for (std::size_t s = 0; s < card; ++s) {
      if (floored[s]) {
        row[s] = eps;
      } else {
        row[s] *= room / rest;
        if (row[s] < eps) stable = false;
      }
    }
    if (stable) return;
  }
}

SamplerResult probabilistic_logic_sampling(const Network& net, const Evidence& evidence, const SamplerConfig& cfg,
                                           const Executor& exec) {
  check_inputs(net, evidence, cfg);
  const SamplingLayout layout(net);
  RunPlan plan = make_plan(layout, net, evidence, cfg.seed);
  plan.reject = true;
  const Tally t = run_samples(plan, 0, cfg.n_samples, exec);
  return finish(net, evidence, layout, t, cfg.n_samples, true);
}

SamplerResult importance_sampling(const Network& net, const Evidence& evidence, std::span<const double> proposal,
                                  const SamplerConfig& cfg, const Executor& exec) {
  check_inputs(net, evidence, cfg);
  const SamplingLayout layout(net);
  if (proposal.size() != layout.row_size()) {
    throw Error(ErrorCode::kInvalidArgument, "proposal does not match the network layout");
  }
  RunPlan plan = make_plan(layout, net, evidence, cfg.seed);
  plan.proposal = proposal.data();
  const Tally t = run_samples(plan, 0, cfg.n_samples, exec);
  return finish(net, evidence, layout, t, cfg.n_samples, false);
}

SamplerResult likelihood_weighting(const Network& net, const Evidence& evidence, const SamplerConfig& cfg,
                                   const Executor& exec) {
  check_inputs(net, evidence, cfg);
  const SamplingLayout layout(net);
  const RunPlan plan = make_plan(layout, net, evidence, cfg.seed);
  const Tally t = run_samples(plan, 0, cfg.n_samples, exec);
  return finish(net, evidence, layout, t, cfg.n_samples, false);
}

SamplerResult self_importance_sampling(const Network& net, const Evidence& evidence, const SamplerConfig& cfg,
                                       const Executor& exec) {
  check_inputs(net, evidence, cfg);
  const SamplingLayout layout(net);
  const std::size_t n = cfg.n_samples;
  const std::size_t interval = cfg.update_interval > 0 ? cfg.update_interval : std::max<std::size_t>(1, n / 10);
  std::vector<double> proposal = layout.cpt_rows();
  RunPlan plan = make_plan(layout, net, evidence, cfg.seed);
  plan.families = true;

  Tally total;
  for (std::size_t begin = 0; begin < n; begin += interval) {
    const std::size_t end = std::min(n, begin + interval);
    // A proposal equal to the prior keeps weights exact, matching LW bit for bit.
    plan.proposal = begin == 0 ? plan.prior : proposal.data();
    total = fold(std::move(total), run_samples(plan, begin, end, exec));
    if (end == n) break;
    const double blend = cfg.sis_blend;
    update_unobserved_rows(layout, plan, total, proposal, [&](std::span<double> row, const std::vector<double>& est) {
      for (std::size_t s = 0; s < row.size(); ++s) row[s] = (1.0 - blend) * row[s] + blend * est[s];
    });
  }
  return finish(net, evidence, layout, total, n, false);
}

std::vector<double> ais_initial_proposal(const Network& net, const SamplingLayout& layout, const Evidence& evidence,
                                         double eps) {
  std::vector<double> proposal = layout.cpt_rows();
  std::vector<char> uniform(net.size(), 0);
  for (const auto& [v, s] : evidence) {
    for (VarId p : net.parents(v)) uniform[static_cast<std::size_t>(p)] = 1;
  }
  for (const FusedNode& node : layout.nodes()) {
    if (evidence.contains(node.var)) continue;
    for (std::size_t c = 0; c < node.configs; ++c) {
      std::span<double> row(proposal.data() + node.offset + c * static_cast<std::size_t>(node.card),
                            static_cast<std::size_t>(node.card));
      if (uniform[static_cast<std::size_t>(node.var)]) std::fill(row.begin(), row.end(), 1.0 / node.card);
      apply_epsilon_cutoff(row, eps);
    }
  }
  return proposal;
}

SamplerResult ais_bn(const Network& net, const Evidence& evidence, const SamplerConfig& cfg, const Executor& exec) {
  check_inputs(net, evidence, cfg);
  const SamplingLayout layout(net);
  const double eps = cfg.epsilon_cutoff.value_or(0.04);
  std::vector<double> proposal = ais_initial_proposal(net, layout, evidence, eps);
  RunPlan plan = make_plan(layout, net, evidence, cfg.seed);
  plan.proposal = proposal.data();

  const double a = cfg.learning_rate_start;
  const double b = cfg.learning_rate_end;
  const auto k_max = static_cast<std::size_t>(cfg.ais_stages);
  const std::size_t stage = a > 0.0 ? cfg.n_samples / (2 * k_max) : 0;
  std::size_t next = 0;
  if (stage > 0) {
    plan.families = true;
    for (std::size_t k = 0; k < k_max; ++k) {
      const Tally t = run_samples(plan, next, next + stage, exec);
      next += stage;
      const double eta = a * std::pow(b / a, static_cast<double>(k) / static_cast<double>(k_max));
      update_unobserved_rows(layout, plan, t, proposal, [&](std::span<double> row, const std::vector<double>& est) {
        for (std::size_t s = 0; s < row.size(); ++s) row[s] += eta * (est[s] - row[s]);
        apply_epsilon_cutoff(row, eps);
      });
    }
    plan.families = false;
  }
  const Tally t = run_samples(plan, next, cfg.n_samples, exec);
  return finish(net, evidence, layout, t, cfg.n_samples - next, false);
}

std::vector<double> epis_proposal(const SamplingLayout& layout, const Evidence& evidence, const LbpResult& lbp,
                                  double eps) {
  std::vector<double> proposal = layout.cpt_rows();
  for (const FusedNode& node : layout.nodes()) {
    if (evidence.contains(node.var)) continue;
    const auto& lambda = lbp.child_messages.at(static_cast<std::size_t>(node.var));
    for (std::size_t c = 0; c < node.configs; ++c) {
      std::span<double> row(proposal.data() + node.offset + c * static_cast<std::size_t>(node.card),
                            static_cast<std::size_t>(node.card));
      double total = 0.0;
      for (std::size_t s = 0; s < row.size(); ++s) total += row[s] *= lambda[s];
      if (total > 0.0) {
        for (double& p : row) p /= total;
      } else {
        std::fill(row.begin(), row.end(), 1.0 / node.card);
      }
      apply_epsilon_cutoff(row, eps);
    }
  }
  return proposal;
}

SamplerResult epis_bn(const Network& net, const Evidence& evidence, const SamplerConfig& cfg, const Executor& exec) {
  check_inputs(net, evidence, cfg);
  const LbpResult lbp = loopy_belief_propagation(net, evidence, cfg.lbp, exec);
  const SamplingLayout layout(net);
  const std::vector<double> proposal = epis_proposal(layout, evidence, lbp, cfg.epsilon_cutoff.value_or(0.01));
  RunPlan plan = make_plan(layout, net, evidence, cfg.seed);
  plan.proposal = proposal.data();
  const Tally t = run_samples(plan, 0, cfg.n_samples, exec);
  SamplerResult out = finish(net, evidence, layout, t, cfg.n_samples, false);
  out.diagnostics.converged = lbp.converged;
  out.diagnostics.iterations = lbp.iterations;
  return out;
}

}  // namespace pgm
