#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pgm/approx/layout.hpp"
#include "pgm/approx/lbp.hpp"
#include "pgm/core/executor.hpp"
#include "pgm/core/marginals.hpp"
#include "pgm/core/network.hpp"

namespace pgm {

struct SamplerConfig {
  std::size_t n_samples = 100000;
  std::uint64_t seed = 0;
  /// SIS update period; 0 means n_samples / 10.
  std::size_t update_interval = 0;
  /// Proposal floor; unset means 0.04 for AIS-BN and 0.01 for EPIS-BN.
  std::optional<double> epsilon_cutoff;
  double sis_blend = 0.5;
  /// AIS-BN learning rate a * (b / a)^(k / k_max) over k_max stages.
  double learning_rate_start = 0.4;
  double learning_rate_end = 0.14;
  int ais_stages = 10;
  LbpOptions lbp;
};

void validate_sampler_config(const SamplerConfig& cfg);

struct Diagnostics {
  std::size_t samples = 0;
  /// Fraction of samples with nonzero weight (accepted samples for PLS).
  double acceptance_rate = 0.0;
  /// (sum w)^2 / sum w^2 over the estimation samples.
  double effective_sample_size = 0.0;
  /// Loopy BP status, for LBP and EPIS-BN runs.
  bool converged = true;
  int iterations = 0;
};

struct SamplerResult {
  MarginalSet marginals;
  Diagnostics diagnostics;
};

/// Samples are processed in fixed blocks of this many, merged in block order.
inline constexpr std::size_t kSampleBlock = 1024;

/// Forward sampling with rejection of samples that contradict the evidence.
/// A sample stops as soon as an observed node disagrees.
SamplerResult probabilistic_logic_sampling(const Network& net, const Evidence& evidence, const SamplerConfig& cfg,
                                           const Executor& exec = serial_executor());

/// Importance sampling with an arbitrary proposal in the layout's row format
/// (evidence rows are ignored). Weights are P(x, e) / Q(x).
SamplerResult importance_sampling(const Network& net, const Evidence& evidence, std::span<const double> proposal,
                                  const SamplerConfig& cfg, const Executor& exec = serial_executor());

/// Importance sampling with the prior as proposal.
SamplerResult likelihood_weighting(const Network& net, const Evidence& evidence, const SamplerConfig& cfg,
                                   const Executor& exec = serial_executor());

/// Starts from the prior proposal and, every update_interval samples, blends
/// each unobserved node's rows toward the weighted family frequencies of all
/// samples drawn so far.
SamplerResult self_importance_sampling(const Network& net, const Evidence& evidence, const SamplerConfig& cfg,
                                       const Executor& exec = serial_executor());

/// AIS-BN. The first half of the samples is spent in ais_stages learning
/// stages, the second half estimates with the learned proposal. With a zero
/// starting rate no learning happens and every sample estimates.
SamplerResult ais_bn(const Network& net, const Evidence& evidence, const SamplerConfig& cfg,
                     const Executor& exec = serial_executor());

/// EPIS-BN: proposal rows are CPT rows times the loopy BP messages from the
/// node's children, renormalized and floored.
SamplerResult epis_bn(const Network& net, const Evidence& evidence, const SamplerConfig& cfg,
                      const Executor& exec = serial_executor());

/// Raises entries below eps to eps and scales the others so the row still
/// sums to one. Rows that cannot hold eps everywhere become uniform.
void apply_epsilon_cutoff(std::span<double> row, double eps);

/// AIS-BN starting proposal: prior rows, uniform rows for unobserved parents
/// of evidence, then the epsilon cutoff.
std::vector<double> ais_initial_proposal(const Network& net, const SamplingLayout& layout, const Evidence& evidence,
                                         double eps);

/// EPIS-BN proposal built from a finished loopy BP run.
std::vector<double> epis_proposal(const SamplingLayout& layout, const Evidence& evidence, const LbpResult& lbp,
                                  double eps);

}  // namespace pgm
