#pragma once

#include <vector>

#include "pgm/core/executor.hpp"
#include "pgm/core/marginals.hpp"
#include "pgm/core/network.hpp"

namespace pgm {

struct LbpOptions {
  int max_iters = 100;
  double tol = 1e-6;
  /// Weight kept from the previous message, in [0, 1).
  double damping = 0.0;
};

struct LbpResult {
  MarginalSet beliefs;
  bool converged = false;
  int iterations = 0;
  /// Per variable: normalized product of the messages its children's CPT
  /// factors send to it (the downward evidence).
  std::vector<std::vector<double>> child_messages;
};

/// Sum-product on the factor graph with one factor per CPT, flooding
/// schedule. Each iteration recomputes every factor-to-variable message from
/// the previous variable-to-factor messages, then every variable-to-factor
/// message. Stops when the largest change of a factor-to-variable message is
/// below tol. Factors are processed in parallel; the result does not depend
/// on the worker count.
LbpResult loopy_belief_propagation(const Network& net, const Evidence& evidence = {},
                                   const LbpOptions& options = {},
                                   const Executor& exec = serial_executor());

}  // namespace pgm
