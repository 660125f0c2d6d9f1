#pragma once

#include <vector>

#include "pgm/core/marginals.hpp"
#include "pgm/core/network.hpp"
#include "pgm/io/dataset.hpp"

namespace pgm::testing {

/// Joint probability of a full assignment, read from raw CPT storage with
/// locally computed strides.
double joint_probability(const Network& net, const std::vector<int>& x);

/// Posterior marginals of every variable by summing over all assignments.
/// Throws std::runtime_error when the evidence has probability zero.
std::vector<std::vector<double>> enumerate_posteriors(const Network& net, const Evidence& evidence,
                                                      double* evidence_probability = nullptr);

/// Exact empirical joint distribution of a variable subset of a dataset.
std::vector<double> empirical_joint(const Dataset& data, const std::vector<VarId>& vars);

struct OracleG2 {
  double statistic;
  int dof;
};

/// G^2 from per-stratum maps, without the library's counting code.
OracleG2 oracle_g2(const Dataset& data, VarId x, VarId y, const std::vector<VarId>& z);

/// Chi-square upper tail in closed form for 1, 2 and 4 degrees of freedom.
double closed_form_chi2_tail(double x, int dof);

/// Mean Hellinger distance between marginal tables and oracle vectors over
/// the variables not in the evidence.
double mean_hellinger_unobserved(const MarginalSet& est, const std::vector<std::vector<double>>& exact,
                                 const Evidence& evidence);

}  // namespace pgm::testing
