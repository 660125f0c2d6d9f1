#pragma once

#include "pgm/core/marginals.hpp"
#include "pgm/learn/pdag.hpp"

namespace pgm {

/// Structural Hamming distance over unordered pairs: 1 for an edge present in
/// only one graph, 1 for an edge present in both with different marks.
int shd(const PdagGraph& g1, const PdagGraph& g2);

/// sqrt(1/2 sum (sqrt p - sqrt q)^2), in [0, 1]. Both tables must share a
/// scope and sum to one within 1e-6.
double hellinger(const PotentialTable& p, const PotentialTable& q);

/// Mean per-variable Hellinger distance over the variables present in both sets.
double mean_hellinger(const MarginalSet& a, const MarginalSet& b);

}  // namespace pgm
