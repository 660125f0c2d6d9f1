#pragma once

#include "pgm/core/executor.hpp"
#include "pgm/core/network.hpp"
#include "pgm/io/dataset.hpp"

namespace pgm {

/// Fits CPTs by maximum likelihood with additive smoothing:
/// P(x | pa) = (N(x, pa) + c) / (N(pa) + c |X|). A parent configuration
/// that never occurs with c = 0 gets a uniform row.
///
/// Data columns are matched to structure variables by name; the dataset may
/// list them in any order but must cover exactly the same variables and
/// states. Families are counted in parallel.
Network fit_mle(const DagStructure& structure, const Dataset& data, double pseudocount = 1.0,
                const Executor& exec = serial_executor(), std::string name = "learned");

}  // namespace pgm
