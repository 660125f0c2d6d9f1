#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pgm/approx/samplers.hpp"
#include "pgm/io/dataset.hpp"

namespace pgm {

enum class Engine { kVe, kJt, kPls, kLw, kSis, kAis, kEpis, kLbp };

Engine parse_engine(std::string_view name);
std::string_view engine_name(Engine engine) noexcept;
bool is_exact(Engine engine) noexcept;

struct InferenceResult {
  MarginalSet marginals;
  Diagnostics diagnostics;
};

/// Posterior marginals of the query variables (all variables when queries is
/// empty) with the chosen engine.
InferenceResult infer(const Network& net, const Evidence& evidence, Engine engine,
                      const std::vector<VarId>& queries = {}, const SamplerConfig& cfg = {},
                      const Executor& exec = serial_executor());

struct ClassificationResult {
  std::vector<StateIndex> predictions;
  double accuracy = 0.0;
  /// Accuracy of always predicting the most frequent class in the data.
  double majority_baseline = 0.0;
};

/// Predicts class_var for every row from all other columns (argmax of the
/// posterior, ties to the lower state). Columns are matched to the network
/// by variable name. Rows are independent tasks; a failure is reported with
/// its row index.
ClassificationResult classify(const Network& net, const Dataset& data, VarId class_var, Engine engine,
                              const SamplerConfig& cfg = {}, const Executor& exec = serial_executor());

}  // namespace pgm
