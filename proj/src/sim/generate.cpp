#include "pgm/sim/generate.hpp"

#include "pgm/approx/layout.hpp"
#include "pgm/approx/rng.hpp"
#include "pgm/core/error.hpp"

namespace pgm {

Dataset generate_dataset(const Network& net, std::size_t n, std::uint64_t seed, const Executor& exec) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "sample count must be >= 1");
  const SamplingLayout layout(net);
  Dataset data;
  data.variables = net.variables();
  data.n_rows = n;
  data.columns.assign(net.size(), std::vector<StateIndex>(n, 0));

  constexpr std::size_t kBlock = 1024;
  const double* rows = layout.cpt_rows().data();
  exec.parallel_for(block_count(n, kBlock), [&](std::size_t b) {
    const auto range = block_range(n, kBlock, b);
    std::vector<StateIndex> x(net.size(), 0);
    for (std::size_t r = range.begin; r < range.end; ++r) {
      CounterRng rng(seed, r);
      for (const FusedNode& node : layout.nodes()) {
        const std::size_t row = node.offset + layout.config_of(node, x) * static_cast<std::size_t>(node.card);
        x[static_cast<std::size_t>(node.var)] = draw_state(rows + row, node.card, rng.uniform());
      }
      for (std::size_t v = 0; v < x.size(); ++v) data.columns[v][r] = x[v];
    }
  });
  return data;
}

}  // namespace pgm
