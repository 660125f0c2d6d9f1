#pragma once

#include <cstddef>
#include <cstdint>

#include "pgm/core/executor.hpp"
#include "pgm/core/network.hpp"
#include "pgm/io/dataset.hpp"

namespace pgm {

/// n forward samples. Row r draws from CounterRng(seed, r), so the dataset
/// depends only on (net, n, seed). Rows are filled in parallel blocks.
Dataset generate_dataset(const Network& net, std::size_t n, std::uint64_t seed,
                         const Executor& exec = serial_executor());

}  // namespace pgm
