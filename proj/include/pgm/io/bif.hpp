#pragma once

#include <string>
#include <string_view>

#include "pgm/core/network.hpp"

namespace pgm {

/// Parses BIF v0.3 text.
///
/// Supported blocks: `network`, `variable` with `type discrete [k] { ... };`,
/// and `probability ( X | P1, ... )` with any mix of `table`, `default` and
/// per-configuration `(s1, ...) p1, ...;` entries. For `table`, the node's
/// state varies fastest and parent configurations follow the declared parent
/// order with the last parent fastest. `property` lines are ignored.
///
/// Rows whose sum is off by at most 1e-6 are renormalized; larger deviations
/// are rejected.
Network parse_bif(std::string_view text);

/// Emits BIF v0.3 with 17 significant digits, variables in id order.
std::string write_bif(const Network& net);

}  // namespace pgm
