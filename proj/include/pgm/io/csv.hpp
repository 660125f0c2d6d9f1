#pragma once

#include <string>
#include <string_view>

#include "pgm/io/dataset.hpp"

namespace pgm {

/// Parses comma-separated data. Each column's distinct values, sorted
/// lexicographically, become its states. Without a header, columns are
/// named V0, V1, ...
Dataset load_csv(std::string_view text, bool header = true);

/// Parses data with a header against known variables: columns are matched to
/// variables by name and values to states by name. The resulting dataset
/// keeps the CSV column order and carries the schema's states.
Dataset load_csv_with_schema(std::string_view text, const std::vector<DiscreteVariable>& schema);

/// Writes a header plus one line per row using state names.
std::string write_csv(const Dataset& data);

}  // namespace pgm
