#include "pgm/io/csv.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "pgm/core/error.hpp"

namespace pgm {

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

struct Line {
  std::size_t number;
  std::vector<std::string> fields;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (trim(line).empty()) continue;
    Line parsed{number, {}};
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      parsed.fields.emplace_back(trim(line.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    lines.push_back(std::move(parsed));
  }
  return lines;
}

void check_ragged(const std::vector<Line>& lines, std::size_t width) {
  for (const auto& line : lines) {
    if (line.fields.size() != width) {
      throw Error(ErrorCode::kParse, "ragged row at line " + std::to_string(line.number) + ": expected " +
                                         std::to_string(width) + " fields, got " +
                                         std::to_string(line.fields.size()));
    }
    for (std::size_t c = 0; c < width; ++c) {
      if (line.fields[c].empty()) {
        throw Error(ErrorCode::kParse, "missing value at line " + std::to_string(line.number) + ", column " +
                                           std::to_string(c + 1));
      }
    }
  }
}

}  // namespace

Dataset load_csv(std::string_view text, bool header) {
  auto lines = split_lines(text);
  if (lines.empty()) throw Error(ErrorCode::kParse, "empty file");
  const std::size_t width = lines.front().fields.size();
  check_ragged(lines, width);

  std::vector<std::string> names;
  std::size_t first = 0;
  if (header) {
    names = lines.front().fields;
    first = 1;
  } else {
    for (std::size_t c = 0; c < width; ++c) names.push_back("V" + std::to_string(c));
  }
  if (lines.size() <= first) throw Error(ErrorCode::kParse, "no data rows");

  Dataset data;
  data.n_rows = lines.size() - first;
  data.columns.resize(width);
  for (std::size_t c = 0; c < width; ++c) {
    std::set<std::string> distinct;
    for (std::size_t r = first; r < lines.size(); ++r) distinct.insert(lines[r].fields[c]);
    if (distinct.size() < 2) {
      throw Error(ErrorCode::kParse, "column '" + names[c] + "' has a single distinct value");
    }
    DiscreteVariable var;
    var.id = static_cast<VarId>(c);
    var.name = names[c];
    var.states.assign(distinct.begin(), distinct.end());
    std::map<std::string, StateIndex> index;
    for (std::size_t s = 0; s < var.states.size(); ++s) index[var.states[s]] = static_cast<StateIndex>(s);
    auto& col = data.columns[c];
    col.reserve(data.n_rows);
    for (std::size_t r = first; r < lines.size(); ++r) col.push_back(index[lines[r].fields[c]]);
    data.variables.push_back(std::move(var));
  }
  validate_variables(data.variables);
  return data;
}

Dataset load_csv_with_schema(std::string_view text, const std::vector<DiscreteVariable>& schema) {
  auto lines = split_lines(text);
  if (lines.empty()) throw Error(ErrorCode::kParse, "empty file");
  const auto& header = lines.front().fields;
  check_ragged(lines, header.size());
  if (lines.size() < 2) throw Error(ErrorCode::kParse, "no data rows");

  Dataset data;
  data.n_rows = lines.size() - 1;
  std::set<std::string> seen;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto it = std::find_if(schema.begin(), schema.end(),
                                 [&](const DiscreteVariable& v) { return v.name == header[c]; });
    if (it == schema.end()) {
      throw Error(ErrorCode::kVariableMismatch, "column '" + header[c] + "' is not a model variable");
    }
    if (!seen.insert(header[c]).second) {
      throw Error(ErrorCode::kParse, "duplicate column '" + header[c] + "'");
    }
    DiscreteVariable var = *it;
    var.id = static_cast<VarId>(c);
    std::vector<StateIndex> col;
    col.reserve(data.n_rows);
    for (std::size_t r = 1; r < lines.size(); ++r) {
      const auto state = var.state_index(lines[r].fields[c]);
      if (!state) {
        throw Error(ErrorCode::kParse, "unknown state '" + lines[r].fields[c] + "' for '" + var.name +
                                           "' at line " + std::to_string(lines[r].number));
      }
      col.push_back(*state);
    }
    data.columns.push_back(std::move(col));
    data.variables.push_back(std::move(var));
  }
  return data;
}

std::string write_csv(const Dataset& data) {
  std::string out;
  for (std::size_t c = 0; c < data.variables.size(); ++c) {
    if (c > 0) out += ',';
    out += data.variables[c].name;
  }
  out += '\n';
  for (std::size_t r = 0; r < data.n_rows; ++r) {
    for (std::size_t c = 0; c < data.columns.size(); ++c) {
      if (c > 0) out += ',';
      out += data.variables[c].states[static_cast<std::size_t>(data.columns[c][r])];
    }
    out += '\n';
  }
  return out;
}

}  // namespace pgm
