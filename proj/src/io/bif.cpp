#include "pgm/io/bif.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>

#include "pgm/core/error.hpp"

namespace pgm {

namespace {

constexpr double kRowSumTolerance = 1e-6;
// Rows closer to one than this are kept verbatim so that write/parse cycles
// reach a fixpoint.
constexpr double kRenormalizeThreshold = 1e-12;

struct Token {
  enum Kind { kWord, kPunct, kEnd } kind;
  std::string text;
  std::size_t line;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space_and_comments();
    if (pos_ >= text_.size()) return {Token::kEnd, "", line_};
    const char c = text_[pos_];
    if (is_punct(c)) {
      ++pos_;
      return {Token::kPunct, std::string(1, c), line_};
    }
    if (c == '"') {
      const std::size_t start = ++pos_;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\n') ++line_;
        ++pos_;
      }
      if (pos_ >= text_.size()) throw Error(ErrorCode::kParse, "unterminated string at line " + std::to_string(line_));
      std::string word(text_.substr(start, pos_ - start));
      ++pos_;
      return {Token::kWord, std::move(word), line_};
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !is_space(text_[pos_]) && !is_punct(text_[pos_]) && text_[pos_] != '"') {
      if (text_[pos_] == '/' && pos_ + 1 < text_.size() && (text_[pos_ + 1] == '/' || text_[pos_ + 1] == '*')) break;
      ++pos_;
    }
    return {Token::kWord, std::string(text_.substr(start, pos_ - start)), line_};
  }

 private:
  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }
  static bool is_punct(char c) {
    return c == '{' || c == '}' || c == '(' || c == ')' || c == '[' || c == ']' || c == ',' || c == ';' ||
           c == '|';
  }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (is_space(c)) {
        ++pos_;
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
        pos_ += 2;
        while (pos_ + 1 < text_.size() && !(text_[pos_] == '*' && text_[pos_ + 1] == '/')) {
          if (text_[pos_] == '\n') ++line_;
          ++pos_;
        }
        pos_ += 2;
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

struct RowEntry {
  std::vector<std::string> parent_states;
  std::vector<double> values;
  std::size_t line;
};

struct ProbabilityBlock {
  std::string child;
  std::vector<std::string> parents;
  std::optional<std::vector<double>> table;
  std::optional<std::vector<double>> default_row;
  std::vector<RowEntry> rows;
  std::size_t line;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { advance(); }

  Network parse() {
    while (cur_.kind != Token::kEnd) {
      const Token kw = expect_word();
      if (kw.text == "network") {
        parse_network();
      } else if (kw.text == "variable") {
        parse_variable();
      } else if (kw.text == "probability") {
        parse_probability();
      } else {
        fail("unexpected keyword '" + kw.text + "'", kw.line);
      }
    }
    return build();
  }

 private:
  [[noreturn]] static void fail(const std::string& msg, std::size_t line) {
    throw Error(ErrorCode::kParse, msg + " (line " + std::to_string(line) + ")");
  }

  void advance() { cur_ = lexer_.next(); }

  Token expect_word() {
    if (cur_.kind != Token::kWord) fail("expected a word, found '" + cur_.text + "'", cur_.line);
    Token t = cur_;
    advance();
    return t;
  }

  void expect(char punct) {
    if (cur_.kind != Token::kPunct || cur_.text[0] != punct) {
      fail(std::string("expected '") + punct + "', found '" + cur_.text + "'", cur_.line);
    }
    advance();
  }

  bool at(char punct) const { return cur_.kind == Token::kPunct && cur_.text[0] == punct; }

  void skip_statement() {
    while (cur_.kind != Token::kEnd && !at(';')) advance();
    expect(';');
  }

  static double to_number(const Token& t) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(t.text.c_str(), &end);
    if (end == t.text.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
      fail("invalid number '" + t.text + "'", t.line);
    }
    if (v < 0.0) fail("negative probability '" + t.text + "'", t.line);
    return v;
  }

  std::vector<double> read_numbers() {
    std::vector<double> values;
    while (!at(';')) {
      if (cur_.kind == Token::kEnd) fail("unexpected end of input", cur_.line);
      if (at(',')) {
        advance();
        continue;
      }
      values.push_back(to_number(expect_word()));
    }
    expect(';');
    return values;
  }

  void parse_network() {
    while (cur_.kind == Token::kWord) {
      if (name_.empty()) name_ = cur_.text;
      advance();
    }
    expect('{');
    int depth = 1;
    while (depth > 0) {
      if (cur_.kind == Token::kEnd) fail("unterminated network block", cur_.line);
      if (at('{')) ++depth;
      if (at('}')) --depth;
      advance();
    }
  }

  void parse_variable() {
    const Token name = expect_word();
    if (var_index_.count(name.text)) fail("duplicate variable '" + name.text + "'", name.line);
    expect('{');
    DiscreteVariable var;
    var.name = name.text;
    bool typed = false;
    while (!at('}')) {
      const Token kw = expect_word();
      if (kw.text == "type") {
        const Token kind = expect_word();
        if (kind.text != "discrete") fail("only discrete variables are supported", kind.line);
        expect('[');
        const Token k = expect_word();
        const long declared = std::strtol(k.text.c_str(), nullptr, 10);
        expect(']');
        expect('{');
        while (!at('}')) {
          if (at(',')) {
            advance();
            continue;
          }
          var.states.push_back(expect_word().text);
        }
        expect('}');
        expect(';');
        if (declared != static_cast<long>(var.states.size())) {
          fail("cardinality mismatch for '" + var.name + "': declared " + k.text + ", listed " +
                   std::to_string(var.states.size()) + " states",
               kw.line);
        }
        typed = true;
      } else if (kw.text == "property") {
        skip_statement();
      } else {
        fail("unexpected '" + kw.text + "' in variable block", kw.line);
      }
    }
    expect('}');
    if (!typed) fail("variable '" + var.name + "' has no type", name.line);
    var.id = static_cast<VarId>(variables_.size());
    var_index_[var.name] = var.id;
    variables_.push_back(std::move(var));
  }

  void parse_probability() {
    ProbabilityBlock block;
    block.line = cur_.line;
    expect('(');
    block.child = expect_word().text;
    if (at('|')) {
      advance();
      while (!at(')')) {
        if (at(',')) {
          advance();
          continue;
        }
        block.parents.push_back(expect_word().text);
      }
    }
    expect(')');
    expect('{');
    while (!at('}')) {
      if (at('(')) {
        RowEntry row;
        row.line = cur_.line;
        advance();
        while (!at(')')) {
          if (at(',')) {
            advance();
            continue;
          }
          row.parent_states.push_back(expect_word().text);
        }
        expect(')');
        row.values = read_numbers();
        block.rows.push_back(std::move(row));
        continue;
      }
      const Token kw = expect_word();
      if (kw.text == "table") {
        block.table = read_numbers();
      } else if (kw.text == "default") {
        block.default_row = read_numbers();
      } else if (kw.text == "property") {
        skip_statement();
      } else {
        fail("unexpected '" + kw.text + "' in probability block", kw.line);
      }
    }
    expect('}');
    blocks_.push_back(std::move(block));
  }

  VarId resolve(const std::string& name, std::size_t line) const {
    const auto it = var_index_.find(name);
    if (it == var_index_.end()) fail("unknown variable reference '" + name + "'", line);
    return it->second;
  }

  static void check_row(std::vector<double>& row, const std::string& var, std::size_t line) {
    double s = 0.0;
    for (double v : row) s += v;
    const double dev = std::abs(s - 1.0);
    if (dev > kRowSumTolerance) {
      std::ostringstream msg;
      msg << "row sum " << s << " exceeds tolerance for '" << var << "'";
      fail(msg.str(), line);
    }
    if (dev > kRenormalizeThreshold) {
      for (double& v : row) v /= s;
    }
  }

  Network build() {
    const std::size_t n = variables_.size();
    std::vector<std::vector<VarId>> parents(n);
    std::vector<std::vector<double>> rows(n);
    std::vector<bool> defined(n, false);

    for (auto& block : blocks_) {
      const VarId child = resolve(block.child, block.line);
      const auto c = static_cast<std::size_t>(child);
      if (defined[c]) fail("duplicate probability block for '" + block.child + "'", block.line);
      defined[c] = true;
      std::vector<int> parent_cards;
      std::size_t configs = 1;
      for (const auto& p : block.parents) {
        const VarId pid = resolve(p, block.line);
        parents[c].push_back(pid);
        parent_cards.push_back(variables_[static_cast<std::size_t>(pid)].cardinality());
        configs *= static_cast<std::size_t>(parent_cards.back());
      }
      const auto card = static_cast<std::size_t>(variables_[c].cardinality());
      std::vector<double> flat(configs * card, 0.0);
      std::vector<bool> filled(configs, false);

      const auto put_row = [&](std::size_t cfg, std::vector<double> values, std::size_t line) {
        if (values.size() != card) {
          fail("cardinality mismatch for '" + block.child + "': expected " + std::to_string(card) +
                   " probabilities, got " + std::to_string(values.size()),
               line);
        }
        check_row(values, block.child, line);
        std::copy(values.begin(), values.end(), flat.begin() + static_cast<std::ptrdiff_t>(cfg * card));
        filled[cfg] = true;
      };

      if (block.default_row) {
        for (std::size_t cfg = 0; cfg < configs; ++cfg) put_row(cfg, *block.default_row, block.line);
      }
      if (block.table) {
        if (block.table->size() != configs * card) {
          fail("cardinality mismatch for '" + block.child + "': table has " +
                   std::to_string(block.table->size()) + " entries, expected " + std::to_string(configs * card),
               block.line);
        }
        for (std::size_t cfg = 0; cfg < configs; ++cfg) {
          std::vector<double> row(block.table->begin() + static_cast<std::ptrdiff_t>(cfg * card),
                                  block.table->begin() + static_cast<std::ptrdiff_t>((cfg + 1) * card));
          put_row(cfg, std::move(row), block.line);
        }
      }
      for (auto& entry : block.rows) {
        if (entry.parent_states.size() != block.parents.size()) {
          fail("row for '" + block.child + "' lists " + std::to_string(entry.parent_states.size()) +
                   " parent states, expected " + std::to_string(block.parents.size()),
               entry.line);
        }
        std::size_t cfg = 0;
        for (std::size_t k = 0; k < entry.parent_states.size(); ++k) {
          const auto& pvar = variables_[static_cast<std::size_t>(parents[c][k])];
          const auto s = pvar.state_index(entry.parent_states[k]);
          if (!s) fail("unknown state '" + entry.parent_states[k] + "' of '" + pvar.name + "'", entry.line);
          cfg = cfg * static_cast<std::size_t>(parent_cards[k]) + static_cast<std::size_t>(*s);
        }
        put_row(cfg, std::move(entry.values), entry.line);
      }
      for (std::size_t cfg = 0; cfg < configs; ++cfg) {
        if (!filled[cfg]) fail("missing probability row for '" + block.child + "'", block.line);
      }
      rows[c] = std::move(flat);
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (!defined[v]) throw Error(ErrorCode::kParse, "no probability block for '" + variables_[v].name + "'");
    }
    if (!topological_order(parents)) throw Error(ErrorCode::kParse, "cyclic parent structure");
    try {
      return Network::from_rows(name_.empty() ? "unknown" : name_, variables_, parents, rows);
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, e.what());
    }
  }

  Lexer lexer_;
  Token cur_{Token::kEnd, "", 1};
  std::string name_;
  std::vector<DiscreteVariable> variables_;
  std::map<std::string, VarId> var_index_;
  std::vector<ProbabilityBlock> blocks_;
};

std::string format_probability(double p) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", p);
  return buf;
}

}  // namespace

Network parse_bif(std::string_view text) { return Parser(text).parse(); }

std::string write_bif(const Network& net) {
  std::ostringstream out;
  out << "network " << (net.name().empty() ? "unknown" : net.name()) << " {\n}\n";
  for (const auto& v : net.variables()) {
    out << "variable " << v.name << " {\n  type discrete [ " << v.cardinality() << " ] { ";
    for (std::size_t s = 0; s < v.states.size(); ++s) out << (s ? ", " : "") << v.states[s];
    out << " };\n}\n";
  }
  for (const auto& v : net.variables()) {
    const auto& parents = net.parents(v.id);
    out << "probability ( " << v.name;
    for (std::size_t k = 0; k < parents.size(); ++k) {
      out << (k ? ", " : " | ") << net.variable(parents[k]).name;
    }
    out << " ) {\n";
    const auto rows = net.cpt_rows(v.id);
    const auto card = static_cast<std::size_t>(v.cardinality());
    if (parents.empty()) {
      out << "  table";
      for (double p : rows) out << ' ' << format_probability(p);
      out << ";\n";
    } else {
      std::vector<int> digit(parents.size(), 0);
      for (std::size_t r = 0; r < rows.size(); r += card) {
        out << "  (";
        for (std::size_t k = 0; k < parents.size(); ++k) {
          out << (k ? ", " : "") << net.variable(parents[k]).states[static_cast<std::size_t>(digit[k])];
        }
        out << ")";
        for (std::size_t s = 0; s < card; ++s) out << ' ' << format_probability(rows[r + s]);
        out << ";\n";
        for (std::size_t k = parents.size(); k-- > 0;) {
          if (++digit[k] < net.variable(parents[k]).cardinality()) break;
          digit[k] = 0;
        }
      }
    }
    out << "}\n";
  }
  return out.str();
}

}  // namespace pgm
