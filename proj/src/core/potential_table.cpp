#include "pgm/core/potential_table.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>

#include "pgm/core/error.hpp"

namespace pgm {

namespace {

std::atomic<std::size_t> g_table_size_limit{std::size_t{1} << 26};

// Tables smaller than this never fan out to the executor.
constexpr std::size_t kParallelMinEntries = std::size_t{1} << 15;

// Calls fn(pointer, length) for the contiguous pieces of fiber entries
// [e_begin, e_end) of output cell y, in ascending super-index order.
template <class Values, class Fn>
void for_fiber(Values* values, const ProjectionPlan& plan, std::size_t y, std::size_t e_begin,
               std::size_t e_end, Fn&& fn) {
  const std::size_t run = plan.run();
  std::size_t o = e_begin / run;
  std::size_t r = e_begin % run;
  std::size_t remaining = e_end - e_begin;
  Values* base = values + plan.base(y);
  while (remaining > 0) {
    const std::size_t len = std::min(run - r, remaining);
    fn(base + plan.outer(o) + r, len);
    remaining -= len;
    ++o;
    r = 0;
  }
}

double fiber_chunk_sum(const double* values, const ProjectionPlan& plan, std::size_t y,
                       std::size_t chunk) {
  const std::size_t e_begin = chunk * kReductionChunk;
  const std::size_t e_end = std::min(plan.fiber_size(), e_begin + kReductionChunk);
  double s = 0.0;
  for_fiber(values, plan, y, e_begin, e_end, [&](const double* p, std::size_t len) {
    for (std::size_t k = 0; k < len; ++k) s += p[k];
  });
  return s;
}

double fiber_sum(const double* values, const ProjectionPlan& plan, std::size_t y) {
  const std::size_t chunks = block_count(plan.fiber_size(), kReductionChunk);
  double total = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) total += fiber_chunk_sum(values, plan, y, c);
  return total;
}

bool use_parallel(const Executor& exec, std::size_t entries) {
  return exec.workers() > 1 && entries >= kParallelMinEntries && !Executor::in_parallel_region();
}

// Applies fn(pointer, length, y) to every fiber piece, splitting the work
// across the executor. Each element is touched exactly once, so any split
// yields identical results.
template <class Values, class Fn>
void for_each_fiber_piece(Values* values, const ProjectionPlan& plan, const Executor& exec,
                          Fn&& fn) {
  const std::size_t m = plan.sub_size();
  const std::size_t e = plan.fiber_size();
  if (!use_parallel(exec, plan.super_size())) {
    for (std::size_t y = 0; y < m; ++y) {
      for_fiber(values, plan, y, 0, e, [&](Values* p, std::size_t len) { fn(p, len, y); });
    }
    return;
  }
  const std::size_t target_tasks = exec.workers() * 4;
  if (m >= target_tasks) {
    const std::size_t per_task = (m + target_tasks - 1) / target_tasks;
    exec.parallel_for(block_count(m, per_task), [&](std::size_t task) {
      const auto range = block_range(m, per_task, task);
      for (std::size_t y = range.begin; y < range.end; ++y) {
        for_fiber(values, plan, y, 0, e, [&](Values* p, std::size_t len) { fn(p, len, y); });
      }
    });
    return;
  }
  const std::size_t chunks = block_count(e, kReductionChunk);
  exec.parallel_for(m * chunks, [&](std::size_t task) {
    const std::size_t y = task / chunks;
    const auto range = block_range(e, kReductionChunk, task % chunks);
    for_fiber(values, plan, y, range.begin, range.end,
              [&](Values* p, std::size_t len) { fn(p, len, y); });
  });
}

}  // namespace

class TableKernels {
 public:
  static std::vector<double>& values(PotentialTable& t) { return t.values_; }
  static PotentialTable make_unchecked(std::vector<VarId> scope, std::vector<int> cards,
                                       std::vector<double> values) {
    PotentialTable t;
    t.strides_ = row_major_strides(cards);
    t.scope_ = std::move(scope);
    t.cards_ = std::move(cards);
    t.values_ = std::move(values);
    return t;
  }
};

std::vector<std::size_t> row_major_strides(const std::vector<int>& cards) {
  std::vector<std::size_t> strides(cards.size(), 1);
  for (std::size_t k = cards.size(); k-- > 1;) {
    strides[k - 1] = strides[k] * static_cast<std::size_t>(cards[k]);
  }
  return strides;
}

std::vector<std::size_t> strided_offsets(std::span<const int> cards, std::span<const std::size_t> strides) {
  std::size_t count = 1;
  for (int c : cards) count *= static_cast<std::size_t>(c);
  std::vector<std::size_t> out;
  out.reserve(count);
  std::vector<int> digit(cards.size(), 0);
  std::size_t offset = 0;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(offset);
    for (std::size_t k = cards.size(); k-- > 0;) {
      if (++digit[k] < cards[k]) {
        offset += strides[k];
        break;
      }
      offset -= strides[k] * static_cast<std::size_t>(cards[k] - 1);
      digit[k] = 0;
    }
  }
  return out;
}

std::size_t table_size_limit() noexcept { return g_table_size_limit.load(); }

void set_table_size_limit(std::size_t entries) noexcept { g_table_size_limit.store(entries); }

std::size_t checked_table_size(std::span<const int> cards) {
  const std::size_t limit = table_size_limit();
  std::size_t size = 1;
  for (int c : cards) {
    if (c < 1) throw Error(ErrorCode::kInvalidArgument, "cardinality must be positive");
    const auto uc = static_cast<std::size_t>(c);
    if (size > limit / uc) {
      throw Error(ErrorCode::kTableTooLarge,
                  "table too large: exceeds limit of " + std::to_string(limit) + " entries");
    }
    size *= uc;
  }
  return size;
}

PotentialTable::PotentialTable() : values_{1.0} {}

PotentialTable::PotentialTable(std::vector<VarId> scope, std::vector<int> cards,
                               std::vector<double> values)
    : scope_(std::move(scope)), cards_(std::move(cards)), values_(std::move(values)) {
  if (scope_.size() != cards_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "scope and cardinality lengths differ");
  }
  for (std::size_t k = 1; k < scope_.size(); ++k) {
    if (scope_[k - 1] >= scope_[k]) {
      throw Error(ErrorCode::kInvalidArgument, "table scope must be strictly ascending");
    }
  }
  const std::size_t size = checked_table_size(cards_);
  if (values_.size() != size) {
    throw Error(ErrorCode::kInvalidArgument,
                "table holds " + std::to_string(values_.size()) + " values, expected " +
                    std::to_string(size));
  }
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, "table values must be finite and nonnegative");
    }
  }
  strides_ = row_major_strides(cards_);
}

PotentialTable PotentialTable::filled(std::vector<VarId> scope, std::vector<int> cards, double value) {
  const std::size_t size = checked_table_size(cards);
  return PotentialTable(std::move(scope), std::move(cards), std::vector<double>(size, value));
}

PotentialTable PotentialTable::scalar(double value) { return PotentialTable({}, {}, {value}); }

int PotentialTable::position(VarId var) const noexcept {
  const auto it = std::lower_bound(scope_.begin(), scope_.end(), var);
  if (it == scope_.end() || *it != var) return -1;
  return static_cast<int>(it - scope_.begin());
}

int PotentialTable::cardinality(VarId var) const {
  const int pos = position(var);
  if (pos < 0) {
    throw Error(ErrorCode::kScopeViolation, "scope violation: variable " + std::to_string(var));
  }
  return cards_[static_cast<std::size_t>(pos)];
}

double PotentialTable::at(std::span<const int> assignment) const {
  if (assignment.size() != scope_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "assignment length does not match scope");
  }
  std::size_t idx = 0;
  for (std::size_t k = 0; k < assignment.size(); ++k) {
    if (assignment[k] < 0 || assignment[k] >= cards_[k]) {
      throw Error(ErrorCode::kInvalidArgument, "assignment out of range");
    }
    idx += static_cast<std::size_t>(assignment[k]) * strides_[k];
  }
  return values_[idx];
}

double PotentialTable::sum() const noexcept {
  const std::size_t chunks = block_count(values_.size(), kReductionChunk);
  double total = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    const auto range = block_range(values_.size(), kReductionChunk, c);
    double s = 0.0;
    for (std::size_t i = range.begin; i < range.end; ++i) s += values_[i];
    total += s;
  }
  return total;
}

ProjectionPlan::ProjectionPlan(const std::vector<VarId>& super_scope,
                               const std::vector<int>& super_cards,
                               const std::vector<VarId>& sub_scope)
    : sub_scope_(sub_scope) {
  const std::size_t dims = super_scope.size();
  const auto strides = row_major_strides(super_cards);
  super_size_ = 1;
  for (int c : super_cards) super_size_ *= static_cast<std::size_t>(c);

  std::vector<bool> kept(dims, false);
  std::vector<int> kept_cards;
  std::vector<std::size_t> kept_strides;
  std::size_t pos = 0;
  for (std::size_t k = 0; k < sub_scope.size(); ++k) {
    if (k > 0 && sub_scope[k - 1] >= sub_scope[k]) {
      throw Error(ErrorCode::kInvalidArgument, "sub-scope must be strictly ascending");
    }
    while (pos < dims && super_scope[pos] < sub_scope[k]) ++pos;
    if (pos == dims || super_scope[pos] != sub_scope[k]) {
      throw Error(ErrorCode::kScopeViolation,
                  "scope violation: variable " + std::to_string(sub_scope[k]) + " not in scope");
    }
    kept[pos] = true;
    kept_cards.push_back(super_cards[pos]);
    kept_strides.push_back(strides[pos]);
  }
  sub_cards_ = kept_cards;

  // Trailing eliminated dimensions form one contiguous run.
  std::size_t tail = dims;
  while (tail > 0 && !kept[tail - 1]) --tail;
  run_ = 1;
  for (std::size_t d = tail; d < dims; ++d) run_ *= static_cast<std::size_t>(super_cards[d]);

  std::vector<int> outer_cards;
  std::vector<std::size_t> outer_strides;
  for (std::size_t d = 0; d < tail; ++d) {
    if (!kept[d]) {
      outer_cards.push_back(super_cards[d]);
      outer_strides.push_back(strides[d]);
    }
  }
  base_ = strided_offsets(kept_cards, kept_strides);
  outer_ = strided_offsets(outer_cards, outer_strides);
}

void merge_scopes(const std::vector<VarId>& a_scope, const std::vector<int>& a_cards,
                  const std::vector<VarId>& b_scope, const std::vector<int>& b_cards,
                  std::vector<VarId>& out_scope, std::vector<int>& out_cards) {
  out_scope.clear();
  out_cards.clear();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a_scope.size() || j < b_scope.size()) {
    if (j == b_scope.size() || (i < a_scope.size() && a_scope[i] < b_scope[j])) {
      out_scope.push_back(a_scope[i]);
      out_cards.push_back(a_cards[i]);
      ++i;
    } else if (i == a_scope.size() || b_scope[j] < a_scope[i]) {
      out_scope.push_back(b_scope[j]);
      out_cards.push_back(b_cards[j]);
      ++j;
    } else {
      if (a_cards[i] != b_cards[j]) {
        throw Error(ErrorCode::kInvalidArgument,
                    "cardinality mismatch for variable " + std::to_string(a_scope[i]));
      }
      out_scope.push_back(a_scope[i]);
      out_cards.push_back(a_cards[i]);
      ++i;
      ++j;
    }
  }
}

PotentialTable marginalize_with(const PotentialTable& t, const ProjectionPlan& plan,
                                const Executor& exec) {
  const std::size_t m = plan.sub_size();
  const std::size_t e = plan.fiber_size();
  const double* values = t.values().data();
  std::vector<double> out(m, 0.0);

  if (!use_parallel(exec, plan.super_size())) {
    for (std::size_t y = 0; y < m; ++y) out[y] = fiber_sum(values, plan, y);
  } else if (m >= exec.workers() * 4) {
    const std::size_t per_task = (m + exec.workers() * 4 - 1) / (exec.workers() * 4);
    exec.parallel_for(block_count(m, per_task), [&](std::size_t task) {
      const auto range = block_range(m, per_task, task);
      for (std::size_t y = range.begin; y < range.end; ++y) out[y] = fiber_sum(values, plan, y);
    });
  } else {
    const std::size_t chunks = block_count(e, kReductionChunk);
    std::vector<double> partial(m * chunks, 0.0);
    exec.parallel_for(m * chunks, [&](std::size_t task) {
      partial[task] = fiber_chunk_sum(values, plan, task / chunks, task % chunks);
    });
    for (std::size_t y = 0; y < m; ++y) {
      double total = 0.0;
      for (std::size_t c = 0; c < chunks; ++c) total += partial[y * chunks + c];
      out[y] = total;
    }
  }
  return TableKernels::make_unchecked(plan.sub_scope(), plan.sub_cards(), std::move(out));
}

void multiply_in_place(PotentialTable& t, const PotentialTable& sub, const ProjectionPlan& plan,
                       const Executor& exec) {
  double* values = TableKernels::values(t).data();
  const double* factors = sub.values().data();
  for_each_fiber_piece(values, plan, exec, [&](double* p, std::size_t len, std::size_t y) {
    const double f = factors[y];
    for (std::size_t k = 0; k < len; ++k) p[k] *= f;
  });
}

PotentialTable broadcast_with(const PotentialTable& sub, const ProjectionPlan& plan,
                              std::vector<VarId> super_scope, std::vector<int> super_cards,
                              const Executor& exec) {
  std::vector<double> out(plan.super_size(), 0.0);
  const double* src = sub.values().data();
  for_each_fiber_piece(out.data(), plan, exec, [&](double* p, std::size_t len, std::size_t y) {
    std::fill(p, p + len, src[y]);
  });
  return TableKernels::make_unchecked(std::move(super_scope), std::move(super_cards), std::move(out));
}

void restrict_in_place(PotentialTable& t, const ProjectionPlan& plan, std::size_t keep_index) {
  double* values = TableKernels::values(t).data();
  for (std::size_t y = 0; y < plan.sub_size(); ++y) {
    if (y == keep_index) continue;
    for_fiber(values, plan, y, 0, plan.fiber_size(),
              [](double* p, std::size_t len) { std::fill(p, p + len, 0.0); });
  }
}

void scale_in_place(PotentialTable& t, double factor) {
  for (double& v : TableKernels::values(t)) v *= factor;
}

PotentialTable table_multiply(const PotentialTable& a, const PotentialTable& b, const Executor& exec) {
  std::vector<VarId> scope;
  std::vector<int> cards;
  merge_scopes(a.scope(), a.cards(), b.scope(), b.cards(), scope, cards);
  checked_table_size(cards);
  const ProjectionPlan plan_a(scope, cards, a.scope());
  const ProjectionPlan plan_b(scope, cards, b.scope());
  PotentialTable out = broadcast_with(a, plan_a, scope, cards, exec);
  multiply_in_place(out, b, plan_b, exec);
  return out;
}

PotentialTable table_marginalize(const PotentialTable& t, std::span<const VarId> keep,
                                 const Executor& exec) {
  std::vector<VarId> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (VarId v : sorted) {
    if (!t.contains(v)) {
      throw Error(ErrorCode::kScopeViolation,
                  "scope violation: variable " + std::to_string(v) + " not in table scope");
    }
  }
  const ProjectionPlan plan(t.scope(), t.cards(), sorted);
  return marginalize_with(t, plan, exec);
}

PotentialTable table_reduce(const PotentialTable& t, const Evidence& evidence) {
  std::vector<VarId> observed;
  std::vector<StateIndex> states;
  for (const auto& [var, state] : evidence) {
    if (t.contains(var)) {
      observed.push_back(var);
      states.push_back(state);
    }
  }
  if (observed.empty()) return t;
  const ProjectionPlan plan(t.scope(), t.cards(), observed);
  std::size_t keep = 0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    const int card = plan.sub_cards()[k];
    if (states[k] < 0 || states[k] >= card) {
      throw Error(ErrorCode::kInvalidArgument,
                  "evidence state out of range for variable " + std::to_string(observed[k]));
    }
    keep = keep * static_cast<std::size_t>(card) + static_cast<std::size_t>(states[k]);
  }
  PotentialTable out = t;
  restrict_in_place(out, plan, keep);
  return out;
}

PotentialTable table_divide(const PotentialTable& num, const PotentialTable& den, const Executor& exec) {
  const ProjectionPlan plan(num.scope(), num.cards(), den.scope());
  for (std::size_t k = 0; k < den.scope().size(); ++k) {
    if (plan.sub_cards()[k] != den.cards()[k]) {
      throw Error(ErrorCode::kInvalidArgument, "cardinality mismatch in division");
    }
  }
  PotentialTable out = num;
  double* values = TableKernels::values(out).data();
  const double* divisors = den.values().data();
  for_each_fiber_piece(values, plan, exec, [&](double* p, std::size_t len, std::size_t y) {
    const double d = divisors[y];
    if (d == 0.0) {
      for (std::size_t k = 0; k < len; ++k) {
        if (p[k] != 0.0) {
          throw Error(ErrorCode::kInconsistentCalibration,
                      "inconsistent calibration: positive value divided by zero");
        }
      }
      return;
    }
    for (std::size_t k = 0; k < len; ++k) p[k] /= d;
  });
  return out;
}

PotentialTable table_normalize(const PotentialTable& t) {
  const double s = t.sum();
  if (!(s > 0.0)) throw Error(ErrorCode::kZeroMass, "zero mass: table sums to zero");
  PotentialTable out = t;
  for (double& v : TableKernels::values(out)) v /= s;
  return out;
}

}  // namespace pgm
