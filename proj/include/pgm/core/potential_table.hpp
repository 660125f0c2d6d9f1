#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pgm/core/executor.hpp"
#include "pgm/core/types.hpp"

namespace pgm {

/// Upper bound on the number of entries a table may hold (default 2^26).
std::size_t table_size_limit() noexcept;
void set_table_size_limit(std::size_t entries) noexcept;

/// Product of cardinalities; throws kTableTooLarge past the configured cap.
std::size_t checked_table_size(std::span<const int> cards);

/// Row-major strides for the given cardinalities.
std::vector<std::size_t> row_major_strides(const std::vector<int>& cards);

/// Enumerates assignments of the given dimensions row-major (last fastest)
/// and returns sum(digit_k * strides_k) for each. With strides taken from
/// another table this maps a reordered enumeration onto that table's layout.
std::vector<std::size_t> strided_offsets(std::span<const int> cards, std::span<const std::size_t> strides);

/// Dense nonnegative table over an ascending-id scope, stored row-major
/// (last scope variable fastest).
class PotentialTable {
 public:
  /// Scalar table holding 1.
  PotentialTable();
  PotentialTable(std::vector<VarId> scope, std::vector<int> cards, std::vector<double> values);

  static PotentialTable filled(std::vector<VarId> scope, std::vector<int> cards, double value);
  static PotentialTable scalar(double value);

  const std::vector<VarId>& scope() const noexcept { return scope_; }
  const std::vector<int>& cards() const noexcept { return cards_; }
  const std::vector<std::size_t>& strides() const noexcept { return strides_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty_scope() const noexcept { return scope_.empty(); }

  /// Position of var in the scope, or -1.
  int position(VarId var) const noexcept;
  bool contains(VarId var) const noexcept { return position(var) >= 0; }
  int cardinality(VarId var) const;

  /// Value at an assignment aligned with scope().
  double at(std::span<const int> assignment) const;
  double sum() const noexcept;

  friend bool operator==(const PotentialTable&, const PotentialTable&) = default;

 private:
  friend class TableKernels;

  std::vector<VarId> scope_;
  std::vector<int> cards_;
  std::vector<std::size_t> strides_;
  std::vector<double> values_;
};

/// Precomputed index map from a table over `super` to one of its sub-scopes.
///
/// Every flat index of the super table decomposes uniquely as
/// base[y] + outer[o] + r, with y the flat index of the projected sub-table
/// assignment, o enumerating the eliminated variables' leading dimensions and
/// r a contiguous run over the trailing eliminated dimensions. For fixed y the
/// enumeration (o, r) visits super indices in ascending order. Marginalizing,
/// broadcasting and in-place products all reuse the same map, so no kernel
/// ever decodes a flat index into an assignment.
class ProjectionPlan {
 public:
  ProjectionPlan() = default;
  ProjectionPlan(const std::vector<VarId>& super_scope, const std::vector<int>& super_cards,
                 const std::vector<VarId>& sub_scope);

  const std::vector<VarId>& sub_scope() const noexcept { return sub_scope_; }
  const std::vector<int>& sub_cards() const noexcept { return sub_cards_; }
  std::size_t super_size() const noexcept { return super_size_; }
  std::size_t sub_size() const noexcept { return base_.size(); }
  /// Number of super entries mapped onto each sub entry.
  std::size_t fiber_size() const noexcept { return outer_.size() * run_; }

  std::size_t base(std::size_t y) const noexcept { return base_[y]; }
  std::size_t outer(std::size_t o) const noexcept { return outer_[o]; }
  std::size_t outer_count() const noexcept { return outer_.size(); }
  std::size_t run() const noexcept { return run_; }

 private:
  std::vector<VarId> sub_scope_;
  std::vector<int> sub_cards_;
  std::size_t super_size_ = 1;
  std::vector<std::size_t> base_;
  std::vector<std::size_t> outer_;
  std::size_t run_ = 1;
};

/// Summation chunk: each output cell sums its fiber in chunks of this many
/// entries, folding chunk partials in order. The grouping is part of the
/// result definition, so serial and parallel runs agree bit for bit.
inline constexpr std::size_t kReductionChunk = std::size_t{1} << 15;

PotentialTable table_multiply(const PotentialTable& a, const PotentialTable& b,
                              const Executor& exec = serial_executor());
PotentialTable table_marginalize(const PotentialTable& t, std::span<const VarId> keep,
                                 const Executor& exec = serial_executor());
PotentialTable table_reduce(const PotentialTable& t, const Evidence& evidence);
PotentialTable table_divide(const PotentialTable& num, const PotentialTable& den,
                            const Executor& exec = serial_executor());
PotentialTable table_normalize(const PotentialTable& t);

/// Plan-driven kernels used by the message-passing engines.
PotentialTable marginalize_with(const PotentialTable& t, const ProjectionPlan& plan,
                                const Executor& exec = serial_executor());
void multiply_in_place(PotentialTable& t, const PotentialTable& sub, const ProjectionPlan& plan,
                       const Executor& exec = serial_executor());
PotentialTable broadcast_with(const PotentialTable& sub, const ProjectionPlan& plan,
                              std::vector<VarId> super_scope, std::vector<int> super_cards,
                              const Executor& exec = serial_executor());
/// Zeroes every entry whose projection onto the plan's sub-scope differs from keep_index.
void restrict_in_place(PotentialTable& t, const ProjectionPlan& plan, std::size_t keep_index);
void scale_in_place(PotentialTable& t, double factor);

/// Union of two ascending scopes with aligned cardinalities.
void merge_scopes(const std::vector<VarId>& a_scope, const std::vector<int>& a_cards,
                  const std::vector<VarId>& b_scope, const std::vector<int>& b_cards,
                  std::vector<VarId>& out_scope, std::vector<int>& out_cards);

}  // namespace pgm
