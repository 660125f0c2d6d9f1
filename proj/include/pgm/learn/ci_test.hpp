#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pgm/io/dataset.hpp"

namespace pgm {

struct CiResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  bool independent = true;
  /// Set when the small-sample guard skipped the test.
  bool skipped = false;
};

/// Observed counts laid out [z][x][y]; z enumerates the conditioning set
/// row-major in the order it was given.
struct Contingency {
  int nx = 0;
  int ny = 0;
  std::size_t nz = 1;
  std::vector<double> counts;
};

/// Upper tail of the chi-square distribution.
double chi_square_upper_tail(double statistic, int dof);

Contingency count_contingency(const Dataset& data, VarId x, VarId y, std::span<const VarId> z);

/// Likelihood-ratio (G^2) test on a contingency table.
///
/// Degrees of freedom are summed per stratum as (r-1)(c-1) over the nonzero
/// row and column margins, then floored at 1 whenever the statistic is
/// positive.
CiResult g_squared_test(const Contingency& table, double alpha);

/// Tests x ⊥ y | z with G^2. Conditional tests whose nominal degrees of
/// freedom exceed n_rows / 10 are skipped and reported independent (p = 1).
CiResult ci_test(const Dataset& data, VarId x, VarId y, std::span<const VarId> z, double alpha);

/// Nominal (|X|-1)(|Y|-1) prod |Z_k| degrees of freedom.
std::size_t nominal_dof(const Dataset& data, VarId x, VarId y, std::span<const VarId> z);
bool small_sample_skip(const Dataset& data, VarId x, VarId y, std::span<const VarId> z);

/// Counts shared by every test on one edge: a single pass over the columns of
/// {x, y} ∪ candidates when the joint table fits in kJointCountLimit cells;
/// contingency tables for each conditioning subset are then marginals of it.
/// Larger unions fall back to direct counting. Counts are exact integers, so
/// both routes give identical tables.
class EdgeCounts {
 public:
  static constexpr std::size_t kJointCountLimit = std::size_t{1} << 20;

  EdgeCounts(const Dataset& data, VarId x, VarId y, std::vector<VarId> candidates);

  Contingency contingency(std::span<const VarId> z) const;
  bool uses_joint_table() const noexcept { return joint_ready_; }

 private:
  const Dataset* data_;
  VarId x_;
  VarId y_;
  std::vector<VarId> scope_;
  std::vector<int> cards_;
  std::vector<double> joint_;
  bool joint_ready_ = false;
};

}  // namespace pgm
