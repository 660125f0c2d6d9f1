#include "pgm/learn/ci_test.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "pgm/core/error.hpp"
#include "pgm/core/potential_table.hpp"

namespace pgm {

namespace {

int card_of(const Dataset& data, VarId v) {
  if (v < 0 || static_cast<std::size_t>(v) >= data.variables.size()) {
    throw Error(ErrorCode::kInvalidArgument, "variable id " + std::to_string(v) + " is not in the dataset");
  }
  return data.variables[static_cast<std::size_t>(v)].cardinality();
}

void check_arguments(const Dataset& data, VarId x, VarId y, std::span<const VarId> z) {
  card_of(data, x);
  card_of(data, y);
  if (x == y) throw Error(ErrorCode::kInvalidArgument, "ci_test needs two distinct variables");
  for (VarId v : z) {
    card_of(data, v);
    if (v == x || v == y) {
      throw Error(ErrorCode::kInvalidArgument, "conditioning set contains a tested variable");
    }
  }
}

}  // namespace

double chi_square_upper_tail(double statistic, int dof) {
  if (dof <= 0 || statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

Contingency count_contingency(const Dataset& data, VarId x, VarId y, std::span<const VarId> z) {
  check_arguments(data, x, y, z);
  Contingency t;
  t.nx = card_of(data, x);
  t.ny = card_of(data, y);
  std::vector<int> zcards;
  for (VarId v : z) zcards.push_back(card_of(data, v));
  t.nz = checked_table_size(zcards);
  const std::size_t cell = static_cast<std::size_t>(t.nx) * static_cast<std::size_t>(t.ny);
  t.counts.assign(t.nz * cell, 0.0);

  // Flat index accumulated column by column keeps each pass on one column.
  std::vector<std::size_t> idx(data.n_rows, 0);
  for (std::size_t k = 0; k < z.size(); ++k) {
    const auto& col = data.columns[static_cast<std::size_t>(z[k])];
    const auto card = static_cast<std::size_t>(zcards[k]);
    for (std::size_t r = 0; r < data.n_rows; ++r) idx[r] = idx[r] * card + static_cast<std::size_t>(col[r]);
  }
  const auto& cx = data.columns[static_cast<std::size_t>(x)];
  const auto& cy = data.columns[static_cast<std::size_t>(y)];
  for (std::size_t r = 0; r < data.n_rows; ++r) {
    t.counts[idx[r] * cell + static_cast<std::size_t>(cx[r]) * static_cast<std::size_t>(t.ny) +
             static_cast<std::size_t>(cy[r])] += 1.0;
  }
  return t;
}

CiResult g_squared_test(const Contingency& table, double alpha) {
  const auto nx = static_cast<std::size_t>(table.nx);
  const auto ny = static_cast<std::size_t>(table.ny);
  std::vector<double> rows(nx);
  std::vector<double> cols(ny);
  double g2 = 0.0;
  long long dof = 0;
  for (std::size_t s = 0; s < table.nz; ++s) {
    const double* o = table.counts.data() + s * nx * ny;
    std::fill(rows.begin(), rows.end(), 0.0);
    std::fill(cols.begin(), cols.end(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
      for (std::size_t j = 0; j < ny; ++j) {
        rows[i] += o[i * ny + j];
        cols[j] += o[i * ny + j];
      }
      total += rows[i];
    }
    if (total == 0.0) continue;
    const auto nonzero = [](const std::vector<double>& m) {
      return static_cast<long long>(std::count_if(m.begin(), m.end(), [](double c) { return c > 0.0; }));
    };
    dof += (nonzero(rows) - 1) * (nonzero(cols) - 1);
    for (std::size_t i = 0; i < nx; ++i) {
      for (std::size_t j = 0; j < ny; ++j) {
        const double obs = o[i * ny + j];
        if (obs > 0.0) g2 += obs * std::log(obs * total / (rows[i] * cols[j]));
      }
    }
  }
  CiResult r;
  r.statistic = std::max(0.0, 2.0 * g2);
  if (r.statistic > 0.0) dof = std::max<long long>(dof, 1);
  r.dof = static_cast<int>(dof);
  r.p_value = chi_square_upper_tail(r.statistic, r.dof);
  r.independent = r.p_value > alpha;
  return r;
}

std::size_t nominal_dof(const Dataset& data, VarId x, VarId y, std::span<const VarId> z) {
  std::size_t dof = static_cast<std::size_t>(card_of(data, x) - 1) * static_cast<std::size_t>(card_of(data, y) - 1);
  for (VarId v : z) dof *= static_cast<std::size_t>(card_of(data, v));
  return dof;
}

bool small_sample_skip(const Dataset& data, VarId x, VarId y, std::span<const VarId> z) {
  if (z.empty()) return false;
  return static_cast<double>(nominal_dof(data, x, y, z)) > static_cast<double>(data.n_rows) / 10.0;
}

CiResult ci_test(const Dataset& data, VarId x, VarId y, std::span<const VarId> z, double alpha) {
  check_arguments(data, x, y, z);
  if (small_sample_skip(data, x, y, z)) {
    CiResult r;
    r.skipped = true;
    return r;
  }
  return g_squared_test(count_contingency(data, x, y, z), alpha);
}

EdgeCounts::EdgeCounts(const Dataset& data, VarId x, VarId y, std::vector<VarId> candidates)
    : data_(&data), x_(x), y_(y) {
  scope_.push_back(x);
  scope_.push_back(y);
  for (VarId v : candidates) {
    if (v != x && v != y && std::find(scope_.begin(), scope_.end(), v) == scope_.end()) scope_.push_back(v);
  }
  double cells = 1.0;
  for (VarId v : scope_) {
    cards_.push_back(card_of(data, v));
    cells *= cards_.back();
  }
  if (cells > static_cast<double>(kJointCountLimit)) return;

  const auto strides = row_major_strides(cards_);
  joint_.assign(static_cast<std::size_t>(cells), 0.0);
  std::vector<std::size_t> idx(data.n_rows, 0);
  for (std::size_t k = 0; k < scope_.size(); ++k) {
    const auto& col = data.columns[static_cast<std::size_t>(scope_[k])];
    for (std::size_t r = 0; r < data.n_rows; ++r) idx[r] += static_cast<std::size_t>(col[r]) * strides[k];
  }
  for (std::size_t r = 0; r < data.n_rows; ++r) joint_[idx[r]] += 1.0;
  joint_ready_ = true;
}

Contingency EdgeCounts::contingency(std::span<const VarId> z) const {
  if (!joint_ready_) return count_contingency(*data_, x_, y_, z);
  check_arguments(*data_, x_, y_, z);

  const auto strides = row_major_strides(cards_);
  // Kept dimensions in output order [z..., x, y]; everything else is summed.
  std::vector<int> kept_cards;
  std::vector<std::size_t> kept_strides;
  std::vector<bool> is_kept(scope_.size(), false);
  const auto take = [&](VarId v) {
    const auto pos = static_cast<std::size_t>(std::find(scope_.begin(), scope_.end(), v) - scope_.begin());
    if (pos == scope_.size()) {
      throw Error(ErrorCode::kScopeViolation, "conditioning variable outside the cached edge scope");
    }
    kept_cards.push_back(cards_[pos]);
    kept_strides.push_back(strides[pos]);
    is_kept[pos] = true;
  };
  for (VarId v : z) take(v);
  take(x_);
  take(y_);
  std::vector<int> summed_cards;
  std::vector<std::size_t> summed_strides;
  for (std::size_t k = 0; k < scope_.size(); ++k) {
    if (!is_kept[k]) {
      summed_cards.push_back(cards_[k]);
      summed_strides.push_back(strides[k]);
    }
  }
  const auto kept = strided_offsets(kept_cards, kept_strides);
  const auto summed = strided_offsets(summed_cards, summed_strides);

  Contingency t;
  t.nx = cards_[0];
  t.ny = cards_[1];
  t.nz = kept.size() / (static_cast<std::size_t>(t.nx) * static_cast<std::size_t>(t.ny));
  t.counts.resize(kept.size());
  for (std::size_t c = 0; c < kept.size(); ++c) {
    double s = 0.0;
    for (std::size_t off : summed) s += joint_[kept[c] + off];
    t.counts[c] = s;
  }
  return t;
}

}  // namespace pgm
