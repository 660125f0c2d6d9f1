#include "oracle.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace pgm::testing {

double joint_probability(const Network& net, const std::vector<int>& x) {
  double p = 1.0;
  for (std::size_t v = 0; v < net.size(); ++v) {
    const PotentialTable& t = net.cpt(static_cast<VarId>(v));
    std::size_t idx = 0;
    for (std::size_t k = 0; k < t.scope().size(); ++k) {
      idx = idx * static_cast<std::size_t>(t.cards()[k]) + static_cast<std::size_t>(x[static_cast<std::size_t>(t.scope()[k])]);
    }
    p *= t.values()[idx];
  }
  return p;
}

std::vector<std::vector<double>> enumerate_posteriors(const Network& net, const Evidence& evidence,
                                                      double* evidence_probability) {
  const std::size_t n = net.size();
  std::vector<std::vector<double>> out(n);
  for (std::size_t v = 0; v < n; ++v) out[v].assign(static_cast<std::size_t>(net.variables()[v].cardinality()), 0.0);
  std::size_t assignments = 1;
  for (const auto& v : net.variables()) assignments *= static_cast<std::size_t>(v.cardinality());
  std::vector<int> x(n, 0);
  double total = 0.0;
  for (std::size_t a = 0; a < assignments; ++a) {
    std::size_t rest = a;
    for (std::size_t k = n; k-- > 0;) {
      const auto card = static_cast<std::size_t>(net.variables()[k].cardinality());
      x[k] = static_cast<int>(rest % card);
      rest /= card;
    }
    bool consistent = true;
    for (const auto& [v, s] : evidence) consistent = consistent && x[static_cast<std::size_t>(v)] == s;
    if (!consistent) continue;
    const double p = joint_probability(net, x);
    total += p;
    for (std::size_t v = 0; v < n; ++v) out[v][static_cast<std::size_t>(x[v])] += p;
  }
  if (evidence_probability) *evidence_probability = total;
  if (!(total > 0.0)) throw std::runtime_error("oracle: evidence has zero probability");
  for (auto& row : out) {
    for (double& p : row) p /= total;
  }
  return out;
}

std::vector<double> empirical_joint(const Dataset& data, const std::vector<VarId>& vars) {
  std::size_t size = 1;
  for (VarId v : vars) size *= static_cast<std::size_t>(data.variables[static_cast<std::size_t>(v)].cardinality());
  std::vector<double> out(size, 0.0);
  for (std::size_t r = 0; r < data.n_rows; ++r) {
    std::size_t idx = 0;
    for (VarId v : vars) {
      idx = idx * static_cast<std::size_t>(data.variables[static_cast<std::size_t>(v)].cardinality()) +
            static_cast<std::size_t>(data.columns[static_cast<std::size_t>(v)][r]);
    }
    out[idx] += 1.0;
  }
  for (double& p : out) p /= static_cast<double>(data.n_rows);
  return out;
}

OracleG2 oracle_g2(const Dataset& data, VarId x, VarId y, const std::vector<VarId>& z) {
  std::map<std::vector<int>, std::map<std::pair<int, int>, double>> strata;
  for (std::size_t r = 0; r < data.n_rows; ++r) {
    std::vector<int> key;
    for (VarId v : z) key.push_back(data.columns[static_cast<std::size_t>(v)][r]);
    strata[key][{data.columns[static_cast<std::size_t>(x)][r], data.columns[static_cast<std::size_t>(y)][r]}] += 1.0;
  }
  double g2 = 0.0;
  int dof = 0;
  for (const auto& [key, cells] : strata) {
    std::map<int, double> rows, cols;
    double n = 0.0;
    for (const auto& [xy, c] : cells) {
      rows[xy.first] += c;
      cols[xy.second] += c;
      n += c;
    }
    dof += (static_cast<int>(rows.size()) - 1) * (static_cast<int>(cols.size()) - 1);
    for (const auto& [xy, c] : cells) g2 += 2.0 * c * std::log(c * n / (rows[xy.first] * cols[xy.second]));
  }
  if (g2 < 0.0) g2 = 0.0;
  if (g2 > 0.0 && dof < 1) dof = 1;
  return {g2, dof};
}

double closed_form_chi2_tail(double x, int dof) {
  switch (dof) {
    case 1: return std::erfc(std::sqrt(x / 2.0));
    case 2: return std::exp(-x / 2.0);
    case 4: return std::exp(-x / 2.0) * (1.0 + x / 2.0);
    default: throw std::invalid_argument("no closed form for this dof");
  }
}

double mean_hellinger_unobserved(const MarginalSet& est, const std::vector<std::vector<double>>& exact,
                                 const Evidence& evidence) {
  double total = 0.0;
  int count = 0;
  for (std::size_t v = 0; v < exact.size(); ++v) {
    if (evidence.contains(static_cast<VarId>(v))) continue;
    const auto& p = est.at(static_cast<VarId>(v)).values();
    double s = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double d = std::sqrt(p[k]) - std::sqrt(exact[v][k]);
      s += d * d;
    }
    total += std::sqrt(0.5 * s);
    ++count;
  }
  return count ? total / count : 0.0;
}

}  // namespace pgm::testing
