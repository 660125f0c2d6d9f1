#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "networks.hpp"
#include "oracle.hpp"
#include "pgm/core/error.hpp"
#include "pgm/sim/generate.hpp"
#include "pgm/sim/metrics.hpp"

namespace pgm {
namespace {

PotentialTable dist(std::vector<double> p) {
  const int card = static_cast<int>(p.size());
  return PotentialTable({0}, {card}, std::move(p));
}

TEST(Generate, RootFrequencyMatchesCpt) {
  const Dataset d = generate_dataset(testing::ab_network(), 1000000, 0, Executor(4));
  EXPECT_NEAR(testing::empirical_joint(d, {0})[1], 0.3, 0.002);
}

TEST(Generate, DeterministicCptsGiveIdenticalRows) {
  std::vector<DiscreteVariable> vars{{0, "A", {"f", "t"}}, {1, "B", {"f", "t"}}, {2, "C", {"x", "y", "z"}}};
  const Network net = Network::from_rows("det", vars, {{}, {0}, {0, 1}},
                                         {{0.0, 1.0}, {1.0, 0.0, 0.0, 1.0},
                                          {1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1}});
  const Dataset d = generate_dataset(net, 5000, 3);
  for (std::size_t r = 0; r < d.n_rows; ++r) {
    EXPECT_EQ(d.columns[0][r], 1);
    EXPECT_EQ(d.columns[1][r], 1);
    EXPECT_EQ(d.columns[2][r], 2);
  }
}

TEST(Generate, SameSeedSameDataAcrossWorkers) {
  const Network net = testing::benchmark8();
  const Dataset a = generate_dataset(net, 10000, 7);
  const Dataset b = generate_dataset(net, 10000, 7, Executor(8));
  EXPECT_EQ(a.columns, b.columns);
  EXPECT_NE(a.columns, generate_dataset(net, 10000, 8).columns);
}

TEST(Generate, PrefixDoesNotDependOnLength) {
  const Network net = testing::benchmark8();
  const Dataset a = generate_dataset(net, 3000, 2);
  const Dataset b = generate_dataset(net, 5000, 2);
  for (std::size_t c = 0; c < 8; ++c) {
    EXPECT_TRUE(std::equal(a.columns[c].begin(), a.columns[c].end(), b.columns[c].begin()));
  }
}

TEST(Generate, SmallJointsConvergeInTotalVariation) {
  const Network net = testing::benchmark8();
  // Exact joint over all eight binary variables; index bit 7 - v holds variable v.
  std::vector<double> full(256);
  for (int i = 0; i < 256; ++i) {
    std::vector<int> x(8);
    for (int v = 0; v < 8; ++v) x[v] = (i >> (7 - v)) & 1;
    full[i] = testing::joint_probability(net, x);
  }
  const std::vector<std::vector<VarId>> subsets{{0}, {2, 6}, {0, 1, 2}, {3, 5, 7}, {1, 4, 6}};
  const Executor exec(4);
  std::vector<double> tv_sum(subsets.size(), 0.0);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset d = generate_dataset(net, 1000000, seed, exec);
    for (std::size_t k = 0; k < subsets.size(); ++k) {
      const auto& vars = subsets[k];
      const auto emp = testing::empirical_joint(d, vars);
      std::vector<double> exact(emp.size(), 0.0);
      for (int i = 0; i < 256; ++i) {
        std::size_t idx = 0;
        for (VarId v : vars) idx = idx * 2 + static_cast<std::size_t>((i >> (7 - v)) & 1);
        exact[idx] += full[i];
      }
      double tv = 0.0;
      for (std::size_t j = 0; j < emp.size(); ++j) tv += std::abs(emp[j] - exact[j]);
      tv_sum[k] += 0.5 * tv;
    }
  }
  for (double s : tv_sum) EXPECT_LE(s / 5.0, 0.01);
}

PdagGraph graph(std::size_t n) { return PdagGraph(n); }

TEST(Shd, Examples) {
  PdagGraph g = graph(3);
  g.orient(0, 1);
  EXPECT_EQ(shd(g, g), 0);

  PdagGraph u = graph(3);
  u.add_undirected(0, 1);
  EXPECT_EQ(shd(g, u), 1);

  PdagGraph g1 = graph(3);
  g1.orient(0, 1);
  g1.add_undirected(0, 2);
  PdagGraph g2 = graph(3);
  g2.orient(1, 0);
  EXPECT_EQ(shd(g1, g2), 2);
  EXPECT_EQ(shd(g2, g1), 2);
}

TEST(Shd, SizeMismatchIsError) { EXPECT_THROW(shd(graph(2), graph(3)), Error); }

TEST(Shd, SymmetricOnRandomGraphs) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    PdagGraph a(6), b(6);
    for (PdagGraph* g : {&a, &b}) {
      for (VarId i = 0; i < 6; ++i) {
        for (VarId j = i + 1; j < 6; ++j) {
          switch (rng() % 4) {
            case 1: g->orient(i, j); break;
            case 2: g->orient(j, i); break;
            case 3: g->add_undirected(i, j); break;
            default: break;
          }
        }
      }
    }
    EXPECT_EQ(shd(a, b), shd(b, a));
    EXPECT_EQ(shd(a, a), 0);
  }
}

TEST(Hellinger, Examples) {
  EXPECT_EQ(hellinger(dist({0.3, 0.7}), dist({0.3, 0.7})), 0.0);
  EXPECT_NEAR(hellinger(dist({1, 0}), dist({0, 1})), 1.0, 1e-15);
  const double expected = std::sqrt(1.0 - (std::sqrt(0.45) + std::sqrt(0.05)));
  EXPECT_NEAR(hellinger(dist({0.5, 0.5}), dist({0.9, 0.1})), expected, 1e-15);
  EXPECT_NEAR(expected, 0.3250, 1e-4);
}

TEST(Hellinger, Errors) {
  EXPECT_THROW(hellinger(dist({0.5, 0.5}), PotentialTable({1}, {2}, {0.5, 0.5})), Error);
  EXPECT_THROW(hellinger(dist({0.5, 0.6}), dist({0.5, 0.5})), Error);
}

TEST(Hellinger, MetricProperties) {
  std::mt19937_64 rng(52);
  std::gamma_distribution<double> g(0.7);
  const auto draw = [&](int k) {
    std::vector<double> p(k);
    double s = 0;
    for (double& x : p) s += (x = g(rng));
    for (double& x : p) x /= s;
    return dist(p);
  };
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 2 + trial % 4;
    const auto p = draw(k), q = draw(k), r = draw(k);
    const double pq = hellinger(p, q);
    EXPECT_GE(pq, 0.0);
    EXPECT_LE(pq, 1.0);
    EXPECT_NEAR(pq, hellinger(q, p), 1e-15);
    EXPECT_LT(hellinger(p, p), 1e-12);
    EXPECT_LE(pq, hellinger(p, r) + hellinger(r, q) + 1e-12);
  }
}

TEST(MeanHellinger, Examples) {
  MarginalSet a{{0, dist({0.5, 0.5})}, {1, PotentialTable({1}, {2}, {0.2, 0.8})}};
  EXPECT_EQ(mean_hellinger(a, a), 0.0);
  MarginalSet b = a;
  b[0] = dist({0.9, 0.1});
  EXPECT_NEAR(mean_hellinger(a, b), std::sqrt(1.0 - (std::sqrt(0.45) + std::sqrt(0.05))) / 2, 1e-15);
  EXPECT_NEAR(mean_hellinger(a, b), 0.1625, 1e-4);
  const MarginalSet other{{5, PotentialTable({5}, {2}, {0.5, 0.5})}};
  EXPECT_THROW(mean_hellinger(a, other), Error);
}

}  // namespace
}  // namespace pgm
