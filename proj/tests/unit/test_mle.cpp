#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "networks.hpp"
#include "pgm/core/error.hpp"
#include "pgm/io/dataset.hpp"
#include "pgm/learn/mle.hpp"
#include "pgm/sim/generate.hpp"

namespace pgm {
namespace {

Dataset single_column(std::vector<StateIndex> col) {
  Dataset d;
  d.variables = {{0, "A", {"0", "1"}}};
  d.n_rows = col.size();
  d.columns = {std::move(col)};
  return d;
}

DagStructure single_node() { return {{{0, "A", {"0", "1"}}}, {{}}}; }

TEST(Mle, CountsWithoutSmoothing) {
  const Dataset d = single_column({0, 0, 0, 0, 0, 0, 0, 1, 1, 1});
  const Network net = fit_mle(single_node(), d, 0.0);
  EXPECT_NEAR(net.cpt_rows(0)[0], 0.7, 1e-15);
  EXPECT_NEAR(net.cpt_rows(0)[1], 0.3, 1e-15);
}

TEST(Mle, LaplaceSmoothing) {
  const Dataset d = single_column({0, 0, 0, 0, 0, 0, 0, 1, 1, 1});
  const Network net = fit_mle(single_node(), d, 1.0);
  EXPECT_NEAR(net.cpt_rows(0)[0], 8.0 / 12.0, 1e-15);
  EXPECT_NEAR(net.cpt_rows(0)[1], 4.0 / 12.0, 1e-15);
}

TEST(Mle, UnseenParentConfigurationIsUniform) {
  Dataset d;
  d.variables = {{0, "A", {"0", "1"}}, {1, "B", {"0", "1", "2"}}};
  d.columns = {{0, 0, 0}, {1, 2, 2}};
  d.n_rows = 3;
  const Network net = fit_mle({d.variables, {{}, {0}}}, d, 0.0);
  const auto rows = net.cpt_rows(1);
  EXPECT_NEAR(rows[1], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(rows[2], 2.0 / 3.0, 1e-15);
  for (int s = 3; s < 6; ++s) EXPECT_NEAR(rows[s], 1.0 / 3.0, 1e-15);
}

TEST(Mle, ColumnsMatchedByName) {
  const Network truth = testing::ab_network();
  Dataset d = generate_dataset(truth, 1000, 1);
  const Network direct = fit_mle(truth.structure(), d);
  std::swap(d.variables[0], d.variables[1]);
  std::swap(d.columns[0], d.columns[1]);
  d.variables[0].id = 0;
  d.variables[1].id = 1;
  const Network swapped = fit_mle(truth.structure(), d);
  EXPECT_TRUE(networks_equal(direct, swapped, 0.0));
}

TEST(Mle, VariableMismatchIsError) {
  const Network truth = testing::ab_network();
  Dataset d = generate_dataset(truth, 100, 1);
  d.variables[1].name = "Z";
  try {
    fit_mle(truth.structure(), d);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kVariableMismatch);
    EXPECT_NE(std::string(e.what()).find("B"), std::string::npos);
  }
  Dataset states = generate_dataset(truth, 100, 1);
  states.variables[0].states = {"no", "yes"};
  EXPECT_THROW(fit_mle(truth.structure(), states), Error);
}

TEST(Mle, RecoversGeneratorFromMillionRows) {
  // First five nodes of the benchmark network: A, B -> C -> D -> E.
  const Network b8 = testing::benchmark8();
  std::vector<DiscreteVariable> vars(b8.variables().begin(), b8.variables().begin() + 5);
  std::vector<std::vector<VarId>> parents(b8.all_parents().begin(), b8.all_parents().begin() + 5);
  std::vector<std::vector<double>> rows;
  for (VarId v = 0; v < 5; ++v) rows.push_back(b8.cpt_rows(v));
  const Network truth = Network::from_rows("five", vars, parents, rows);
  const Network fit = fit_mle(truth.structure(), generate_dataset(truth, 1000000, 0), 1.0, Executor(4));
  for (VarId v = 0; v < 5; ++v) {
    const auto a = truth.cpt_rows(v);
    const auto b = fit.cpt_rows(v);
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 0.01) << "node " << v;
  }
}

TEST(Mle, RowsSumToOne) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const Network truth = testing::random_network(rng, {.n = 7, .max_card = 4});
    const Network fit = fit_mle(truth.structure(), generate_dataset(truth, 200, trial), trial % 2 ? 0.0 : 0.5);
    for (VarId v = 0; v < 7; ++v) {
      const auto rows = fit.cpt_rows(v);
      const std::size_t card = fit.variable(v).states.size();
      for (std::size_t r = 0; r < rows.size(); r += card) {
        EXPECT_NEAR(std::accumulate(rows.begin() + r, rows.begin() + r + card, 0.0), 1.0, 1e-12);
      }
    }
  }
}

TEST(Mle, HugePseudocountApproachesUniform) {
  const Network truth = testing::benchmark8();
  const Network fit = fit_mle(truth.structure(), generate_dataset(truth, 5000, 3), 1e9);
  for (VarId v = 0; v < 8; ++v) {
    for (double p : fit.cpt_rows(v)) EXPECT_NEAR(p, 0.5, 1e-6);
  }
}

TEST(Mle, RowOrderDoesNotMatter) {
  const Network truth = testing::benchmark8();
  const Dataset d = generate_dataset(truth, 20000, 4);
  std::vector<std::size_t> order(d.n_rows);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(5);
  std::shuffle(order.begin(), order.end(), rng);
  const Network a = fit_mle(truth.structure(), d);
  const Network b = fit_mle(truth.structure(), select_rows(d, order), 1.0, Executor(3));
  EXPECT_TRUE(networks_equal(a, b, 0.0));
}

}  // namespace
}  // namespace pgm
