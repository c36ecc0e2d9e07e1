#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "chromou/contrastive_math.hpp"
#include "oracles.hpp"

using namespace chromou;
namespace cm = chromou::contrastive;

namespace {

Eigen::MatrixXd random_batch(std::mt19937_64& gen, int n, int d, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::MatrixXd m(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) m(i, j) = normal(gen);
  }
  return m;
}

}  // namespace

TEST(AvgPool, Means) {
  Eigen::MatrixXd same(3, 2);
  same << 1, 2, 1, 2, 1, 2;
  EXPECT_EQ(cm::avg_pool(same), Eigen::RowVector2d(1, 2));
  Eigen::MatrixXd two(2, 2);
  two << 0, 2, 2, 0;
  EXPECT_EQ(cm::avg_pool(two), Eigen::RowVector2d(1, 1));
  Eigen::MatrixXd single(1, 3);
  single << 4, 5, 6;
  EXPECT_EQ(cm::avg_pool(single), single);
  EXPECT_THROW(cm::avg_pool(Eigen::MatrixXd(0, 3)), InputError);
  Eigen::MatrixXd bad(1, 1);
  bad << NAN;
  EXPECT_THROW(cm::avg_pool(bad), InputError);
}

TEST(InfoNce, IdenticalEmbeddingsGiveTwoLnTwo) {
  Eigen::MatrixXd c(2, 3);
  c << 0.3, -1.2, 2.0, 0.3, -1.2, 2.0;
  for (double tau : {0.05, 0.7, 1.0, 10.0}) EXPECT_NEAR(cm::info_nce(c, c, tau), 2.0 * std::log(2.0), 1e-9);
}

TEST(InfoNce, OrthonormalOneHots) {
  const Eigen::MatrixXd e = Eigen::MatrixXd::Identity(2, 2);
  EXPECT_NEAR(cm::info_nce(e, e, 1.0), 2.0 * (std::log(1.0 + std::numbers::e) - 1.0), 1e-9);
}

TEST(InfoNce, MatchesNaiveOracle) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::MatrixXd c = random_batch(gen, 4, 16, 0.5);
    const Eigen::MatrixXd o = random_batch(gen, 4, 16, 0.5);
    EXPECT_NEAR(cm::info_nce(c, o, 0.7), oracle::naive_info_nce(c, o, 0.7), 1e-9);
  }
}

TEST(InfoNce, StableForLargeLogits) {
  // Dot products far beyond exp overflow: the naive form gives inf or nan.
  Eigen::MatrixXd c(2, 1), o(2, 1);
  c << 100.0, -100.0;
  o << 100.0, -100.0;
  const double l = cm::info_nce(c, o, 0.01);
  EXPECT_TRUE(std::isfinite(l));
  EXPECT_GE(l, 0.0);
  EXPECT_FALSE(std::isfinite(oracle::naive_info_nce(c, o, 0.01)));
}

TEST(InfoNce, PermutationInvariant) {
  std::mt19937_64 gen(3);
  const Eigen::MatrixXd c = random_batch(gen, 6, 5, 1.0);
  const Eigen::MatrixXd o = random_batch(gen, 6, 5, 1.0);
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(6);
  perm.indices() << 3, 0, 5, 1, 4, 2;
  EXPECT_NEAR(cm::info_nce(perm * c, perm * o, 0.7), cm::info_nce(c, o, 0.7), 1e-12);
}

TEST(InfoNce, AlignmentDecreasesLossWhenNegativesDoNotGain) {
  // Moving o_i toward c_i raises the positive logit of row i, and also changes
  // c_k . o_i for every other row k. The loss is guaranteed to fall when none of
  // those negative logits rises: here the c_k are scaled basis vectors and o_i
  // has non-negative off-diagonal entries, so c_k . (c_i - o_i) <= 0.
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> scale(0.5, 2.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 5;
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, 8);
    for (int k = 0; k < n; ++k) c(k, k) = scale(gen);
    Eigen::MatrixXd o = random_batch(gen, n, 8, 1.0);
    const int i = trial % n;
    for (int k = 0; k < 8; ++k) o(i, k) = k == i ? c(i, i) * (unit(gen) * 2.0 - 1.0) : unit(gen);
    double previous = cm::info_nce(c, o, 0.7);
    for (int step = 0; step < 5; ++step) {
      o.row(i) += 0.2 * (c.row(i) - o.row(i));
      const double now = cm::info_nce(c, o, 0.7);
      EXPECT_LT(now, previous);
      previous = now;
    }
  }
}

TEST(InfoNce, AlignmentCanRaiseLossThroughNegatives) {
  // Without that condition the claim fails: o_1 moves toward c_1 but also
  // toward c_0, so row 0's negative logit grows faster than row 1 gains.
  Eigen::MatrixXd c(2, 2), o(2, 2);
  c << 3, 0, 1, 0.1;
  o << 0, 1, 0, 0;
  const double before = cm::info_nce(c, o, 0.7);
  o.row(1) += 0.5 * (c.row(1) - o.row(1));
  EXPECT_GT(cm::info_nce(c, o, 0.7), before);
}

TEST(InfoNce, GradientMatchesFiniteDifferences) {
  std::mt19937_64 gen(11);
  const double h = 1e-6;
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXd c = random_batch(gen, 4, 3, 0.8);
    const Eigen::MatrixXd o = random_batch(gen, 4, 3, 0.8);
    const auto g = cm::info_nce_gradient(c, o, 0.7);
    EXPECT_NEAR(g.loss, cm::info_nce(c, o, 0.7), 1e-12);
    for (int r = 0; r < 4; ++r) {
      for (int k = 0; k < 3; ++k) {
        Eigen::MatrixXd cp = c, cn = c, op = o, on = o;
        cp(r, k) += h;
        cn(r, k) -= h;
        op(r, k) += h;
        on(r, k) -= h;
        const double dc = (cm::info_nce(cp, o, 0.7) - cm::info_nce(cn, o, 0.7)) / (2 * h);
        const double dO = (cm::info_nce(c, op, 0.7) - cm::info_nce(c, on, 0.7)) / (2 * h);
        EXPECT_NEAR(g.d_camouflage(r, k), dc, 1e-5 * std::max(1.0, std::abs(dc)));
        EXPECT_NEAR(g.d_silhouette(r, k), dO, 1e-5 * std::max(1.0, std::abs(dO)));
      }
    }
  }
}

TEST(InfoNce, Errors) {
  const Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 3);
  EXPECT_THROW(cm::info_nce(one, one, 0.7), InputError);
  const Eigen::MatrixXd two = Eigen::MatrixXd::Ones(2, 3);
  EXPECT_THROW(cm::info_nce(two, two, 0.0), ParameterError);
  EXPECT_THROW(cm::info_nce(two, two, -1.0), ParameterError);
  EXPECT_THROW(cm::info_nce(two, Eigen::MatrixXd::Ones(2, 4), 0.7), InputError);
  EXPECT_THROW(cm::info_nce(two, Eigen::MatrixXd::Ones(3, 3), 0.7), InputError);
}

TEST(InfoNce, FloatInstantiation) {
  const Eigen::MatrixXf e = Eigen::MatrixXf::Identity(2, 2);
  EXPECT_NEAR(cm::info_nce(e, e, 1.0f), 2.0f * (std::log(1.0f + std::numbers::e_v<float>) - 1.0f), 1e-5f);
}

TEST(AutoregressiveNll, ClosedForms) {
  const std::vector<double> ones{1.0, 1.0, 1.0};
  EXPECT_EQ(cm::autoregressive_nll<double>(ones), 0.0);
  const std::vector<double> inv_e{std::exp(-1.0)};
  EXPECT_NEAR(cm::autoregressive_nll<double>(inv_e), 1.0, 1e-12);
  const std::vector<double> tenth{0.1, 0.1, 0.1};
  EXPECT_NEAR(cm::autoregressive_nll<double>(tenth), 3.0 * std::log(10.0), 1e-12);
  const std::vector<double> zero{0.5, 0.0};
  EXPECT_THROW(cm::autoregressive_nll<double>(zero), InputError);
  const std::vector<double> over{1.5};
  EXPECT_THROW(cm::autoregressive_nll<double>(over), InputError);
}

TEST(TotalLoss, EndpointsAndMidpoint) {
  EXPECT_EQ(cm::total_loss(0.1, 0.3, 0.0), 0.3);
  EXPECT_EQ(cm::total_loss(0.1, 0.3, 1.0), 0.1);
  EXPECT_EQ(cm::total_loss(2.0, 4.0, 0.5), 3.0);
  EXPECT_THROW(cm::total_loss(1.0, 1.0, -0.1), ParameterError);
  EXPECT_THROW(cm::total_loss(1.0, 1.0, 1.1), ParameterError);
}

TEST(TotalLoss, LinearInEachArgument) {
  const double a = 0.3;
  const double base = cm::total_loss(1.0, 2.0, a);
  EXPECT_NEAR(cm::total_loss(1.5, 2.0, a) - base, a * 0.5, 1e-15);
  EXPECT_NEAR(cm::total_loss(1.0, 2.5, a) - base, (1 - a) * 0.5, 1e-15);
}
