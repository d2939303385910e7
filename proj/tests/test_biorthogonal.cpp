#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dispctl/biorthogonal.hpp"
#include "dispctl/spectrum.hpp"
#include "support/oracles.hpp"

using namespace dispctl;

namespace {

Eigen::VectorXd reps_up_to(const DispersionSymbol& s, int K) {
  return cluster_spectrum(s, K).rep_lambdas();
}

cplx gl_entry(double omega, double T) {
  const auto r = composite_gauss_legendre(0.0, T, oscillation_node_count(std::abs(omega), T));
  cplx acc = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) acc += r.weights[i] * std::polar(1.0, omega * r.nodes[i]);
  return acc;
}

}  // namespace

TEST(GramMatrix, DiagonalAndFullPeriods) {
  const double T = 0.5;
  Eigen::VectorXd l(3);
  l << 0.0, kTwoPi / T, 3.0 * kTwoPi / T;
  const auto G = gram_matrix(l, T);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(G(i, i), cplx(T));
  EXPECT_LT(std::abs(G(0, 1)), 1e-15);
  EXPECT_LT(std::abs(G(1, 2)), 1e-15);
  EXPECT_LT((G - G.adjoint()).cwiseAbs().maxCoeff(), 1e-16);
}

TEST(GramMatrix, MatchesQuadratureOfEachEntry) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  Eigen::VectorXd l(5);
  for (int i = 0; i < 5; ++i) l(i) = u(rng);
  const double T = 1.7;
  const auto G = gram_matrix(l, T);
  for (int k = 0; k < 5; ++k)
    for (int n = 0; n < 5; ++n) EXPECT_LT(std::abs(G(k, n) - gl_entry(l(n) - l(k), T)), 1e-10);
}

TEST(GramMatrix, RejectsDuplicatesAndBadHorizon) {
  Eigen::VectorXd l(2);
  l << 1.0, 1.0;
  EXPECT_THROW(gram_matrix(l, 1.0), HypothesisError);
  l << 0.0, 1.0;
  EXPECT_THROW(gram_matrix(l, 0.0), ConfigError);
}

TEST(Biorthogonalize, SingleFrequency) {
  Eigen::VectorXd l(1);
  l << 3.0;
  const auto f = biorthogonalize(l, 2.0);
  EXPECT_NEAR(f.coeffs(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(f.bounds.A, 2.0, 1e-15);
  EXPECT_NEAR(f.bounds.B, 2.0, 1e-15);
}

TEST(Biorthogonalize, OrthogonalPairGivesIdentity) {
  Eigen::VectorXd l(2);
  l << 0.0, kTwoPi;
  const auto f = biorthogonalize(l, 1.0);
  EXPECT_LT((f.coeffs - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
  const auto fb = frame_bounds(f.gram);
  EXPECT_NEAR(fb.A, 1.0, 1e-15);
  EXPECT_NEAR(fb.B, 1.0, 1e-15);
}

TEST(Biorthogonalize, ResidualSmallForKdvAndSmith) {
  for (const auto& s : {DispersionSymbol::kdv(), DispersionSymbol::smith()}) {
    const auto f = biorthogonalize(reps_up_to(s, 16), 1.0);
    EXPECT_LE(biorthogonality_residual(f), 1e-8) << s.name();
  }
}

TEST(Biorthogonalize, DualNormMatchesEnergyOfQ) {
  const auto l = reps_up_to(DispersionSymbol::smith(), 6);
  const auto f = biorthogonalize(l, 1.0);
  for (Eigen::Index j = 0; j < f.size(); ++j) {
    const double energy = oracle::exp_sum_energy(l, f.coeffs.col(j), 1.0);
    EXPECT_NEAR(f.q_norm_sq(j), energy, 1e-9 * energy) << j;
  }
}

TEST(Biorthogonalize, RefusesIllConditionedFamily) {
  Eigen::VectorXd l(3);
  l << 0.0, 1e-7, 5.0;
  EXPECT_THROW(biorthogonalize(l, 1.0), HypothesisError);
}

TEST(FrameBounds, RandomizedSandwichSmith) {
  const auto l = reps_up_to(DispersionSymbol::smith(), 16);
  const auto G = gram_matrix(l, 1.0);
  const auto fb = frame_bounds(G);
  ASSERT_GT(fb.A, 0.0);
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::VectorXcd c = oracle::random_complex(l.size(), rng);
    const double e = oracle::exp_sum_energy(l, c, 1.0);
    const double n2 = c.squaredNorm();
    EXPECT_GE(e, fb.A * n2 * (1.0 - 1e-8)) << trial;
    EXPECT_LE(e, fb.B * n2 * (1.0 + 1e-8)) << trial;
  }
}

TEST(FrameBounds, ApproachDiagonalAsHorizonGrows) {
  const auto l = reps_up_to(DispersionSymbol::kdv(), 8);
  double prev_dev = std::numeric_limits<double>::infinity();
  for (double T : {1.0, 10.0, 100.0}) {
    const auto fb = frame_bounds(gram_matrix(l, T));
    const double dev = std::max(std::abs(fb.A / T - 1.0), std::abs(fb.B / T - 1.0));
    EXPECT_LT(dev, prev_dev) << T;
    prev_dev = dev;
  }
  EXPECT_LT(prev_dev, 0.05);
}
