#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dispctl/dynamics.hpp"
#include "support/oracles.hpp"
#include "support/rk4_oracle.hpp"

using namespace dispctl;

TEST(Propagate, IdentityNormAndGroupProperty) {
  std::mt19937_64 rng(1);
  const auto sym = DispersionSymbol::smith();
  FourierField u(oracle::random_complex(33, rng), 1.0);
  EXPECT_EQ((propagate(u, sym, 0.0) - u).coeffs().norm(), 0.0);
  for (double t : {0.1, 1.0, 10.0}) {
    for (double s : {-1.0, 0.0, 2.0}) {
      EXPECT_NEAR(sobolev_norm(propagate(u, sym, t), s), sobolev_norm(u, s), 1e-12 * sobolev_norm(u, s));
    }
  }
  const auto ab = propagate(propagate(u, sym, 0.3), sym, 1.1);
  const auto direct = propagate(u, sym, 1.4);
  EXPECT_LT((ab - direct).coeffs().cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Duhamel, ZeroControlIsFreeEvolution) {
  const int N = 8;
  const auto sym = DispersionSymbol::kdv();
  const auto an = cluster_spectrum(sym, N);
  const auto shape = make_bump(1.0, 1.0, N);
  std::mt19937_64 rng(2);
  auto u0 = oracle::random_field(N, 0.0, rng);
  const auto sig = synthesize(u0, propagate(u0, sym, 1.0), sym, an, shape, 1.0, 0.0);
  const std::vector<double> grid = {0.0, 0.25, 0.5, 1.0};
  const auto traj = duhamel(u0, sym, shape, sig, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_LT((traj[i] - propagate(u0, sym, grid[i])).coeffs().cwiseAbs().maxCoeff(), 1e-15) << grid[i];
  }
}

TEST(Duhamel, SteersSmithAndConservesMean) {
  const int N = 16;
  const auto sym = DispersionSymbol::smith();
  const auto an = cluster_spectrum(sym, N);
  const auto shape = make_bump(1.0, kPi / 4, N);
  std::mt19937_64 rng(3);
  auto u0 = oracle::random_field(N, 0.0, rng);
  auto u1 = oracle::random_field(N, 0.0, rng);
  u0[0] = u1[0] = cplx(0.4, -0.1);
  const auto sig = synthesize(u0, u1, sym, an, shape, 1.0, 0.0);
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
  const auto traj = duhamel(u0, sym, shape, sig, grid);
  for (const auto& u : traj) EXPECT_LE(std::abs(u.mean() - u0.mean()), 1e-12);
  EXPECT_LE(sobolev_norm(traj.back() - u1, 0.0) / sobolev_norm(u1, 0.0), 1e-6);
  EXPECT_THROW(duhamel(u0, sym, shape, sig, {1.5}), std::invalid_argument);
}

TEST(Duhamel, AgreesWithRk4Oracle) {
  const int N = 8;
  const auto sym = DispersionSymbol::smith();
  const auto an = cluster_spectrum(sym, N);
  const auto shape = make_bump(1.0, kPi / 4, N);
  std::mt19937_64 rng(4);
  const auto u0 = oracle::random_field(N, 0.0, rng);
  const auto u1 = oracle::random_field(N, 0.0, rng);
  const auto sig = synthesize(u0, u1, sym, an, shape, 1.0, 0.0);
  const auto closed = duhamel(u0, sym, shape, sig, {1.0}).back();
  const auto brute = oracle::rk4_controlled(u0, sym, shape, sig);
  EXPECT_LE(sobolev_norm(closed - brute, 0.0) / sobolev_norm(brute, 0.0), 1e-6);
  EXPECT_LE(sobolev_norm(brute - u1, 0.0) / sobolev_norm(u1, 0.0), 1e-6);
}

TEST(BuildFeedback, GGstarAtZeroSobolevIsMinusGSquared) {
  const auto shape = make_bump(2.0, 0.8, 10);
  const auto law = build_feedback(FeedbackKind::GGstar, DispersionSymbol::smith(), shape, 0.0);
  const Eigen::MatrixXcd G = control_operator_matrix(shape);
  EXPECT_LT((law.matrix + G * G).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((law.matrix - law.matrix.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(law.matrix);
  EXPECT_LE(es.eigenvalues().maxCoeff(), 1e-14);
}

TEST(BuildFeedback, WeightedGGstarIsPositiveSemidefinite) {
  const auto shape = make_bump(2.0, 0.8, 10);
  const auto ggs = weighted_GGstar(shape, 1.5);
  EXPECT_LT((ggs - ggs.adjoint()).cwiseAbs().maxCoeff(), 1e-12 * ggs.norm());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ggs);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12 * ggs.norm());
}

TEST(BuildFeedback, GramianIsContinuousInRate) {
  const auto sym = DispersionSymbol::smith();
  const auto shape = make_bump(1.0, kPi / 4, 8);
  const auto l = mode_lambdas(sym, 8);
  const auto ggs = weighted_GGstar(shape, 0.0);
  const auto L0 = weighted_gramian(ggs, l, 1.0, 0.0);
  double prev = std::numeric_limits<double>::infinity();
  for (double lam : {1e-3, 1e-6}) {
    const double diff = (weighted_gramian(ggs, l, 1.0, lam) - L0).cwiseAbs().maxCoeff();
    EXPECT_LT(diff, 4.0 * lam * L0.cwiseAbs().maxCoeff());
    EXPECT_LT(diff, prev);
    prev = diff;
  }
}

TEST(BuildFeedback, GramianMinEigenvalueMatchesObservability) {
  const int N = 16;
  const auto sym = DispersionSymbol::smith();
  const auto shape = make_bump(1.0, kPi / 4, N);
  const double delta2 = observability_constant(sym, shape, 0.0, 1.0);
  const auto l = mode_lambdas(sym, N);
  const auto ggs = weighted_GGstar(shape, 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es0(detail::nonzero_block(weighted_gramian(ggs, l, 1.0, 0.0), N));
  EXPECT_NEAR(es0.eigenvalues().minCoeff(), delta2, 1e-10 * delta2 + 1e-14);
  const auto law = build_feedback(FeedbackKind::GramianInverse, sym, shape, 0.0, 1.0, 1.0);
  EXPECT_GT(law.min_eig_L, 0.0);
  EXPECT_LE(law.min_eig_L, delta2 * (1.0 + 1e-10));
  EXPECT_GE(law.min_eig_L, std::exp(-2.0) * delta2 * (1.0 - 1e-10));
}

TEST(BuildFeedback, UnobservableModeAborts) {
  auto shape = make_bump(1.0, kPi / 4, 8);
  shape.moment.row(3 + 8).setZero();
  shape.moment.col(3 + 8).setZero();
  EXPECT_THROW(build_feedback(FeedbackKind::GramianInverse, DispersionSymbol::smith(), shape, 0.0, 1.0, 1.0),
               HypothesisError);
  EXPECT_THROW(build_feedback(FeedbackKind::GramianInverse, DispersionSymbol::smith(), shape, 0.0, 0.0, 1.0),
               ConfigError);
}

TEST(ClosedLoop, ZeroFeedbackIsUnitary) {
  const auto shape = make_bump(1.0, kPi / 4, 8);
  std::mt19937_64 rng(5);
  const auto u0 = oracle::random_field(8, 0.0, rng);
  const auto law = build_feedback(FeedbackKind::Zero, DispersionSymbol::smith(), shape, 0.0);
  const auto rep = closed_loop(u0, law, 10.0, 0.1);
  EXPECT_NEAR(rep.fitted_rate, 0.0, 1e-10);
  for (double n : rep.norms) EXPECT_NEAR(n, rep.norms.front(), 1e-12);
}

TEST(ClosedLoop, GGstarDecaysMonotonically) {
  const int N = 16;
  const auto shape = make_bump(1.0, kPi / 4, N);
  std::mt19937_64 rng(6);
  auto u0 = oracle::random_field(N, 0.0, rng);
  u0[0] = 0.25;
  const auto law = build_feedback(FeedbackKind::GGstar, DispersionSymbol::smith(), shape, 0.0);
  const auto rep = closed_loop(u0, law, 50.0, 0.25);
  EXPECT_GT(rep.decay_rate, 0.0);
  EXPECT_EQ(rep.decay_rate, -rep.fitted_rate);
  for (std::size_t i = 1; i < rep.norms.size(); ++i) EXPECT_LE(rep.norms[i], rep.norms[i - 1] * (1.0 + 1e-10));
  EXPECT_LE(rep.mean_drift, 1e-12);
  for (std::size_t i = 1; i < rep.times.size(); ++i) EXPECT_GT(rep.times[i], rep.times[i - 1]);
}

TEST(ClosedLoop, GramianInverseReachesTargetRate) {
  const int N = 16;
  const auto shape = make_bump(1.0, kPi / 4, N);
  std::mt19937_64 rng(7);
  const auto u0 = oracle::random_field(N, 0.0, rng);
  for (const auto& sym : {DispersionSymbol::smith(), DispersionSymbol::fourth_order_nls(-1.0)}) {
    for (double lam : {0.5, 1.0, 2.0}) {
      const auto law = build_feedback(FeedbackKind::GramianInverse, sym, shape, 0.0, lam, 1.0);
      const auto rep = closed_loop(u0, law, 10.0 / lam, 0.05 / lam);
      EXPECT_GE(rep.decay_rate, 0.9 * lam) << sym.name() << " λ=" << lam;
      EXPECT_LE(rep.mean_drift, 1e-12);
    }
  }
}

TEST(ClosedLoop, BlowUpIsReported) {
  const auto shape = make_bump(1.0, kPi / 4, 4);
  auto law = build_feedback(FeedbackKind::Zero, DispersionSymbol::kdv(), shape, 0.0);
  law.matrix = 1e3 * Eigen::MatrixXcd::Identity(9, 9);
  EXPECT_THROW(closed_loop(FourierField::basis(4, 1), law, 5.0, 1.0), HypothesisError);
}

TEST(Observability, PositiveAndMonotoneInHorizon) {
  const auto sym = DispersionSymbol::smith();
  const auto shape = make_bump(1.0, kPi / 4, 12);
  double prev = 0.0;
  for (double T : {0.5, 1.0, 2.0}) {
    const double d2 = observability_constant(sym, shape, 0.0, T);
    EXPECT_GT(d2, 0.0);
    EXPECT_GE(d2, prev);
    prev = d2;
  }
}

TEST(Observability, WideWindowIsComfortablyObservable) {
  const auto wide = make_bump(1.0, kPi - 1e-3, 6);
  const auto narrow = make_bump(1.0, kPi / 8, 6);
  const auto sym = DispersionSymbol::kdv();
  const double dw = observability_constant(sym, wide, 0.0, 1.0);
  EXPECT_GT(dw, 1e-3);
  EXPECT_GT(dw, observability_constant(sym, narrow, 0.0, 1.0));
}

TEST(Observability, RayleighQuotientOracle) {
  const int N = 16;
  const auto sym = DispersionSymbol::smith();
  const auto shape = make_bump(1.0, kPi / 8, N);
  const double T = 1.0;
  const auto W = observability_gramian(sym, shape, 0.0, T);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(W);
  const double delta2 = es.eigenvalues()(0);
  ASSERT_GT(delta2, 0.0);
  const oracle::ObservabilityRayleigh rq(sym, shape, 0.0, T);
  std::mt19937_64 rng(8);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 1000; ++i) best = std::min(best, rq.quotient(oracle::random_complex(2 * N, rng)));
  EXPECT_GE(best, delta2 * (1.0 - 0.05));
  EXPECT_NEAR(rq.quotient(es.eigenvectors().col(0)), delta2, 0.05 * delta2);
}
