#include <cmath>

#include <gtest/gtest.h>

#include "dispctl/quadrature.hpp"

using namespace dispctl;

TEST(GaussLegendre, WeightsSumToTwo) {
  for (int n : {1, 2, 5, 16, 32, 64}) {
    const auto r = gauss_legendre(n);
    double sum = 0.0;
    for (double w : r.weights) sum += w;
    EXPECT_NEAR(sum, 2.0, 1e-14) << n;
  }
}

TEST(GaussLegendre, ExactForPolynomialsUpToDegree2nMinus1) {
  const int n = 12;
  const auto r = gauss_legendre(n);
  for (int p = 0; p <= 2 * n - 1; ++p) {
    double acc = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) acc += r.weights[i] * std::pow(r.nodes[i], p);
    const double exact = (p % 2 == 1) ? 0.0 : 2.0 / (p + 1);
    EXPECT_NEAR(acc, exact, 1e-14) << "degree " << p;
  }
}

TEST(GaussLegendre, RejectsNonPositiveOrder) { EXPECT_THROW(gauss_legendre(0), std::invalid_argument); }

TEST(CompositeGaussLegendre, IntegratesOscillatoryExponential) {
  const double T = 1.3;
  for (double omega : {0.0, 1.0, 57.0, 2000.0}) {
    const auto r = composite_gauss_legendre(0.0, T, oscillation_node_count(omega, T));
    cplx acc = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) acc += r.weights[i] * std::polar(1.0, omega * r.nodes[i]);
    const cplx exact = omega == 0.0 ? cplx(T) : (std::polar(1.0, omega * T) - 1.0) / cplx(0.0, omega);
    EXPECT_LT(std::abs(acc - exact), 1e-12) << omega;
  }
}

TEST(ExponentialIntegral, MatchesDirectFormulaAndSmallFrequencyLimit) {
  const double T = 2.0;
  for (double omega : {-3.0, 0.7, 11.0}) {
    const cplx direct = (std::polar(1.0, omega * T) - 1.0) / cplx(0.0, omega);
    EXPECT_LT(std::abs(exponential_integral(omega, T) - direct), 1e-14);
  }
  EXPECT_LT(std::abs(exponential_integral(1e-12, T) - cplx(T, 1e-12 * T * T / 2)), 1e-15);
  EXPECT_EQ(exponential_integral(0.0, T), cplx(T));
}

TEST(ExponentialGramQuadrature, MatchesClosedFormWithDamping) {
  Eigen::VectorXd nu(4);
  nu << -40.0, 0.0, 3.5, 120.0;
  const double T = 1.0;
  for (double rate : {0.0, 0.5, 4.0}) {
    const Eigen::MatrixXcd W = exponential_gram_quadrature(nu, T, rate);
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        const cplx z(-rate, nu(b) - nu(a));
        const cplx exact = std::abs(z) == 0.0 ? cplx(T) : (std::exp(z * T) - 1.0) / z;
        EXPECT_LT(std::abs(W(a, b) - exact), 1e-12) << a << "," << b << " rate " << rate;
      }
    }
  }
}
