#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace dispctl {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
inline QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  QuadratureRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p1 = 1.0;
    double p2 = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
    }
    pp = n * (z * p1 - p2) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

inline constexpr int kPanelOrder = 32;

/// Composite Gauss-Legendre on [a, b] with at least `min_nodes` nodes, built
/// from equal panels of `order` points each.
inline QuadratureRule composite_gauss_legendre(double a, double b, long min_nodes,
                                               int order = kPanelOrder) {
  const long panels = std::max<long>(1, (min_nodes + order - 1) / order);
  static thread_local int cached_order = 0;
  static thread_local QuadratureRule base;
  if (cached_order != order) {
    base = gauss_legendre(order);
    cached_order = order;
  }
  QuadratureRule rule;
  rule.nodes.reserve(static_cast<std::size_t>(panels * order));
  rule.weights.reserve(static_cast<std::size_t>(panels * order));
  const double h = (b - a) / static_cast<double>(panels);
  for (long p = 0; p < panels; ++p) {
    const double lo = a + h * static_cast<double>(p);
    const double mid = lo + 0.5 * h;
    for (int i = 0; i < order; ++i) {
      rule.nodes.push_back(mid + 0.5 * h * base.nodes[i]);
      rule.weights.push_back(0.5 * h * base.weights[i]);
    }
  }
  return rule;
}

/// Node budget that resolves e^{i w t} on [0, T] for |w| <= max_frequency.
inline long oscillation_node_count(double max_frequency, double T) {
  const double n = 8.0 * std::abs(max_frequency) * T / kPi;
  return std::max<long>(64, static_cast<long>(std::ceil(n)));
}

/// Exact ∫_0^T e^{iωt} dt, written as T e^{iωT/2} sinc(ωT/2) so it stays
/// accurate as ω -> 0.
inline cplx exponential_integral(double omega, double T) {
  const double x = 0.5 * omega * T;
  const double sinc = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
  return T * std::polar(1.0, x) * sinc;
}

/// W(a, b) = ∫_0^T e^{-rate t} e^{i (ν_b - ν_a) t} dt by composite
/// Gauss-Legendre quadrature. The node count follows oscillation_node_count
/// for the largest |ν|, which bounds every difference by 2 max|ν|.
inline Eigen::MatrixXcd exponential_gram_quadrature(const Eigen::VectorXd& freqs, double T,
                                                    double rate = 0.0) {
  const Eigen::Index n = freqs.size();
  Eigen::MatrixXcd W = Eigen::MatrixXcd::Zero(n, n);
  if (n == 0) return W;
  const double max_freq = freqs.cwiseAbs().maxCoeff();
  const QuadratureRule rule = composite_gauss_legendre(0.0, T, oscillation_node_count(max_freq, T));
  constexpr Eigen::Index kChunk = 2048;
  const auto total = static_cast<Eigen::Index>(rule.size());
  Eigen::MatrixXcd E(kChunk, n);
  for (Eigen::Index start = 0; start < total; start += kChunk) {
    const Eigen::Index len = std::min(kChunk, total - start);
    for (Eigen::Index i = 0; i < len; ++i) {
      const double t = rule.nodes[start + i];
      const double w = std::sqrt(rule.weights[start + i] * std::exp(-rate * t));
      for (Eigen::Index b = 0; b < n; ++b) E(i, b) = w * std::polar(1.0, freqs(b) * t);
    }
    W.selfadjointView<Eigen::Lower>().rankUpdate(E.topRows(len).adjoint());
  }
  W.triangularView<Eigen::StrictlyUpper>() = W.adjoint();
  return W;
}

}  // namespace dispctl
