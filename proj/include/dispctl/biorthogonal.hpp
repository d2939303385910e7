#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "dispctl/errors.hpp"
#include "dispctl/quadrature.hpp"

namespace dispctl {

inline constexpr double kMaxGramCondition = 1e12;
inline constexpr double kMinFrameRatio = 1e-10;

/// G_{k,n} = ∫_0^T e^{i(λ_n - λ_k)t} dt.
inline Eigen::MatrixXcd gram_matrix(const Eigen::VectorXd& lambdas, double T) {
  if (!(T > 0.0)) throw ConfigError("gram_matrix: T must be positive");
  const Eigen::Index n = lambdas.size();
  Eigen::MatrixXcd G(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index m = 0; m < n; ++m) {
      if (k != m && lambdas(k) == lambdas(m)) {
        throw HypothesisError("gram_matrix: duplicate frequency " + std::to_string(lambdas(k)) +
                              " (cluster the spectrum first)");
      }
      G(k, m) = (k == m) ? cplx(T, 0.0) : exponential_integral(lambdas(m) - lambdas(k), T);
    }
  }
  return G;
}

struct FrameBounds {
  double A = 0.0;
  double B = 0.0;
};

inline FrameBounds frame_bounds(const Eigen::MatrixXcd& gram) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

/// Dual family q_j(t) = Σ_n Q_{n,j} e^{-iλ_n t} with
/// ∫_0^T e^{-iλ_k t} conj(q_j(t)) dt = δ_{kj}.
struct BiorthogonalFamily {
  double T = 0.0;
  Eigen::VectorXd rep_lambdas;
  Eigen::MatrixXcd gram;
  Eigen::MatrixXcd coeffs;     ///< Q = conj(G⁻¹)
  Eigen::VectorXd q_norm_sq;   ///< ∫_0^T |q_j|² = (G⁻¹)_{jj}
  FrameBounds bounds;
  double condition = 0.0;

  Eigen::Index size() const { return rep_lambdas.size(); }

  cplx q(Eigen::Index j, double t) const {
    cplx acc = 0.0;
    for (Eigen::Index n = 0; n < size(); ++n) acc += coeffs(n, j) * std::polar(1.0, -rep_lambdas(n) * t);
    return acc;
  }
};

inline BiorthogonalFamily biorthogonalize(const Eigen::MatrixXcd& gram, const Eigen::VectorXd& lambdas,
                                          double T) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
  if (es.info() != Eigen::Success) throw HypothesisError("biorthogonalize: eigensolver failed");
  BiorthogonalFamily fam;
  fam.T = T;
  fam.rep_lambdas = lambdas;
  fam.gram = gram;
  fam.bounds = {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
  fam.condition = fam.bounds.B / fam.bounds.A;
  if (!(fam.bounds.A > kMinFrameRatio * T) || !(fam.condition <= kMaxGramCondition)) {
    std::ostringstream msg;
    msg << "exponential family is ill-conditioned on [0, " << T << "] (A=" << fam.bounds.A
        << ", B/A=" << fam.condition << "); increase the horizon T";
    throw HypothesisError(msg.str());
  }
  const Eigen::MatrixXcd& V = es.eigenvectors();
  const Eigen::MatrixXcd inv =
      V * es.eigenvalues().cwiseInverse().asDiagonal() * V.adjoint();
  fam.coeffs = inv.conjugate();
  fam.q_norm_sq = inv.diagonal().real();
  return fam;
}

inline BiorthogonalFamily biorthogonalize(const Eigen::VectorXd& lambdas, double T) {
  return biorthogonalize(gram_matrix(lambdas, T), lambdas, T);
}

/// Gram matrix by composite Gauss-Legendre quadrature, independent of the
/// closed form used in gram_matrix.
inline Eigen::MatrixXcd quadrature_gram(const Eigen::VectorXd& lambdas, double T) {
  return exponential_gram_quadrature(lambdas, T);
}

/// P_{k,j} = ∫_0^T e^{-iλ_k t} conj(q_j(t)) dt by quadrature.
inline Eigen::MatrixXcd pairing_matrix(const BiorthogonalFamily& fam) {
  return quadrature_gram(fam.rep_lambdas, fam.T) * fam.coeffs.conjugate();
}

inline double biorthogonality_residual(const BiorthogonalFamily& fam) {
  const Eigen::MatrixXcd P = pairing_matrix(fam);
  return (P - Eigen::MatrixXcd::Identity(P.rows(), P.cols())).cwiseAbs().maxCoeff();
}

}  // namespace dispctl
