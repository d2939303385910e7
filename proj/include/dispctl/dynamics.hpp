#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "dispctl/control_shape.hpp"
#include "dispctl/errors.hpp"
#include "dispctl/fourier.hpp"
#include "dispctl/moment.hpp"
#include "dispctl/propagate.hpp"
#include "dispctl/quadrature.hpp"
#include "dispctl/symbols.hpp"

namespace dispctl {

/// Controlled trajectory u(t) = U(t)u₀ + ∫_0^t U(t-τ) G h(τ) dτ in closed form.
inline std::vector<FourierField> duhamel(const FourierField& u0, const DispersionSymbol& sym,
                                         const ControlShape& shape, const ControlSignal& sig,
                                         const std::vector<double>& t_grid) {
  const int N = u0.truncation();
  if (shape.N != N || sig.N != N) throw std::invalid_argument("duhamel: truncation mismatch");
  const auto& fam = sig.family;
  const Eigen::Index R = fam.size();

  // V(k, ρ) = Σ_{j: r(j)=ρ} m_{j,k} h_j and A = V·Qᴴ, so that
  // Gh^(k, τ) = (1/√2π) Σ_n A(k, n) e^{iλ_n τ}.
  Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(2 * N + 1, R);
  for (int j = -N; j <= N; ++j) {
    const cplx hj = sig.h_at(j);
    if (hj == cplx(0.0)) continue;
    for (int k = -N; k <= N; ++k) V(k + N, sig.rep_of[j + N]) += shape.m(j, k) * hj;
  }
  const Eigen::MatrixXcd A = V * fam.coeffs.conjugate().transpose();
  const double inv_root = 1.0 / std::sqrt(kTwoPi);

  std::vector<FourierField> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    if (t < 0.0 || t > sig.T * (1.0 + 1e-12)) {
      throw std::invalid_argument("duhamel: time outside [0, T]");
    }
    FourierField u(N, u0.sobolev_index());
    for (int k = -N; k <= N; ++k) {
      const double lk = eigenvalue(sym, k);
      cplx forced = 0.0;
      for (Eigen::Index n = 0; n < R; ++n) {
        if (A(k + N, n) == cplx(0.0)) continue;
        forced += A(k + N, n) * exponential_integral(fam.rep_lambdas(n) - lk, t);
      }
      u[k] = std::polar(1.0, lk * t) * (u0[k] + inv_root * forced);
    }
    out.push_back(std::move(u));
  }
  return out;
}

enum class FeedbackKind { Zero, GGstar, GramianInverse };

inline std::string to_string(FeedbackKind k) {
  switch (k) {
    case FeedbackKind::Zero: return "zero";
    case FeedbackKind::GGstar: return "ggstar";
    case FeedbackKind::GramianInverse: return "gramian_inverse";
  }
  return "zero";
}

inline FeedbackKind feedback_from_string(const std::string& name) {
  if (name == "zero") return FeedbackKind::Zero;
  if (name == "ggstar") return FeedbackKind::GGstar;
  if (name == "gramian_inverse") return FeedbackKind::GramianInverse;
  throw ConfigError("unknown feedback kind '" + name + "' (expected zero, ggstar, gramian_inverse)");
}

/// Closed-loop operator K in weighted coordinates w_k = (1+|k|)^s û(k),
/// where the H^s inner product is the plain hermitian one (times 2π).
struct FeedbackLaw {
  FeedbackKind kind = FeedbackKind::Zero;
  int N = 0;
  double s = 0.0;
  double T = 0.0;
  double lambda_target = 0.0;
  Eigen::VectorXd lambdas;   ///< λ_k, index k+N
  Eigen::MatrixXcd matrix;   ///< K acting on w
  double min_eig_L = 0.0;    ///< GramianInverse only
};

/// G in weighted coordinates: W Gmat W⁻¹.
inline Eigen::MatrixXcd weighted_G(const ControlShape& shape, double s) {
  const int N = shape.N;
  Eigen::VectorXd w(2 * N + 1);
  for (int k = -N; k <= N; ++k) w(k + N) = sobolev_weight(k, s);
  return w.asDiagonal() * control_operator_matrix(shape) * w.cwiseInverse().asDiagonal();
}

inline Eigen::VectorXd mode_lambdas(const DispersionSymbol& sym, int N) {
  Eigen::VectorXd l(2 * N + 1);
  for (int k = -N; k <= N; ++k) l(k + N) = eigenvalue(sym, k);
  return l;
}

/// GG* in weighted coordinates.
inline Eigen::MatrixXcd weighted_GGstar(const ControlShape& shape, double s) {
  const Eigen::MatrixXcd Gw = weighted_G(shape, s);
  return Gw * Gw.adjoint();
}

/// L_{T,rate}(k,n) = (GG*)_{kn} ∫_0^T e^{-2·rate·τ} e^{i(λ_n-λ_k)τ} dτ.
inline Eigen::MatrixXcd weighted_gramian(const Eigen::MatrixXcd& ggs, const Eigen::VectorXd& lambdas,
                                         double T, double rate) {
  return ggs.cwiseProduct(exponential_gram_quadrature(lambdas, T, 2.0 * rate));
}

namespace detail {

/// Drops the zero mode (index N) from a (2N+1)-square matrix.
inline Eigen::MatrixXcd nonzero_block(const Eigen::MatrixXcd& M, int N) {
  const Eigen::Index n = 2 * N;
  Eigen::MatrixXcd out(n, n);
  auto src = [N](Eigen::Index i) { return i < N ? i : i + 1; };
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = M(src(i), src(j));
  return out;
}

inline Eigen::MatrixXcd embed_nonzero(const Eigen::MatrixXcd& B, int N) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2 * N + 1, 2 * N + 1);
  auto dst = [N](Eigen::Index i) { return i < N ? i : i + 1; };
  for (Eigen::Index i = 0; i < B.rows(); ++i)
    for (Eigen::Index j = 0; j < B.cols(); ++j) out(dst(i), dst(j)) = B(i, j);
  return out;
}

}  // namespace detail

inline FeedbackLaw build_feedback(FeedbackKind kind, const DispersionSymbol& sym,
                                  const ControlShape& shape, double s, double lambda = 0.0,
                                  double T = 1.0) {
  FeedbackLaw law;
  law.kind = kind;
  law.N = shape.N;
  law.s = s;
  law.T = T;
  law.lambda_target = lambda;
  law.lambdas = mode_lambdas(sym, shape.N);
  const int N = shape.N;
  switch (kind) {
    case FeedbackKind::Zero:
      law.matrix = Eigen::MatrixXcd::Zero(2 * N + 1, 2 * N + 1);
      break;
    case FeedbackKind::GGstar:
      law.matrix = -weighted_GGstar(shape, s);
      break;
    case FeedbackKind::GramianInverse: {
      if (!(lambda > 0.0)) throw ConfigError("gramian_inverse feedback needs lambda > 0");
      if (!(T > 0.0)) throw ConfigError("gramian_inverse feedback needs T > 0");
      const Eigen::MatrixXcd ggs = weighted_GGstar(shape, s);
      const Eigen::MatrixXcd L = detail::nonzero_block(weighted_gramian(ggs, law.lambdas, T, lambda), N);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(L);
      law.min_eig_L = es.eigenvalues().minCoeff();
      const double floor = 1e-12 * T * ggs.norm();
      if (!(law.min_eig_L > floor)) {
        throw HypothesisError("Gramian L_{T,λ} is not positive definite (min eigenvalue " +
                              std::to_string(law.min_eig_L) +
                              "); the system is not observable at this truncation");
      }
      const Eigen::MatrixXcd Linv = es.eigenvectors() *
                                    es.eigenvalues().cwiseInverse().asDiagonal() *
                                    es.eigenvectors().adjoint();
      law.matrix = -ggs * detail::embed_nonzero(Linv, N);
      break;
    }
  }
  return law;
}

struct TrajectoryReport {
  std::vector<double> times;
  std::vector<double> norms;       ///< ‖u(t) - û₀(0)‖_{H^s}
  std::vector<cplx> means;         ///< û(0, t)
  double fitted_rate = 0.0;        ///< least-squares slope of log‖·‖ (negative = decay)
  double decay_rate = 0.0;         ///< -fitted_rate
  double fit_residual = 0.0;       ///< RMS residual of the log fit
  double mean_drift = 0.0;
};

/// Slope and RMS residual of log(y) against t over t ∈ [t_lo, t_hi].
inline std::pair<double, double> fit_log_slope(const std::vector<double>& t,
                                               const std::vector<double>& y, double t_lo,
                                               double t_hi) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] + 1e-12 >= t_lo && t[i] <= t_hi + 1e-12 && y[i] > 0.0) {
      xs.push_back(t[i]);
      ys.push_back(std::log(y[i]));
    }
  }
  if (xs.size() < 2) return {0.0, 0.0};
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (my + slope * (xs[i] - mx));
    ss += r * r;
  }
  return {slope, std::sqrt(ss / n)};
}

/// ẇ = (iΛ + K) w stepped exactly by the matrix exponential over dt_out.
inline TrajectoryReport closed_loop(const FourierField& u0, const FeedbackLaw& law, double t_max,
                                    double dt_out) {
  if (!(t_max > 0.0) || !(dt_out > 0.0)) throw ConfigError("closed_loop: t_max and dt_out must be positive");
  const int N = law.N;
  if (u0.truncation() != N) throw std::invalid_argument("closed_loop: truncation mismatch");
  Eigen::VectorXd weight(2 * N + 1);
  for (int k = -N; k <= N; ++k) weight(k + N) = sobolev_weight(k, law.s);

  Eigen::MatrixXcd A = law.matrix;
  for (int i = 0; i < 2 * N + 1; ++i) A(i, i) += cplx(0.0, law.lambdas(i));
  // When K leaves the mean untouched (row and column 0 vanish) the zero mode
  // is decoupled; exponentiate the rest so Padé rounding cannot leak into it.
  Eigen::MatrixXcd step;
  if (law.matrix.row(N).isZero(0.0) && law.matrix.col(N).isZero(0.0)) {
    step = detail::embed_nonzero((detail::nonzero_block(A, N) * dt_out).exp(), N);
    step(N, N) = 1.0;
  } else {
    step = (A * dt_out).exp();
  }

  Eigen::VectorXcd w = weight.cast<cplx>().cwiseProduct(u0.coeffs());
  const cplx mean0 = u0.mean();
  const auto steps = static_cast<long>(std::llround(t_max / dt_out));
  TrajectoryReport rep;
  auto record = [&](double t) {
    Eigen::VectorXcd wf = w;
    wf(N) = 0.0;
    const double nrm = std::sqrt(kTwoPi) * wf.norm();
    if (!std::isfinite(nrm)) {
      throw HypothesisError("closed loop blew up at t=" + std::to_string(t) +
                            " (feedback has the wrong sign?)");
    }
    rep.times.push_back(t);
    rep.norms.push_back(nrm);
    rep.means.push_back(w(N));
    rep.mean_drift = std::max(rep.mean_drift, std::abs(w(N) - mean0));
  };
  record(0.0);
  for (long i = 1; i <= steps; ++i) {
    w = step * w;
    record(static_cast<double>(i) * dt_out);
  }
  const double t_end = rep.times.back();
  const auto [slope, resid] = fit_log_slope(rep.times, rep.norms, 0.25 * t_end, t_end);
  rep.fitted_rate = slope;
  rep.decay_rate = -slope;
  rep.fit_residual = resid;
  return rep;
}

/// ∫_0^T U(τ) GG* U(τ)* dτ on nonzero modes (weighted coordinates).
inline Eigen::MatrixXcd observability_gramian(const DispersionSymbol& sym, const ControlShape& shape,
                                              double s, double T) {
  if (!(T > 0.0)) throw ConfigError("observability_gramian: T must be positive");
  const Eigen::VectorXd l = mode_lambdas(sym, shape.N);
  const Eigen::MatrixXcd ggs = weighted_GGstar(shape, s);
  const Eigen::MatrixXcd W = ggs.cwiseProduct(exponential_gram_quadrature(l, T).conjugate());
  return detail::nonzero_block(W, shape.N);
}

/// δ² = λ_min of the observability Gramian.
inline double observability_constant(const DispersionSymbol& sym, const ControlShape& shape,
                                     double s, double T) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(observability_gramian(sym, shape, s, T),
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace dispctl
