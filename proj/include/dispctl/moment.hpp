#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dispctl/biorthogonal.hpp"
#include "dispctl/control_shape.hpp"
#include "dispctl/errors.hpp"
#include "dispctl/fourier.hpp"
#include "dispctl/propagate.hpp"
#include "dispctl/spectrum.hpp"
#include "dispctl/symbols.hpp"

namespace dispctl {

/// Which coefficient formula produced h_k.
enum class CoefficientPath { Zero, Simple, Block, Pair };

inline std::string to_string(CoefficientPath p) {
  switch (p) {
    case CoefficientPath::Zero: return "zero";
    case CoefficientPath::Simple: return "simple";
    case CoefficientPath::Block: return "block";
    case CoefficientPath::Pair: return "pair";
  }
  return "zero";
}

/// h(x,t) = Σ_j h_j conj(q_{r(j)}(t)) ψ_j(x), where r(j) is j's cluster.
struct ControlSignal {
  BiorthogonalFamily family;
  int N = 0;
  double s = 0.0;
  double T = 0.0;
  Eigen::VectorXcd h;                 ///< index j+N
  Eigen::VectorXcd target;            ///< c_k = √(2π)·(u₁ - U(T)u₀)^(k)
  std::vector<int> rep_of;            ///< index j+N -> family column
  std::vector<CoefficientPath> path;  ///< index j+N
  double norm = 0.0;                  ///< ‖h‖_{L²(0,T;H^s)}
  double nu_empirical = 0.0;

  cplx h_at(int j) const { return h(j + N); }
};

struct SynthesisOptions {
  /// Enforce d_k >= 1/(8π²) on the resolved part of the Criterion II tail.
  bool enforce_pair_floor = true;
  double singular_tol = 1e-12;
  double mean_tol = 1e-12;
};

inline constexpr double kPairDetFloor = 1.0 / (8.0 * kPi * kPi);

/// ‖h‖² = Σ_k (1+|k|)^{2s} |h_k|² ∫_0^T |q_{r(k)}|² dt.
inline double control_norm(const ControlSignal& sig) {
  double acc = 0.0;
  for (int k = -sig.N; k <= sig.N; ++k) {
    acc += std::pow(1.0 + std::abs(k), 2.0 * sig.s) * std::norm(sig.h_at(k)) *
           sig.family.q_norm_sq(sig.rep_of[k + sig.N]);
  }
  return std::sqrt(acc);
}

namespace detail {

inline void solve_block(const ControlShape& shape, const std::vector<int>& idx,
                        const Eigen::VectorXcd& rhs, Eigen::VectorXcd& h, double tol,
                        int cluster_id) {
  const Eigen::Index n = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXcd M(n, n);
  for (Eigen::Index l = 0; l < n; ++l)
    for (Eigen::Index l0 = 0; l0 < n; ++l0) M(l, l0) = shape.m(idx[l], idx[l0]);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M.transpose());
  const double scale = std::pow(M.cwiseAbs().maxCoeff(), static_cast<double>(n));
  if (!(std::abs(lu.determinant()) >= tol * scale)) {
    throw HypothesisError("cluster block " + std::to_string(cluster_id) + " (representative " +
                          std::to_string(idx.front()) + ") is singular: |det|=" +
                          std::to_string(std::abs(lu.determinant())));
  }
  const Eigen::VectorXcd sol = lu.solve(rhs);
  for (Eigen::Index l = 0; l < n; ++l) h(idx[l] + shape.N) = sol(l);
}

}  // namespace detail

/// Moment-method control steering u0 to u1 on [0, T] in H^s.
inline ControlSignal synthesize(const FourierField& u0, const FourierField& u1,
                                const DispersionSymbol& sym, const SpectrumAnalysis& analysis,
                                const ControlShape& shape, double T, double s,
                                const SynthesisOptions& opts = {}) {
  const int N = analysis.N;
  if (u0.truncation() != N || u1.truncation() != N || shape.N != N) {
    throw ConfigError("synthesize: truncations of fields, spectrum and bump must agree");
  }
  if (!(T > 0.0)) throw ConfigError("synthesize: T must be positive");
  const double mean_scale = 1.0 + std::max(std::abs(u0.mean()), std::abs(u1.mean()));
  if (std::abs(u0.mean() - u1.mean()) > opts.mean_tol * mean_scale) {
    throw ConfigError("initial and target means differ (û₀(0) must equal û₁(0); the mean is "
                      "conserved by every control)");
  }
  if (analysis.criterion == Criterion::Inapplicable) {
    throw HypothesisError("eigenvalue structure matches neither criterion; no moment control");
  }
  const double t_min = controllability_time(analysis);
  if (T <= t_min) {
    throw HypothesisError("horizon T=" + std::to_string(T) + " does not exceed the sufficient time " +
                          std::to_string(t_min) + " at this truncation");
  }

  ControlSignal sig;
  sig.family = biorthogonalize(analysis.rep_lambdas(), T);
  sig.N = N;
  sig.s = s;
  sig.T = T;
  sig.h = Eigen::VectorXcd::Zero(2 * N + 1);
  sig.target = Eigen::VectorXcd::Zero(2 * N + 1);
  sig.rep_of = analysis.cluster_of;
  sig.path.assign(static_cast<std::size_t>(2 * N + 1), CoefficientPath::Zero);

  const FourierField shifted = u1 - propagate(u0, sym, T);
  const double root2pi = std::sqrt(kTwoPi);
  for (int k = -N; k <= N; ++k) sig.target(k + N) = k == 0 ? cplx(0.0) : root2pi * shifted[k];
  auto rhs = [&](int k) { return sig.target(k + N) * std::polar(1.0, -analysis.lambda(k) * T); };

  const int pair_resolved_from =
      std::max(analysis.k1_star, static_cast<int>(std::ceil(4.0 / shape.half_width)));
  for (std::size_t ci = 0; ci < analysis.clusters.size(); ++ci) {
    const Cluster& c = analysis.clusters[ci];
    std::vector<int> idx;
    for (int k : c.members)
      if (k != 0) idx.push_back(k);
    if (idx.empty()) continue;  // h_0 = 0
    if (idx.size() == 1 && c.size() == 1) {
      const int k = idx.front();
      sig.h(k + N) = rhs(k) / shape.m(k, k);
      sig.path[k + N] = CoefficientPath::Simple;
    } else if (analysis.is_tail_pair(c.representative)) {
      const int k = std::abs(c.representative);
      const cplx mkk = shape.m(k, k), mkm = shape.m(k, -k), mmk = shape.m(-k, k),
                 mmm = shape.m(-k, -k);
      const cplx det = mkk * mmm - mkm * mmk;
      const double scale = std::max({std::abs(mkk), std::abs(mmm), std::abs(mkm)});
      if (!(std::abs(det) >= opts.singular_tol * scale * scale)) {
        throw HypothesisError("pair block {" + std::to_string(k) + "," + std::to_string(-k) +
                              "} is singular (d_k=" + std::to_string(det.real()) + ")");
      }
      if (opts.enforce_pair_floor && k >= pair_resolved_from && det.real() < kPairDetFloor) {
        throw HypothesisError("pair determinant d_" + std::to_string(k) + "=" +
                              std::to_string(det.real()) + " is below 1/(8π²); the bump is "
                              "under-resolved for this truncation");
      }
      // (Mᵀ)⁻¹ for M = [[m_{k,k}, m_{k,-k}], [m_{-k,k}, m_{-k,-k}]].
      const cplx bk = rhs(k), bm = rhs(-k);
      sig.h(k + N) = (mmm * bk - mmk * bm) / det;
      sig.h(-k + N) = (-mkm * bk + mkk * bm) / det;
      sig.path[k + N] = sig.path[-k + N] = CoefficientPath::Pair;
    } else {
      Eigen::VectorXcd b(static_cast<Eigen::Index>(idx.size()));
      for (std::size_t l = 0; l < idx.size(); ++l) b(static_cast<Eigen::Index>(l)) = rhs(idx[l]);
      detail::solve_block(shape, idx, b, sig.h, opts.singular_tol, static_cast<int>(ci));
      for (int k : idx) sig.path[k + N] = CoefficientPath::Block;
    }
  }

  sig.norm = control_norm(sig);
  const double denom = sobolev_norm(u0, s) + sobolev_norm(u1, s);
  sig.nu_empirical = denom > 0.0 ? sig.norm / denom : 0.0;
  return sig;
}

/// P_{a,b} = ∫_0^T e^{-iλ_a t} conj(q_b(t)) dt over representatives, by quadrature.
inline Eigen::MatrixXcd moment_pairing(const ControlSignal& sig) { return pairing_matrix(sig.family); }

/// r_k = ∫_0^T (Gh(t), e^{-iλ_k(T-t)} ψ_k) dt - c_k, with the time integral
/// evaluated by quadrature (pass a cached `pairing` to skip recomputing it).
inline Eigen::VectorXcd moment_residuals(const ControlSignal& sig, const ControlShape& shape,
                                         const SpectrumAnalysis& analysis,
                                         const Eigen::MatrixXcd* pairing = nullptr) {
  const int N = sig.N;
  Eigen::MatrixXcd local;
  if (pairing == nullptr) {
    local = moment_pairing(sig);
    pairing = &local;
  }
  Eigen::VectorXcd r(2 * N + 1);
  for (int k = -N; k <= N; ++k) {
    const int a = analysis.rep_index(k);
    cplx acc = 0.0;
    for (int j = -N; j <= N; ++j) {
      if (sig.h_at(j) == cplx(0.0)) continue;
      acc += sig.h_at(j) * shape.m(j, k) * (*pairing)(a, sig.rep_of[j + N]);
    }
    r(k + N) = acc * std::polar(1.0, analysis.lambda(k) * sig.T) - sig.target(k + N);
  }
  return r;
}

}  // namespace dispctl
