#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dispctl/errors.hpp"
#include "dispctl/fourier.hpp"

namespace dispctl {

/// Unnormalized mollifier exp(-1/(1-y²)) on |y| < 1, zero elsewhere.
inline double mollifier(double y) {
  const double y2 = y * y;
  if (y2 >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - y2));
}

/// Signed distance x - x0 wrapped into [-π, π).
inline double periodic_offset(double x, double x0) {
  double d = std::fmod(x - x0 + kPi, kTwoPi);
  if (d < 0.0) d += kTwoPi;
  return d - kPi;
}

/// Localized control profile g and everything derived from it on the band
/// |k| <= N: Fourier coefficients ĝ(k) for |k| <= 2N, the moment matrix
/// m_{j,k} = (G ψ_j, ψ_k)_{L²}, its diagonal floor β and the pair
/// determinants d_k.
struct ControlShape {
  double center = 0.0;
  double half_width = 0.0;
  int N = 0;
  int M = 0;
  double norm_constant = 0.0;  ///< c with ∫ c·mollifier = 1
  Eigen::VectorXcd ghat;       ///< ĝ(k), k = -2N..2N
  Eigen::VectorXcd g2hat;      ///< Fourier coefficients of g², k = -N..N
  Eigen::MatrixXcd moment;     ///< (j+N, k+N) -> m_{j,k}
  double beta = 0.0;
  Eigen::VectorXd pair_det;  ///< d_k at index k-1, k = 1..N

  double g(double x) const {
    return norm_constant * mollifier(periodic_offset(x, center) / half_width);
  }

  cplx ghat_at(int k) const {
    if (std::abs(k) > 2 * N) throw std::out_of_range("ControlShape: ĝ index outside 2N band");
    return ghat(k + 2 * N);
  }

  cplx m(int j, int k) const { return moment(j + N, k + N); }

  double d(int k) const { return pair_det(k - 1); }
};

inline int default_resolution(int N) { return std::max(8 * N, 4096); }

namespace detail {

inline Eigen::VectorXcd trapezoid_coefficients(const std::vector<double>& samples, int K) {
  const int M = static_cast<int>(samples.size());
  Eigen::VectorXcd out(2 * K + 1);
  for (int k = -K; k <= K; ++k) {
    cplx acc = 0.0;
    for (int m = 0; m < M; ++m) {
      if (samples[m] == 0.0) continue;
      acc += samples[m] * std::polar(1.0, -kTwoPi * static_cast<double>(k) * m / M);
    }
    out(k + K) = acc / static_cast<double>(M);
  }
  return out;
}

inline void fill_moment(ControlShape& shape) {
  const int N = shape.N;
  shape.moment.resize(2 * N + 1, 2 * N + 1);
  for (int j = -N; j <= N; ++j) {
    for (int k = -N; k <= N; ++k) {
      shape.moment(j + N, k + N) =
          shape.ghat_at(k - j) - kTwoPi * shape.ghat_at(-j) * shape.ghat_at(k);
    }
  }
  // Unit mass makes row and column 0 vanish identically; drop the rounding residue.
  shape.moment.row(N).setZero();
  shape.moment.col(N).setZero();
  shape.beta = std::numeric_limits<double>::infinity();
  for (int k = -N; k <= N; ++k) {
    if (k != 0) shape.beta = std::min(shape.beta, shape.m(k, k).real());
  }
  shape.pair_det.resize(N);
  for (int k = 1; k <= N; ++k) {
    const cplx det = shape.m(k, k) * shape.m(-k, -k) - shape.m(k, -k) * shape.m(-k, k);
    shape.pair_det(k - 1) = det.real();
  }
}

inline void check_bump_args(double half_width, int N, int M) {
  if (!(half_width > 0.0 && half_width < kPi)) {
    throw ConfigError("bump half_width must lie in (0, π), got " + std::to_string(half_width));
  }
  if (N < 1) throw ConfigError("bump truncation N must be at least 1");
  if (M < 8 * N) {
    throw ConfigError("bump resolution M=" + std::to_string(M) + " is below 8N=" +
                      std::to_string(8 * N));
  }
}

}  // namespace detail

/// Builds the unit-mass mollifier bump centred at `center` with support
/// radius `half_width`, sampled at M points (M = 0 picks the default).
inline ControlShape make_bump(double center, double half_width, int N, int M = 0) {
  if (M == 0) M = default_resolution(N);
  detail::check_bump_args(half_width, N, M);
  ControlShape shape;
  shape.center = std::fmod(center, kTwoPi);
  if (shape.center < 0.0) shape.center += kTwoPi;
  shape.half_width = half_width;
  shape.N = N;
  shape.M = M;

  std::vector<double> raw(M);
  double mass = 0.0;
  for (int m = 0; m < M; ++m) {
    raw[m] = mollifier(periodic_offset(kTwoPi * m / M, shape.center) / half_width);
    mass += raw[m];
  }
  mass *= kTwoPi / M;
  if (!(mass > 0.0)) throw ConfigError("bump support is not resolved by the sampling grid");
  shape.norm_constant = 1.0 / mass;
  std::vector<double> g(M), g2(M);
  for (int m = 0; m < M; ++m) {
    g[m] = shape.norm_constant * raw[m];
    g2[m] = g[m] * g[m];
  }
  shape.ghat = detail::trapezoid_coefficients(g, 2 * N);
  shape.g2hat = detail::trapezoid_coefficients(g2, N);
  detail::fill_moment(shape);
  return shape;
}

/// Rebuilds a shape from stored ĝ values (moment data recomputed).
inline ControlShape shape_from_coefficients(double center, double half_width, int N, int M,
                                            const Eigen::VectorXcd& ghat) {
  if (ghat.size() != 4 * N + 1) {
    throw ConfigError("stored ĝ has " + std::to_string(ghat.size()) + " entries, expected 4N+1");
  }
  ControlShape shape = make_bump(center, half_width, N, M);
  shape.ghat = ghat;
  detail::fill_moment(shape);
  return shape;
}

/// Matrix of G acting on Fourier coefficients: (Gv)^(k) = Σ_j m_{j,k} v̂(j).
inline Eigen::MatrixXcd control_operator_matrix(const ControlShape& shape) {
  return shape.moment.transpose();
}

/// G(v) = g v - g ⟨v, g⟩ restricted to the band |k| <= N.
inline FourierField apply_G(const ControlShape& shape, const FourierField& v) {
  if (v.truncation() != shape.N) {
    throw std::invalid_argument("apply_G: field truncation " + std::to_string(v.truncation()) +
                                " does not match shape truncation " + std::to_string(shape.N));
  }
  return FourierField(Eigen::VectorXcd(shape.moment.transpose() * v.coeffs()),
                      v.sobolev_index());
}

/// δ_k = ‖G ψ_k‖²_{L²} over the whole line of modes, from the moments of g and g².
inline double G_psi_norm_sq(const ControlShape& shape, int k) {
  const double s0 = kTwoPi * shape.g2hat(shape.N).real();           // ∫ g²
  const cplx sk = kTwoPi * std::conj(shape.g2hat(k + shape.N));     // ∫ g² e^{ikx}
  const cplx gk = shape.ghat_at(k);
  return s0 / kTwoPi - 2.0 * (gk * sk).real() + kTwoPi * std::norm(gk) * s0;
}

struct DiagBounds {
  double beta = 0.0;   ///< min_{k≠0} m_{k,k}
  double delta = 0.0;  ///< min_{k≠0} ‖Gψ_k‖²
};

inline DiagBounds diag_lower_bound(const ControlShape& shape) {
  DiagBounds b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (int k = -shape.N; k <= shape.N; ++k) {
    if (k == 0) continue;
    b.beta = std::min(b.beta, shape.m(k, k).real());
    b.delta = std::min(b.delta, G_psi_norm_sq(shape, k));
  }
  if (!(b.beta > 0.0) || !(b.delta > 0.0)) {
    throw HypothesisError("moment matrix diagonal floor is not positive (beta=" +
                          std::to_string(b.beta) + ", delta=" + std::to_string(b.delta) +
                          "); the bump is defective or the truncation too small");
  }
  return b;
}

}  // namespace dispctl
