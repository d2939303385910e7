#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dispctl/quadrature.hpp"

namespace dispctl {

/// Sobolev weight (1+|k|)^s.
inline double sobolev_weight(int k, double s) { return std::pow(1.0 + std::abs(k), s); }

/// Truncated Fourier representation of a periodic field on [0, 2π):
/// u(x) = Σ_{|k|<=N} û(k) e^{ikx}. Coefficients are stored for k = -N..N.
class FourierField {
 public:
  FourierField() = default;

  explicit FourierField(int N, double s = 0.0)
      : N_(N), s_(s), coeffs_(Eigen::VectorXcd::Zero(2 * N + 1)) {
    if (N < 0) throw std::invalid_argument("FourierField: negative truncation");
  }

  FourierField(Eigen::VectorXcd coeffs, double s) : s_(s), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() % 2 == 0) {
      throw std::invalid_argument("FourierField: coefficient count must be odd (2N+1)");
    }
    N_ = static_cast<int>((coeffs_.size() - 1) / 2);
  }

  /// ψ_k = e^{ikx}/√(2π), scaled by `amplitude`.
  static FourierField basis(int N, int k, double s = 0.0, cplx amplitude = 1.0) {
    FourierField f(N, s);
    f[k] = amplitude / std::sqrt(kTwoPi);
    return f;
  }

  static FourierField constant(int N, cplx value, double s = 0.0) {
    FourierField f(N, s);
    f[0] = value;
    return f;
  }

  int truncation() const { return N_; }
  double sobolev_index() const { return s_; }
  void set_sobolev_index(double s) { s_ = s; }

  cplx& operator[](int k) { return coeffs_(index(k)); }
  const cplx& operator[](int k) const { return coeffs_(index(k)); }

  const Eigen::VectorXcd& coeffs() const { return coeffs_; }
  Eigen::VectorXcd& coeffs() { return coeffs_; }

  cplx mean() const { return (*this)[0]; }

  bool contains(int k) const { return k >= -N_ && k <= N_; }

  /// Point value u(x).
  cplx operator()(double x) const {
    cplx acc = 0.0;
    for (int k = -N_; k <= N_; ++k) acc += (*this)[k] * std::polar(1.0, k * x);
    return acc;
  }

  FourierField& operator+=(const FourierField& o) {
    check_same(o);
    coeffs_ += o.coeffs_;
    return *this;
  }
  FourierField& operator-=(const FourierField& o) {
    check_same(o);
    coeffs_ -= o.coeffs_;
    return *this;
  }
  FourierField& operator*=(cplx a) {
    coeffs_ *= a;
    return *this;
  }

  friend FourierField operator+(FourierField a, const FourierField& b) { return a += b; }
  friend FourierField operator-(FourierField a, const FourierField& b) { return a -= b; }
  friend FourierField operator*(cplx a, FourierField b) { return b *= a; }

 private:
  Eigen::Index index(int k) const {
    if (k < -N_ || k > N_) throw std::out_of_range("FourierField: mode outside truncation");
    return static_cast<Eigen::Index>(k + N_);
  }

  void check_same(const FourierField& o) const {
    if (o.N_ != N_) throw std::invalid_argument("FourierField: truncation mismatch");
  }

  int N_ = 0;
  double s_ = 0.0;
  Eigen::VectorXcd coeffs_ = Eigen::VectorXcd::Zero(1);
};

/// ‖v‖_{H^s} = sqrt(2π Σ (1+|k|)^{2s} |v̂(k)|²).
inline double sobolev_norm(const FourierField& v, double s) {
  double acc = 0.0;
  const int N = v.truncation();
  for (int k = -N; k <= N; ++k) acc += std::pow(1.0 + std::abs(k), 2.0 * s) * std::norm(v[k]);
  return std::sqrt(kTwoPi * acc);
}

inline double sobolev_norm(const FourierField& v) { return sobolev_norm(v, v.sobolev_index()); }

/// (u, v)_{H^s} = 2π Σ (1+|k|)^{2s} û(k) conj(v̂(k)).
inline cplx sobolev_inner(const FourierField& u, const FourierField& v, double s) {
  if (u.truncation() != v.truncation()) {
    throw std::invalid_argument("sobolev_inner: truncation mismatch");
  }
  cplx acc = 0.0;
  const int N = u.truncation();
  for (int k = -N; k <= N; ++k) {
    acc += std::pow(1.0 + std::abs(k), 2.0 * s) * u[k] * std::conj(v[k]);
  }
  return kTwoPi * acc;
}

/// Mean-free part u - û(0).
inline FourierField mean_free(FourierField u) {
  u[0] = 0.0;
  return u;
}

/// Samples u(x_m), x_m = 2πm/M.
inline Eigen::VectorXcd sample(const FourierField& u, int M) {
  Eigen::VectorXcd out(M);
  for (int m = 0; m < M; ++m) out(m) = u(kTwoPi * m / M);
  return out;
}

}  // namespace dispctl
