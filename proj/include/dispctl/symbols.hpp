#pragma once

#include <cmath>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "dispctl/errors.hpp"
#include "dispctl/quadrature.hpp"

namespace dispctl {

enum class SymbolFamily {
  KdV,
  Schrodinger,
  BenjaminOno,
  Benjamin,
  Smith,
  DGBO,
  FourthOrderNLS,
  HigherOrderEven,
  HigherOrderOdd,
  CustomTable,
};

/// Symmetry of a(k): even a(-k) = a(k), odd a(-k) = -a(k).
enum class Parity { Even, Odd, None };

inline std::string to_string(SymbolFamily f) {
  switch (f) {
    case SymbolFamily::KdV: return "kdv";
    case SymbolFamily::Schrodinger: return "schrodinger";
    case SymbolFamily::BenjaminOno: return "benjamin_ono";
    case SymbolFamily::Benjamin: return "benjamin";
    case SymbolFamily::Smith: return "smith";
    case SymbolFamily::DGBO: return "dgbo";
    case SymbolFamily::FourthOrderNLS: return "fourth_order_nls";
    case SymbolFamily::HigherOrderEven: return "higher_order_even";
    case SymbolFamily::HigherOrderOdd: return "higher_order_odd";
    case SymbolFamily::CustomTable: return "custom_table";
  }
  return "unknown";
}

inline SymbolFamily family_from_string(const std::string& name) {
  for (auto f : {SymbolFamily::KdV, SymbolFamily::Schrodinger, SymbolFamily::BenjaminOno,
                 SymbolFamily::Benjamin, SymbolFamily::Smith, SymbolFamily::DGBO,
                 SymbolFamily::FourthOrderNLS, SymbolFamily::HigherOrderEven,
                 SymbolFamily::HigherOrderOdd, SymbolFamily::CustomTable}) {
    if (to_string(f) == name) return f;
  }
  throw ConfigError("unknown symbol family '" + name +
                    "' (expected kdv, schrodinger, benjamin_ono, benjamin, smith, dgbo, "
                    "fourth_order_nls, higher_order_even, higher_order_odd, custom_table)");
}

inline std::string to_string(Parity p) {
  switch (p) {
    case Parity::Even: return "even";
    case Parity::Odd: return "odd";
    case Parity::None: return "none";
  }
  return "none";
}

inline Parity parity_from_string(const std::string& name) {
  if (name == "even") return Parity::Even;
  if (name == "odd") return Parity::Odd;
  if (name == "none") return Parity::None;
  throw ConfigError("unknown parity '" + name + "' (expected even, odd, none)");
}

/// Real Fourier multiplier a(k) of the dispersive operator, with its order r
/// (|a(k)| <= C|k|^{r-1}) and declared parity. Immutable once built.
class DispersionSymbol {
 public:
  static DispersionSymbol kdv() { return {SymbolFamily::KdV, 3.0, Parity::Even}; }
  static DispersionSymbol schrodinger() { return {SymbolFamily::Schrodinger, 2.0, Parity::Odd}; }
  static DispersionSymbol benjamin_ono() {
    return {SymbolFamily::BenjaminOno, 2.0, Parity::Even};
  }
  static DispersionSymbol benjamin(double alpha) {
    if (!(alpha > 0.0)) throw ConfigError("benjamin: alpha must be positive");
    DispersionSymbol s{SymbolFamily::Benjamin, 3.0, Parity::Even};
    s.alpha_ = alpha;
    return s;
  }
  static DispersionSymbol smith() { return {SymbolFamily::Smith, 2.0, Parity::Even}; }
  static DispersionSymbol dgbo(double alpha) {
    if (!(alpha > 0.0)) throw ConfigError("dgbo: alpha must be positive");
    DispersionSymbol s{SymbolFamily::DGBO, alpha + 1.0, Parity::Even};
    s.alpha_ = alpha;
    return s;
  }
  static DispersionSymbol fourth_order_nls(double mu) {
    if (mu == 0.0) throw ConfigError("fourth_order_nls: mu must be nonzero");
    DispersionSymbol s{SymbolFamily::FourthOrderNLS, 4.0, Parity::Odd};
    s.mu_ = mu;
    return s;
  }
  /// alphas = {α₂, α₄, ..., α₂ₘ}: a(k) = Σ_p α_{2p} (-1)^p k^{2p-1}.
  static DispersionSymbol higher_order_even(std::vector<double> alphas) {
    if (alphas.empty() || alphas.front() == 0.0 || alphas.back() == 0.0) {
      throw ConfigError("higher_order_even: need α₂ ≠ 0 and α₂ₘ ≠ 0");
    }
    const double m = static_cast<double>(alphas.size());
    DispersionSymbol s{SymbolFamily::HigherOrderEven, 2.0 * m, Parity::Odd};
    s.alpha_list_ = std::move(alphas);
    return s;
  }
  /// alphas = {α₂, α₃, ..., α₂ₘ₊₁}: a(k) = Σ_n α_n (-1)^{⌊n/2⌋} k^{n-1}.
  static DispersionSymbol higher_order_odd(std::vector<double> alphas) {
    if (alphas.size() < 2 || alphas.size() % 2 != 0 || alphas.front() == 0.0 ||
        alphas.back() == 0.0) {
      throw ConfigError("higher_order_odd: need α₂..α₂ₘ₊₁ (even count) with α₂ ≠ 0, α₂ₘ₊₁ ≠ 0");
    }
    const double m = static_cast<double>(alphas.size() / 2);
    DispersionSymbol s{SymbolFamily::HigherOrderOdd, 2.0 * m + 1.0, Parity::None};
    s.alpha_list_ = std::move(alphas);
    return s;
  }
  /// Tabulated a(k) for k = k_min .. k_min + values.size() - 1.
  static DispersionSymbol custom_table(int k_min, std::vector<double> values, double order,
                                       Parity parity) {
    if (values.empty()) throw ConfigError("custom_table: empty table");
    if (!(order >= 1.0)) throw ConfigError("custom_table: order must be >= 1");
    DispersionSymbol s{SymbolFamily::CustomTable, order, parity};
    s.table_min_ = k_min;
    s.table_ = std::move(values);
    return s;
  }

  SymbolFamily family() const { return family_; }
  double order() const { return order_; }
  Parity parity() const { return parity_; }
  double mu() const { return mu_; }
  double alpha() const { return alpha_; }
  const std::vector<double>& alpha_list() const { return alpha_list_; }
  int table_min() const { return table_min_; }
  int table_max() const { return table_min_ + static_cast<int>(table_.size()) - 1; }
  const std::vector<double>& table() const { return table_; }

  std::string name() const { return to_string(family_); }

  /// a(k).
  double operator()(int k) const {
    const double x = static_cast<double>(k);
    const double ax = std::abs(x);
    switch (family_) {
      case SymbolFamily::KdV: return x * x;
      case SymbolFamily::Schrodinger: return -x;
      case SymbolFamily::BenjaminOno: return ax;
      case SymbolFamily::Benjamin: return -x * x + alpha_ * ax;
      case SymbolFamily::Smith:
        // 2π(√(k²+1) - 1) without cancellation.
        return kTwoPi * x * x / (std::sqrt(x * x + 1.0) + 1.0);
      case SymbolFamily::DGBO: return -std::pow(ax, alpha_);
      case SymbolFamily::FourthOrderNLS: return -x + mu_ * x * x * x;
      case SymbolFamily::HigherOrderEven: {
        double acc = 0.0;
        double pw = x;
        for (std::size_t p = 0; p < alpha_list_.size(); ++p) {
          const double sign = (p % 2 == 0) ? -1.0 : 1.0;  // (-1)^{p+1}
          acc += sign * alpha_list_[p] * pw;
          pw *= x * x;
        }
        return acc;
      }
      case SymbolFamily::HigherOrderOdd: {
        double acc = 0.0;
        double pw = x;
        for (std::size_t i = 0; i < alpha_list_.size(); ++i) {
          const std::size_t n = i + 2;
          const double sign = ((n / 2) % 2 == 0) ? 1.0 : -1.0;
          acc += sign * alpha_list_[i] * pw;
          pw *= x;
        }
        return acc;
      }
      case SymbolFamily::CustomTable: {
        if (k < table_min() || k > table_max()) {
          throw std::out_of_range("custom_table: k=" + std::to_string(k) +
                                  " outside stored range [" + std::to_string(table_min()) +
                                  ", " + std::to_string(table_max()) + "]");
        }
        return table_[static_cast<std::size_t>(k - table_min_)];
      }
    }
    return 0.0;
  }

 private:
  DispersionSymbol(SymbolFamily f, double r, Parity p) : family_(f), order_(r), parity_(p) {}

  SymbolFamily family_;
  double order_;
  Parity parity_;
  double mu_ = 0.0;
  double alpha_ = 0.0;
  std::vector<double> alpha_list_;
  int table_min_ = 0;
  std::vector<double> table_;
};

inline double eval_symbol(const DispersionSymbol& sym, int k) { return sym(k); }

/// λ_k = k a(k); ∂ₓ𝒜 acts as multiplication by iλ_k on ψ_k.
inline double eigenvalue(const DispersionSymbol& sym, int k) {
  if (k == 0) return 0.0;
  return static_cast<double>(k) * sym(k);
}

/// |λ_{k+1} - λ_k| for k = 1..k_max-1.
inline std::vector<double> asymptotic_gap_divergence(const DispersionSymbol& sym, int k_max) {
  if (k_max < 2) throw ConfigError("asymptotic_gap_divergence: k_max must be >= 2");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k_max - 1));
  for (int k = 1; k < k_max; ++k) {
    out.push_back(std::abs(eigenvalue(sym, k + 1) - eigenvalue(sym, k)));
  }
  return out;
}

/// Smallest C with |a(k)| <= C|k|^{r-1} over 1 <= |k| <= k_max.
inline double growth_constant(const DispersionSymbol& sym, int k_max) {
  double c = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    const double w = std::pow(static_cast<double>(k), sym.order() - 1.0);
    c = std::max({c, std::abs(sym(k)) / w, std::abs(sym(-k)) / w});
  }
  return c;
}

/// max_{1<=k<=k_max} |a(-k) ∓ a(k)| for the declared parity (0 for None).
inline double parity_defect(const DispersionSymbol& sym, int k_max) {
  double worst = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    switch (sym.parity()) {
      case Parity::Even: worst = std::max(worst, std::abs(sym(-k) - sym(k))); break;
      case Parity::Odd: worst = std::max(worst, std::abs(sym(-k) + sym(k))); break;
      case Parity::None: break;
    }
  }
  return worst;
}

}  // namespace dispctl
