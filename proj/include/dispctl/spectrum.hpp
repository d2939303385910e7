#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "dispctl/errors.hpp"
#include "dispctl/quadrature.hpp"
#include "dispctl/symbols.hpp"

namespace dispctl {

enum class Criterion { I, II, Inapplicable };

inline std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::I: return "I";
    case Criterion::II: return "II";
    case Criterion::Inapplicable: return "inapplicable";
  }
  return "inapplicable";
}

inline constexpr double kDefaultClusterTol = 1e-9;
inline constexpr double kDivergenceThreshold = 1e3;

/// One multiplicity class I(k₁) = {k : λ_k = λ_{k₁}}.
struct Cluster {
  std::vector<int> members;  ///< ascending
  int representative = 0;    ///< smallest |k|, ties to the positive index
  double lambda = 0.0;       ///< λ at the representative

  std::size_t size() const { return members.size(); }
  bool contains(int k) const { return std::binary_search(members.begin(), members.end(), k); }
};

struct GapProfileEntry {
  int radius = 0;      ///< representatives with |k| > radius
  double gap = 0.0;    ///< min pairwise |λ_k - λ_n| among them
};

struct SpectrumAnalysis {
  int N = 0;
  double tol = kDefaultClusterTol;
  std::vector<double> lambdas;        ///< index k+N
  std::vector<Cluster> clusters;      ///< ordered by representative
  std::vector<int> cluster_of;        ///< index k+N -> position in clusters
  std::vector<int> representatives;   ///< ascending
  int n0 = 0;
  int k1_star = 0;
  double gamma = 0.0;
  std::vector<GapProfileEntry> gamma_prime_profile;
  Criterion criterion = Criterion::Inapplicable;

  double lambda(int k) const { return lambdas.at(static_cast<std::size_t>(k + N)); }
  const Cluster& cluster_for(int k) const {
    return clusters.at(static_cast<std::size_t>(cluster_of.at(static_cast<std::size_t>(k + N))));
  }
  /// Position of k's cluster in `clusters` (the column of its biorthogonal function).
  int rep_index(int k) const { return cluster_of.at(static_cast<std::size_t>(k + N)); }

  Eigen::VectorXd rep_lambdas() const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(clusters.size()));
    for (std::size_t i = 0; i < clusters.size(); ++i) out(static_cast<Eigen::Index>(i)) = clusters[i].lambda;
    return out;
  }

  /// True when k sits in a Criterion II tail pair handled by the 2×2 formula.
  bool is_tail_pair(int k) const {
    return criterion == Criterion::II && std::abs(k) >= k1_star && cluster_for(k).size() == 2;
  }
};

namespace detail {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

/// Labels (index k+N -> canonical root) from chaining sorted neighbours
/// within `threshold`, optionally uniting k with -k.
inline std::vector<int> chain_labels(const std::vector<double>& lambdas, double threshold,
                                     bool pair_structurally) {
  const int n = static_cast<int>(lambdas.size());
  const int N = (n - 1) / 2;
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return lambdas[a] < lambdas[b]; });
  DisjointSets sets(n);
  for (int i = 1; i < n; ++i) {
    if (lambdas[order[i]] - lambdas[order[i - 1]] <= threshold) sets.unite(order[i], order[i - 1]);
  }
  if (pair_structurally) {
    for (int k = 1; k <= N; ++k) sets.unite(N + k, N - k);
  }
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) labels[i] = sets.find(i);
  return labels;
}

inline int pick_representative(const std::vector<int>& members) {
  int best = members.front();
  for (int k : members) {
    if (std::abs(k) < std::abs(best) || (std::abs(k) == std::abs(best) && k > best)) best = k;
  }
  return best;
}

inline bool tail_matches(const SpectrumAnalysis& a, int K, Criterion pattern) {
  for (const auto& c : a.clusters) {
    const bool touches = std::any_of(c.members.begin(), c.members.end(),
                                     [K](int k) { return std::abs(k) >= K; });
    if (!touches) continue;
    if (pattern == Criterion::I && c.size() != 1) return false;
    if (pattern == Criterion::II) {
      if (c.size() != 2 || c.members[0] != -c.members[1] || c.members[1] == 0) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Fills gamma and the residual-gap profile from the clusters.
inline void compute_gaps(SpectrumAnalysis& a) {
  if (a.representatives.size() < 2) {
    throw HypothesisError("gap constants need at least two distinct eigenvalues");
  }
  auto min_gap = [&](int radius) {
    std::vector<double> vals;
    for (const auto& c : a.clusters) {
      if (std::abs(c.representative) > radius) vals.push_back(c.lambda);
    }
    if (vals.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    std::sort(vals.begin(), vals.end());
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < vals.size(); ++i) g = std::min(g, vals[i] - vals[i - 1]);
    return g;
  };
  a.gamma = min_gap(-1);
  a.gamma_prime_profile.clear();
  for (int R = 0; R <= a.N - 2; ++R) {
    const double g = min_gap(R);
    if (std::isnan(g)) break;  // fewer than two representatives remain
    a.gamma_prime_profile.push_back({R, g});
  }
}

/// Groups λ_k, |k| <= N, into multiplicity clusters and classifies the tail.
/// `pair_structurally` unites k and -k before checking (exact λ_k = λ_{-k}
/// for symbols with odd a(k)).
inline SpectrumAnalysis cluster_spectrum_from_lambdas(const std::vector<double>& lambdas, int N,
                                                      double tol = kDefaultClusterTol,
                                                      bool pair_structurally = false) {
  if (!(tol > 0.0)) throw ConfigError("cluster tolerance must be positive");
  if (N < 1 || lambdas.size() != static_cast<std::size_t>(2 * N + 1)) {
    throw ConfigError("cluster_spectrum: need 2N+1 eigenvalues");
  }
  SpectrumAnalysis a;
  a.N = N;
  a.tol = tol;
  a.lambdas = lambdas;

  double scale = 1.0;
  for (double l : lambdas) scale = std::max(scale, 1.0 + std::abs(l));
  const double threshold = tol * scale;
  const auto labels = detail::chain_labels(lambdas, threshold, pair_structurally);
  const auto fine = detail::chain_labels(lambdas, 0.1 * threshold, pair_structurally);
  if (labels != fine) {
    throw HypothesisError("ambiguous eigenvalue clustering: grouping at tol=" +
                          std::to_string(tol) + " differs from tol/10; adjust the tolerance");
  }

  std::vector<std::vector<int>> groups(lambdas.size());
  for (int i = 0; i < 2 * N + 1; ++i) groups[labels[i]].push_back(i - N);
  for (auto& g : groups) {
    if (g.empty()) continue;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int k : g) {
      lo = std::min(lo, lambdas[k + N]);
      hi = std::max(hi, lambdas[k + N]);
    }
    if (hi - lo > threshold) {
      throw HypothesisError("cluster spread " + std::to_string(hi - lo) +
                            " exceeds tolerance (declared parity not matched by eigenvalues?)");
    }
    Cluster c;
    c.members = g;
    c.representative = detail::pick_representative(g);
    c.lambda = lambdas[c.representative + N];
    a.clusters.push_back(std::move(c));
  }
  std::sort(a.clusters.begin(), a.clusters.end(),
            [](const Cluster& x, const Cluster& y) { return x.representative < y.representative; });
  a.cluster_of.assign(lambdas.size(), -1);
  for (std::size_t i = 0; i < a.clusters.size(); ++i) {
    a.representatives.push_back(a.clusters[i].representative);
    a.n0 = std::max(a.n0, static_cast<int>(a.clusters[i].size()));
    for (int k : a.clusters[i].members) a.cluster_of[k + N] = static_cast<int>(i);
  }

  a.criterion = Criterion::Inapplicable;
  a.k1_star = 0;
  for (Criterion pattern : {Criterion::I, Criterion::II}) {
    for (int K = 1; K <= N / 2; ++K) {
      if (detail::tail_matches(a, K, pattern)) {
        a.criterion = pattern;
        a.k1_star = K;
        break;
      }
    }
    if (a.criterion != Criterion::Inapplicable) break;
  }

  compute_gaps(a);
  return a;
}

inline std::vector<double> symbol_lambdas(const DispersionSymbol& sym, int N) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(2 * N + 1));
  for (int k = -N; k <= N; ++k) out.push_back(eigenvalue(sym, k));
  return out;
}

inline SpectrumAnalysis cluster_spectrum(const DispersionSymbol& sym, int N,
                                         double tol = kDefaultClusterTol) {
  if (N < 4) throw ConfigError("cluster_spectrum: N must be at least 4");
  return cluster_spectrum_from_lambdas(symbol_lambdas(sym, N), N, tol,
                                       sym.parity() == Parity::Odd);
}

struct GapConstants {
  double gamma = 0.0;
  std::vector<GapProfileEntry> profile;
};

inline GapConstants gap_constants(const SpectrumAnalysis& a) {
  if (a.representatives.size() < 2) {
    throw HypothesisError("gap constants need at least two distinct eigenvalues");
  }
  return {a.gamma, a.gamma_prime_profile};
}

/// Upper bound on the control horizon at this truncation: 0 when the residual
/// gap profile diverges (any T > 0 works), otherwise 2π / max residual gap.
inline double controllability_time(const SpectrumAnalysis& a,
                                   double divergence_threshold = kDivergenceThreshold) {
  if (a.criterion == Criterion::Inapplicable) {
    throw HypothesisError("controllability_time: eigenvalue structure matches neither criterion");
  }
  const auto& p = a.gamma_prime_profile;
  if (p.empty()) return 0.0;
  const double last = p.back().gap;
  if (last >= divergence_threshold) return 0.0;
  const std::size_t mid = p.size() / 2;
  if (p.size() >= 4) {
    bool increasing = true;
    for (std::size_t i = mid + 1; i < p.size(); ++i) increasing &= p[i].gap > p[i - 1].gap;
    if (increasing && last >= 1.5 * p[mid].gap) return 0.0;
  }
  double best = 0.0;
  for (const auto& e : p) best = std::max(best, e.gap);
  return kTwoPi / best;
}

}  // namespace dispctl
