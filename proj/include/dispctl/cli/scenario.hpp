#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "dispctl/errors.hpp"
#include "dispctl/fourier.hpp"
#include "dispctl/io.hpp"
#include "dispctl/spectrum.hpp"
#include "dispctl/symbols.hpp"

namespace dispctl::cli {

/// Declarative description of an initial or target field.
///
///   zero            : only the mean
///   single_mode     : amplitude · ψ_k
///   modes           : explicit ψ-coefficients [{k, re, im}, ...]
///   gaussian_packet : c_k = amplitude·exp(-(k-center)²/(2 width²)), mirrored
///                     to a real field when `real` is set
///   random_seeded   : complex normal c_k / (1+|k|)^decay, rescaled to
///                     H^s norm `amplitude`, drawn from seed + seed_offset
struct FieldSpec {
  json raw = json{{"kind", "zero"}};
};

struct BumpSpec {
  double center = 1.0;
  double half_width = kPi / 4.0;
  int M = 0;
};

struct StabilizeSpec {
  std::string feedback = "gramian_inverse";
  double lambda = 1.0;
  double T = 1.0;
  double t_max = 10.0;
  double dt_out = 0.05;
  json initial = nullptr;  ///< optional field spec; falls back to Scenario::initial
};

struct Scenario {
  std::string name = "scenario";
  json symbol = json{{"family", "smith"}};
  int N = 16;
  double s = 0.0;
  double T = 1.0;
  double cluster_tol = kDefaultClusterTol;
  BumpSpec bump;
  FieldSpec initial;
  FieldSpec target = FieldSpec{json{{"kind", "single_mode"}, {"k", 1}}};
  int samples = 101;  ///< output grid points on [0, T] for simulate and q samples
  StabilizeSpec stabilize;
};

inline json scenario_to_json(const Scenario& sc) {
  return {{"schema", kSchemaVersion},
          {"name", sc.name},
          {"symbol", sc.symbol},
          {"N", sc.N},
          {"s", sc.s},
          {"T", sc.T},
          {"cluster_tol", sc.cluster_tol},
          {"bump", {{"center", sc.bump.center}, {"half_width", sc.bump.half_width}, {"M", sc.bump.M}}},
          {"initial", sc.initial.raw},
          {"target", sc.target.raw},
          {"samples", sc.samples},
          {"stabilize",
           {{"feedback", sc.stabilize.feedback},
            {"lambda", sc.stabilize.lambda},
            {"T", sc.stabilize.T},
            {"t_max", sc.stabilize.t_max},
            {"dt_out", sc.stabilize.dt_out},
            {"initial", sc.stabilize.initial}}}};
}

inline Scenario scenario_from_json(const json& j) {
  using detail::optional;
  if (!j.is_object()) throw ConfigError("scenario: expected a JSON object");
  const int schema = optional<int>(j, "schema", kSchemaVersion, "scenario");
  if (schema != kSchemaVersion) {
    throw ConfigError("scenario: unsupported schema " + std::to_string(schema) + " (expected 1)");
  }
  Scenario sc;
  sc.name = optional<std::string>(j, "name", sc.name, "scenario");
  if (!j.contains("symbol")) throw ConfigError("scenario: missing required key 'symbol'");
  sc.symbol = j.at("symbol");
  symbol_from_json(sc.symbol);  // validate early
  sc.N = optional<int>(j, "N", sc.N, "scenario");
  sc.s = optional<double>(j, "s", sc.s, "scenario");
  sc.T = optional<double>(j, "T", sc.T, "scenario");
  sc.cluster_tol = optional<double>(j, "cluster_tol", sc.cluster_tol, "scenario");
  if (j.contains("bump")) {
    const json& b = j.at("bump");
    sc.bump.center = optional<double>(b, "center", sc.bump.center, "bump");
    sc.bump.half_width = optional<double>(b, "half_width", sc.bump.half_width, "bump");
    sc.bump.M = optional<int>(b, "M", sc.bump.M, "bump");
  }
  if (j.contains("initial")) sc.initial.raw = j.at("initial");
  if (j.contains("target")) sc.target.raw = j.at("target");
  sc.samples = optional<int>(j, "samples", sc.samples, "scenario");
  if (j.contains("stabilize")) {
    const json& st = j.at("stabilize");
    sc.stabilize.feedback = optional<std::string>(st, "feedback", sc.stabilize.feedback, "stabilize");
    sc.stabilize.lambda = optional<double>(st, "lambda", sc.stabilize.lambda, "stabilize");
    sc.stabilize.T = optional<double>(st, "T", sc.stabilize.T, "stabilize");
    sc.stabilize.t_max = optional<double>(st, "t_max", sc.stabilize.t_max, "stabilize");
    sc.stabilize.dt_out = optional<double>(st, "dt_out", sc.stabilize.dt_out, "stabilize");
    if (st.contains("initial")) sc.stabilize.initial = st.at("initial");
  }

  if (sc.N < 4) throw ConfigError("scenario: N must be at least 4 (got " + std::to_string(sc.N) + ")");
  if (!(sc.T > 0.0)) throw ConfigError("scenario: T must be positive");
  if (!(sc.cluster_tol > 0.0)) throw ConfigError("scenario: cluster_tol must be positive");
  if (sc.samples < 2) throw ConfigError("scenario: samples must be at least 2");
  if (!(sc.stabilize.t_max > 0.0) || !(sc.stabilize.dt_out > 0.0) ||
      sc.stabilize.dt_out > sc.stabilize.t_max) {
    throw ConfigError("stabilize: need 0 < dt_out <= t_max");
  }
  return sc;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return scenario_from_json(j);
}

inline cplx read_complex(const json& spec, const char* key, cplx fallback) {
  if (!spec.contains(key)) return fallback;
  const json& v = spec.at(key);
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ConfigError(std::string("field: '") + key + "' must be a number or [re, im]");
}

/// Materializes a field spec on |k| <= N.
inline FourierField build_field(const FieldSpec& spec, int N, double s, std::uint64_t seed) {
  const json& j = spec.raw;
  if (!j.is_object()) throw ConfigError("field: expected an object with a 'kind'");
  const std::string kind = detail::require<std::string>(j, "kind", "field");
  FourierField u(N, s);
  const double root2pi = std::sqrt(kTwoPi);
  auto set_psi = [&](int k, cplx c) {
    if (!u.contains(k)) {
      throw ConfigError("field: mode k=" + std::to_string(k) + " outside truncation N=" + std::to_string(N));
    }
    u[k] += c / root2pi;
  };
  if (kind == "zero") {
  } else if (kind == "single_mode") {
    set_psi(detail::require<int>(j, "k", "field"), read_complex(j, "amplitude", 1.0));
  } else if (kind == "modes") {
    const json& list = j.contains("coeffs") ? j.at("coeffs") : json::array();
    if (!list.is_array()) throw ConfigError("field: 'coeffs' must be an array");
    for (const auto& e : list) {
      set_psi(detail::require<int>(e, "k", "field.coeffs"),
              cplx(detail::optional<double>(e, "re", 0.0, "field.coeffs"),
                   detail::optional<double>(e, "im", 0.0, "field.coeffs")));
    }
  } else if (kind == "gaussian_packet") {
    const double center = detail::optional<double>(j, "center", 4.0, "field");
    const double width = detail::optional<double>(j, "width", 2.0, "field");
    const cplx amp = read_complex(j, "amplitude", 1.0);
    const bool real = detail::optional<bool>(j, "real", true, "field");
    if (!(width > 0.0)) throw ConfigError("field: gaussian_packet width must be positive");
    for (int k = -N; k <= N; ++k) {
      if (k == 0) continue;
      const double env = std::exp(-0.5 * (k - center) * (k - center) / (width * width));
      set_psi(k, amp * env);
      if (real) set_psi(-k, std::conj(amp) * env);
    }
  } else if (kind == "random_seeded") {
    const double decay = detail::optional<double>(j, "decay", 1.0, "field");
    const double amplitude = detail::optional<double>(j, "amplitude", 1.0, "field");
    const auto offset = detail::optional<std::uint64_t>(j, "seed_offset", 0, "field");
    std::mt19937_64 rng(seed + offset);
    std::normal_distribution<double> normal;
    for (int k = -N; k <= N; ++k) {
      const double re = normal(rng);
      const double im = normal(rng);
      if (k != 0) u[k] = cplx(re, im) / std::pow(1.0 + std::abs(k), decay);
    }
    const double nrm = sobolev_norm(u, s);
    if (nrm > 0.0) u *= amplitude / nrm;
  } else {
    throw ConfigError("field: unknown kind '" + kind +
                      "' (expected zero, single_mode, modes, gaussian_packet, random_seeded)");
  }
  u[0] += read_complex(j, "mean", 0.0);
  return u;
}

/// Applies `path=value` (dotted keys into the scenario JSON).
inline void set_path(json& root, const std::string& path, const json& value) {
  json* node = &root;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  if (parts.empty()) throw ConfigError("sweep: empty parameter path");
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->is_object()) throw ConfigError("sweep: '" + path + "' does not address an object key");
    node = &(*node)[parts[i]];
    if (node->is_null()) *node = json::object();
  }
  (*node)[parts.back()] = value;
}

}  // namespace dispctl::cli
