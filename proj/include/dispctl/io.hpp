#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dispctl/control_shape.hpp"
#include "dispctl/errors.hpp"
#include "dispctl/spectrum.hpp"
#include "dispctl/symbols.hpp"

namespace dispctl {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

template <typename T>
T require(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing required key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": key '" + key + "' has the wrong type");
  }
}

template <typename T>
T optional(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + ": key '" + key + "' has the wrong type");
  }
}

}  // namespace detail

// ---- symbols --------------------------------------------------------------

inline json symbol_to_json(const DispersionSymbol& sym) {
  json params = json::object();
  switch (sym.family()) {
    case SymbolFamily::Benjamin:
    case SymbolFamily::DGBO: params["alpha"] = sym.alpha(); break;
    case SymbolFamily::FourthOrderNLS: params["mu"] = sym.mu(); break;
    case SymbolFamily::HigherOrderEven:
    case SymbolFamily::HigherOrderOdd: params["alpha_list"] = sym.alpha_list(); break;
    case SymbolFamily::CustomTable:
      params["k_min"] = sym.table_min();
      params["values"] = sym.table();
      break;
    default: break;
  }
  return {{"family", sym.name()},
          {"params", params},
          {"order", sym.order()},
          {"parity", to_string(sym.parity())}};
}

inline DispersionSymbol symbol_from_json(const json& j) {
  const std::string where = "symbol";
  if (!j.is_object()) throw ConfigError("symbol: expected an object");
  const auto family = family_from_string(detail::require<std::string>(j, "family", where));
  const json params = j.contains("params") ? j.at("params") : json::object();
  const std::string pw = "symbol.params";
  switch (family) {
    case SymbolFamily::KdV: return DispersionSymbol::kdv();
    case SymbolFamily::Schrodinger: return DispersionSymbol::schrodinger();
    case SymbolFamily::BenjaminOno: return DispersionSymbol::benjamin_ono();
    case SymbolFamily::Smith: return DispersionSymbol::smith();
    case SymbolFamily::Benjamin:
      return DispersionSymbol::benjamin(detail::require<double>(params, "alpha", pw));
    case SymbolFamily::DGBO: return DispersionSymbol::dgbo(detail::require<double>(params, "alpha", pw));
    case SymbolFamily::FourthOrderNLS:
      return DispersionSymbol::fourth_order_nls(detail::require<double>(params, "mu", pw));
    case SymbolFamily::HigherOrderEven:
      return DispersionSymbol::higher_order_even(
          detail::require<std::vector<double>>(params, "alpha_list", pw));
    case SymbolFamily::HigherOrderOdd:
      return DispersionSymbol::higher_order_odd(
          detail::require<std::vector<double>>(params, "alpha_list", pw));
    case SymbolFamily::CustomTable:
      return DispersionSymbol::custom_table(
          detail::require<int>(params, "k_min", pw),
          detail::require<std::vector<double>>(params, "values", pw),
          detail::require<double>(j, "order", where),
          parity_from_string(detail::require<std::string>(j, "parity", where)));
  }
  throw ConfigError("symbol: unsupported family");
}

// ---- control shape --------------------------------------------------------

inline json shape_to_json(const ControlShape& shape) {
  std::vector<double> re, im;
  re.reserve(static_cast<std::size_t>(shape.ghat.size()));
  im.reserve(static_cast<std::size_t>(shape.ghat.size()));
  for (Eigen::Index i = 0; i < shape.ghat.size(); ++i) {
    re.push_back(shape.ghat(i).real());
    im.push_back(shape.ghat(i).imag());
  }
  return {{"schema", kSchemaVersion}, {"center", shape.center}, {"half_width", shape.half_width},
          {"N", shape.N},           {"M", shape.M},           {"ghat_re", re},
          {"ghat_im", im}};
}

inline ControlShape shape_from_json(const json& j) {
  const std::string where = "shape";
  const auto re = detail::require<std::vector<double>>(j, "ghat_re", where);
  const auto im = detail::require<std::vector<double>>(j, "ghat_im", where);
  if (re.size() != im.size()) throw ConfigError("shape: ghat_re and ghat_im lengths differ");
  Eigen::VectorXcd ghat(static_cast<Eigen::Index>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i) ghat(static_cast<Eigen::Index>(i)) = cplx(re[i], im[i]);
  return shape_from_coefficients(detail::require<double>(j, "center", where),
                                 detail::require<double>(j, "half_width", where),
                                 detail::require<int>(j, "N", where),
                                 detail::require<int>(j, "M", where), ghat);
}

// ---- spectrum -------------------------------------------------------------

inline json analysis_to_json(const SpectrumAnalysis& a) {
  json clusters = json::array();
  for (const auto& c : a.clusters) {
    clusters.push_back({{"members", c.members}, {"representative", c.representative}, {"lambda", c.lambda}});
  }
  json profile = json::array();
  for (const auto& e : a.gamma_prime_profile) profile.push_back({{"radius", e.radius}, {"gap", e.gap}});
  return {{"N", a.N},
          {"tol", a.tol},
          {"criterion", to_string(a.criterion)},
          {"n0", a.n0},
          {"k1_star", a.k1_star},
          {"gamma", a.gamma},
          {"profile", profile},
          {"clusters", clusters},
          {"lambdas", a.lambdas}};
}

}  // namespace dispctl
