#pragma once

#include "dispctl/fourier.hpp"
#include "dispctl/symbols.hpp"

namespace dispctl {

/// Free evolution U(t): û(k) ↦ e^{iλ_k t} û(k).
inline FourierField propagate(FourierField u, const DispersionSymbol& sym, double t) {
  const int N = u.truncation();
  for (int k = -N; k <= N; ++k) u[k] *= std::polar(1.0, eigenvalue(sym, k) * t);
  return u;
}

}  // namespace dispctl
