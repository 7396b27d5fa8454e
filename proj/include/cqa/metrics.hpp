#pragma once

#include <cmath>

#include "cqa/hilbert.hpp"

namespace cqa {

// <psi_f| H_p |psi_f> - E_0
inline double residual_energy(std::span<const Complex> psi_f,
                              const ProblemDiagonal& diag) {
  if (psi_f.size() != diag.dim())
    throw DimensionError("residual_energy: state length mismatch");
  double e = 0;
  for (std::size_t b = 0; b < psi_f.size(); ++b)
    e += diag.energies[b] * std::norm(psi_f[b]);
  return e - static_cast<double>(diag.ground_energy);
}

// Total weight on basis states whose diagonal energy equals E_0 exactly
// (all entries are integers, so the comparison is exact).
inline double success_probability(std::span<const Complex> psi_f,
                                  const ProblemDiagonal& diag) {
  if (psi_f.size() != diag.dim())
    throw DimensionError("success_probability: state length mismatch");
  double p = 0;
  for (std::size_t b = 0; b < psi_f.size(); ++b)
    if (diag.energies[b] == diag.ground_energy) p += std::norm(psi_f[b]);
  return p;
}

}  // namespace cqa
