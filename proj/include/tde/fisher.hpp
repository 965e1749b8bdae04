// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "tde/functionals.hpp"
#include "tde/types.hpp"

namespace tde {

/// Fisher information for the unknown parameter vector
/// [tau, a_1..a_K, phi_1..phi_K, omega_1..omega_K] (dim 3K+1).
///
/// The matrix stores raw SI values; blocks carry mixed units
/// (tau-tau: 1/s^2, omega-omega: s^2, phi-omega: s, the rest unitless or
/// 1/s). gammas holds the per-branch weights |alpha_i|^2 / sigma_i^2.
struct FisherInfo {
  Matrix matrix;
  RealVector gammas;

  int branches() const { return static_cast<int>(gammas.size()); }
  Eigen::Index dim() const { return matrix.rows(); }
};

/// Assembles the FIM from per-branch functionals, channel amplitudes and
/// noise spectral densities. The a-phi and a-omega cross blocks are
/// structurally zero. Throws on non-positive weights.
FisherInfo assemble_fim(const std::vector<FunctionalSet>& fs,
                        const std::vector<double>& amps,
                        const std::vector<double>& noise_psds);

}  // namespace tde
