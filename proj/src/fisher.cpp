// SPDX-License-Identifier: Apache-2.0
#include "tde/fisher.hpp"

#include <string>

#include "tde/errors.hpp"

namespace tde {

FisherInfo assemble_fim(const std::vector<FunctionalSet>& fs,
                        const std::vector<double>& amps,
                        const std::vector<double>& noise_psds) {
  const std::size_t k = fs.size();
  if (k == 0) throw ConfigError("assemble_fim: need at least one branch");
  if (amps.size() != k || noise_psds.size() != k)
    throw ConfigError("assemble_fim: per-branch vectors have inconsistent lengths");

  FisherInfo info;
  info.gammas.resize(static_cast<Eigen::Index>(k));
  const auto dim = static_cast<Eigen::Index>(3 * k + 1);
  info.matrix = Matrix::Zero(dim, dim);

  double i_tt = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double amp = amps[i];
    const double s2 = noise_psds[i];
    if (!(s2 > 0.0))
      throw ConfigError("assemble_fim: noise_psd must be > 0 (branch " +
                        std::to_string(i) + ")");
    const double gamma = amp * amp / s2;
    if (!(gamma > 0.0))
      throw ConfigError("assemble_fim: gamma must be > 0 (branch " +
                        std::to_string(i) + ")");
    info.gammas[static_cast<Eigen::Index>(i)] = gamma;

    const FunctionalSet& f = fs[i];
    const auto a_row = static_cast<Eigen::Index>(1 + i);
    const auto phi_row = static_cast<Eigen::Index>(1 + k + i);
    const auto omega_row = static_cast<Eigen::Index>(1 + 2 * k + i);

    i_tt += gamma * f.deriv_energy;
    info.matrix(0, a_row) = info.matrix(a_row, 0) = -f.e_hat_r * amp / s2;
    info.matrix(0, phi_row) = info.matrix(phi_row, 0) = -f.e_hat_i * gamma;
    info.matrix(0, omega_row) = info.matrix(omega_row, 0) = -f.g_moment * gamma;
    info.matrix(a_row, a_row) = f.energy / s2;
    info.matrix(phi_row, phi_row) = f.energy * gamma;
    info.matrix(omega_row, omega_row) = f.f_moment * gamma;
    info.matrix(phi_row, omega_row) = info.matrix(omega_row, phi_row) =
        f.f_hat * gamma;
  }
  info.matrix(0, 0) = i_tt;
  return info;
}

}  // namespace tde
