// SPDX-License-Identifier: Apache-2.0
#include "tde/crlb.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <string>

#include "tde/errors.hpp"

namespace tde {

namespace {

void check_branch_inputs(const std::vector<FunctionalSet>& fs,
                         const std::vector<double>& gammas) {
  if (fs.empty()) throw ConfigError("crlb: need at least one branch");
  if (fs.size() != gammas.size())
    throw ConfigError("crlb: functionals/gammas length mismatch");
  for (double g : gammas)
    if (!(g > 0.0)) throw ConfigError("crlb: gamma must be > 0");
}

double moment_determinant(const FunctionalSet& f, std::size_t branch) {
  const double det = f.energy * f.f_moment - f.f_hat * f.f_hat;
  if (det <= 1e-12 * f.energy * f.f_moment)
    throw NumericalError(
        "crlb: degenerate time-moment geometry (E*F ~= Fh^2) in branch " +
        std::to_string(branch));
  return det;
}

}  // namespace

double xi_penalty(const std::vector<FunctionalSet>& fs,
                  const std::vector<double>& gammas) {
  check_branch_inputs(fs, gammas);
  double xi = 0.0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const FunctionalSet& f = fs[i];
    const double det = moment_determinant(f, i);
    const double num = f.e_hat_i * f.e_hat_i * f.f_moment +
                       f.energy * f.g_moment * f.g_moment -
                       2.0 * f.e_hat_i * f.g_moment * f.f_hat;
    xi += gammas[i] * num / det;
  }
  return xi;
}

double crlb1_closed(const std::vector<FunctionalSet>& fs,
                    const std::vector<double>& gammas) {
  check_branch_inputs(fs, gammas);
  double base = 0.0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const FunctionalSet& f = fs[i];
    base += gammas[i] * (f.deriv_energy - f.e_hat_r * f.e_hat_r / f.energy);
  }
  const double den = base - xi_penalty(fs, gammas);
  if (!(den > 0.0))
    throw NumericalError("crlb1: non-positive information denominator");
  return 1.0 / den;
}

double crlb2(const std::vector<FunctionalSet>& fs,
             const std::vector<double>& gammas) {
  check_branch_inputs(fs, gammas);
  double den = 0.0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const FunctionalSet& f = fs[i];
    const double ehat2 = f.e_hat_r * f.e_hat_r + f.e_hat_i * f.e_hat_i;
    den += gammas[i] * (f.deriv_energy - ehat2 / f.energy);
  }
  if (!(den > 0.0))
    throw NumericalError("crlb2: non-positive information denominator");
  return 1.0 / den;
}

double crlb3(const std::vector<FunctionalSet>& fs,
             const std::vector<double>& gammas) {
  check_branch_inputs(fs, gammas);
  double den = 0.0;
  for (std::size_t i = 0; i < fs.size(); ++i)
    den += gammas[i] * fs[i].deriv_energy;
  if (!(den > 0.0)) throw NumericalError("crlb3: non-positive information");
  return 1.0 / den;
}

double crlb1_via_inverse(const FisherInfo& fim) {
  const Eigen::Index n = fim.matrix.rows();
  if (n == 0 || fim.matrix.cols() != n)
    throw ConfigError("crlb1_via_inverse: empty or non-square FIM");

  // Jacobi equilibration: M = D * I * D with D = diag(I_kk^-1/2) has unit
  // diagonal, which removes the artificial ill-conditioning of the mixed
  // SI units. [I^-1]_00 = d0^2 * [M^-1]_00.
  RealVector d(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double diag = fim.matrix(i, i);
    if (!(diag > 0.0))
      throw NumericalError("crlb1_via_inverse: singular FIM (non-positive diagonal at " +
                           std::to_string(i) + ")");
    d[i] = 1.0 / std::sqrt(diag);
  }
  const Matrix scaled = d.asDiagonal() * fim.matrix * d.asDiagonal();

  const Eigen::SelfAdjointEigenSolver<Matrix> eigs(scaled,
                                                   Eigen::EigenvaluesOnly);
  const double lmin = eigs.eigenvalues().minCoeff();
  const double lmax = eigs.eigenvalues().maxCoeff();
  if (!(lmin > 0.0) || lmax / lmin > 1e12)
    throw NumericalError(
        "crlb1_via_inverse: FIM numerically singular (equilibrated condition "
        "estimate " +
        std::to_string(lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity()) +
        ")");

  const Eigen::LDLT<Matrix> ldlt(scaled);
  if (ldlt.info() != Eigen::Success)
    throw NumericalError("crlb1_via_inverse: LDLT factorization failed");
  const RealVector e0 = RealVector::Unit(n, 0);
  RealVector y = ldlt.solve(e0);
  y += ldlt.solve(e0 - scaled * y);  // one iterative-refinement step
  return d[0] * d[0] * y[0];
}

double crlb_constant_envelope(const std::vector<double>& snrs,
                              const std::vector<double>& betas) {
  if (snrs.empty() || snrs.size() != betas.size())
    throw ConfigError("crlb_constant_envelope: empty or mismatched branch lists");
  double acc = 0.0;
  for (std::size_t i = 0; i < snrs.size(); ++i) {
    if (!(snrs[i] > 0.0) || !(betas[i] > 0.0))
      throw ConfigError("crlb_constant_envelope: SNR and beta must be > 0");
    acc += snrs[i] * betas[i] * betas[i];
  }
  return 1.0 / (4.0 * M_PI * M_PI * acc);
}

bool constant_envelope_preconditions(const BranchSpec& b) {
  if (!b.modulation.is_linear()) return false;
  double mag_min = std::numeric_limits<double>::infinity();
  double mag_max = 0.0;
  for (const Complex& d : b.symbols.values) {
    const double m = std::abs(d);
    mag_min = std::min(mag_min, m);
    mag_max = std::max(mag_max, m);
  }
  if (!(mag_max > 0.0) || (mag_max - mag_min) > 1e-9 * mag_max) return false;

  const double p0 = gaussian_doublet(b.pulse, 0.0);
  const double p_end = gaussian_doublet(b.pulse, b.pulse.symbol_duration);
  const double peak = std::abs(gaussian_doublet(b.pulse, b.pulse.center));
  return std::abs(p0 - p_end) <= 1e-6 * peak;
}

CrlbReport evaluate_crlb(const std::vector<FunctionalSet>& fs,
                         const std::vector<BranchSpec>& branches) {
  if (fs.size() != branches.size())
    throw ConfigError("evaluate_crlb: functionals/branches length mismatch");
  std::vector<double> gammas(branches.size());
  std::vector<double> amps(branches.size());
  std::vector<double> noise(branches.size());
  for (std::size_t i = 0; i < branches.size(); ++i) {
    amps[i] = branches[i].channel_amp;
    noise[i] = branches[i].noise_psd;
    gammas[i] = amps[i] * amps[i] / noise[i];
  }

  CrlbReport rep;
  rep.xi = xi_penalty(fs, gammas);
  rep.crlb1 = crlb1_closed(fs, gammas);
  rep.crlb2 = crlb2(fs, gammas);
  rep.crlb3 = crlb3(fs, gammas);
  rep.crlb1_via_inverse = tde::crlb1_via_inverse(assemble_fim(fs, amps, noise));

  bool eq24 = true;
  for (const BranchSpec& b : branches)
    eq24 = eq24 && constant_envelope_preconditions(b);
  if (eq24) {
    std::vector<double> snrs(branches.size());
    std::vector<double> betas(branches.size());
    for (std::size_t i = 0; i < branches.size(); ++i) {
      // SNR_i = N_i |d_i|^2 |alpha_i|^2 E_p / sigma_i^2 with E_p from the
      // same grid-level quadrature as the functionals (E = sum |d_l|^2 E_p
      // for the slot-partitioned train, and |d_l| is constant here).
      snrs[i] = gammas[i] * fs[i].energy;
      betas[i] = fs[i].eff_bandwidth;
    }
    rep.closed_form_24 = crlb_constant_envelope(snrs, betas);
  }
  return rep;
}

}  // namespace tde
