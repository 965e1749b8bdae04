// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <string>

#include "tde/signal.hpp"
#include "tde/types.hpp"

namespace tde {

/// Per-branch scalar integrals of the sampled signal s and its
/// derivative s', taken over the observation window:
///
///   energy        E  = int |s|^2 dt
///   deriv_energy  Et = int |s'|^2 dt
///   e_hat_r       int Re{s' conj(s)} dt
///   e_hat_i       int Im{s' conj(s)} dt
///   f_moment      F  = int t^2 |s|^2 dt
///   f_hat         Fh = int t |s|^2 dt
///   g_moment      G  = int t Im{s' conj(s)} dt
///   eff_bandwidth beta, RMS bandwidth: beta^2 = int f^2|S|^2 / int |S|^2
///
/// Units follow the raw SI values of the signal (seconds, energy).
struct FunctionalSet {
  double energy = 0.0;
  double deriv_energy = 0.0;
  double e_hat_r = 0.0;
  double e_hat_i = 0.0;
  double f_moment = 0.0;
  double f_hat = 0.0;
  double g_moment = 0.0;
  double eff_bandwidth = 0.0;

  /// |int s' conj(s) dt| = sqrt(e_hat_r^2 + e_hat_i^2).
  double e_hat() const;
  /// Checks positivity and the Cauchy-Schwarz relations; throws
  /// NumericalError on violation.
  void validate() const;
};

/// Computes all functionals by midpoint quadrature on the signal's grid
/// plus a zero-padded DFT for the effective bandwidth. The spectral
/// moments integrate |f| <= min(4 * f_99.99%, Nyquist), which excludes
/// the flat spectral floor contributed by the pulse truncation edges
/// while retaining at least 99.99% of the signal's spectrum.
FunctionalSet compute_functionals(const SampledSignal& sig);

/// Field-by-field self-refinement report: functionals at dt vs dt/2.
struct ConvergenceReport {
  static constexpr int n_fields = 8;
  static const std::array<const char*, n_fields>& field_names();

  double dt = 0.0;
  FunctionalSet coarse;
  FunctionalSet fine;
  std::array<double, n_fields> delta{};  ///< scaled relative deltas
  std::array<bool, n_fields> flagged{};  ///< delta > tolerance
  double tolerance = 1e-6;

  bool any_flagged() const;
};

/// Recomputes the branch functionals at dt and dt/2 and reports per-field
/// relative deltas, flagging any above the tolerance. Deltas are scaled
/// by a per-field magnitude built from E, Et and the window length, so
/// fields that are exactly zero (e.g. e_hat_i for linear modulations)
/// compare against the natural scale instead of 0/0.
ConvergenceReport convergence_check(const BranchSpec& b, double tau, double dt,
                                    double tolerance = 1e-6);

}  // namespace tde
