// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "tde/fisher.hpp"
#include "tde/functionals.hpp"
#include "tde/types.hpp"

namespace tde {

/// CFO-coupling penalty: the amount by which unknown carrier offsets
/// inflate the delay information beyond the unknown-channel case,
///
///   xi = sum_i gamma_i (Ei_hat_i^2 F_i + E_i G_i^2 - 2 Ei_hat_i G_i Fh_i)
///                      / (E_i F_i - Fh_i^2)        [units 1/s^2]
///
/// Nonnegative for valid functionals; exactly zero for linear
/// modulations (where e_hat_i = g_moment = 0).
double xi_penalty(const std::vector<FunctionalSet>& fs,
                  const std::vector<double>& gammas);

/// Delay CRLB with unknown channel coefficients and unknown CFOs:
///   1 / ( sum_i gamma_i (Et_i - EhR_i^2 / E_i) - xi )       [s^2]
/// Equals the (0,0) element of the inverse FIM; see crlb1_via_inverse
/// for the generic-algebra route. Throws NumericalError on degenerate
/// time-moment geometry (E*F - Fh^2 too small).
double crlb1_closed(const std::vector<FunctionalSet>& fs,
                    const std::vector<double>& gammas);

/// Delay CRLB with unknown channel coefficients, known CFOs:
///   1 / sum_i gamma_i (Et_i - (EhR_i^2 + EhI_i^2) / E_i)    [s^2]
double crlb2(const std::vector<FunctionalSet>& fs,
             const std::vector<double>& gammas);

/// Delay CRLB with everything but the delay known:
///   1 / sum_i gamma_i Et_i                                  [s^2]
double crlb3(const std::vector<FunctionalSet>& fs,
             const std::vector<double>& gammas);

/// (0,0) element of the FIM inverse via a pivoted symmetric
/// factorization (Jacobi-equilibrated LDLT with one refinement step; the
/// stored matrix is untouched). Throws NumericalError when the
/// equilibrated condition estimate exceeds 1e12 or a diagonal entry is
/// not positive.
double crlb1_via_inverse(const FisherInfo& fim);

/// Closed form for constant-envelope linear modulation with matching
/// pulse boundary values: 1 / (4 pi^2 sum_i SNR_i beta_i^2)   [s^2]
double crlb_constant_envelope(const std::vector<double>& snrs,
                              const std::vector<double>& betas);

/// All bounds for one scenario point. closed_form_24 is only present
/// when its preconditions were machine-verified on the actual signals.
struct CrlbReport {
  double crlb1 = 0.0;
  double crlb2 = 0.0;
  double crlb3 = 0.0;
  double crlb1_via_inverse = 0.0;
  double xi = 0.0;
  std::optional<double> closed_form_24;
};

/// Machine check of the constant-envelope closed-form preconditions on
/// concrete inputs: linear modulation, all symbol magnitudes equal
/// (1e-9 relative), and pulse boundary values matching within
/// 1e-6 of the peak.
bool constant_envelope_preconditions(const BranchSpec& b);

/// Computes every bound plus the matrix-inverse cross-check for one set
/// of branches sharing per-branch functionals.
CrlbReport evaluate_crlb(const std::vector<FunctionalSet>& fs,
                         const std::vector<BranchSpec>& branches);

}  // namespace tde
