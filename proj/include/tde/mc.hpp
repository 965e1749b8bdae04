// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "tde/rng.hpp"
#include "tde/signal.hpp"
#include "tde/types.hpp"

namespace tde {

/// Receiver-side knowledge about the nuisance parameters. Each level
/// matches one bound: Full -> CRLB3, CfoKnown -> CRLB2, None -> CRLB1.
enum class Knowledge { Full, CfoKnown, None };

const char* to_string(Knowledge level);

struct TrialConfig {
  std::vector<BranchSpec> branches;
  double tau_true = 0.0;
  Knowledge level = Knowledge::Full;
  int n_trials = 100;
  std::uint64_t seed = 1;
  double dt = 0.025e-9;
  int window_symbols = 0;       ///< <=0: per-branch n_symbols
  double tau_range = 2e-9;      ///< search grid spans tau_true +- tau_range
  double tau_step = 0.0;        ///< coarse grid step; <=0 selects dt
  double omega_max = 0.0;       ///< |omega| search bound (rad/s), None level
  double omega_step = 0.0;      ///< <=0 selects 0.3 / T
  double matching_crlb = 0.0;   ///< optional, for the report's rmse ratio

  void validate() const;
};

struct EstimateResult {
  double tau_hat = 0.0;
  bool boundary_hit = false;
};

struct TrialReport {
  double rmse = 0.0;
  double bias = 0.0;
  double ratio = 0.0;  ///< rmse / sqrt(matching_crlb), 0 when no bound given
  std::vector<double> estimates;
  int boundary_hits = 0;

  /// Percentile bootstrap interval for the rmse over the trial set.
  double rmse_ci_low = 0.0;
  double rmse_ci_high = 0.0;
};

/// Received waveform per Eq-style channel model: alpha e^{-j omega t}
/// s(t - tau) plus white complex Gaussian noise whose per-sample
/// per-component variance is sigma^2 / dt (the discretization of the
/// two-sided component spectral density sigma^2).
SampledSignal synthesize_received(const BranchSpec& b, double tau, double dt,
                                  Rng& rng, int window_symbols = 0);

/// Maximum-likelihood delay estimate on a coarse lag grid with 3-point
/// parabolic refinement. Per level:
///   Full:     argmax sum_i Re{conj(alpha_i) C_i(tau)} / sigma_i^2
///   CfoKnown: argmax sum_i |C_i(tau)|^2 / (sigma_i^2 E_i)
///   None:     as CfoKnown with each branch term maximized over the
///             omega grid,
/// where C_i(tau) = int r_i(t) e^{+j omega t} conj(s_i(t - tau)) dt.
EstimateResult ml_estimate(const std::vector<SampledSignal>& received,
                           const TrialConfig& cfg);

/// Runs independent trials (parallelized; per-trial derived seeds keep
/// the result deterministic) and aggregates rmse/bias plus a bootstrap
/// interval. Throws BoundaryHitError when more than 1% of trials peak on
/// the search boundary.
TrialReport run_trials(const TrialConfig& cfg);

}  // namespace tde
