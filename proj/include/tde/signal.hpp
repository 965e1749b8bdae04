// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "tde/modulation.hpp"
#include "tde/pulse.hpp"
#include "tde/types.hpp"

namespace tde {

/// Uniformly sampled complex baseband waveform. Sample k sits at
/// t0 + k*dt. derivative_values, when present, holds the analytic time
/// derivative on the same grid.
struct SampledSignal {
  double t0 = 0.0;
  double dt = 0.0;
  ComplexVector values;
  ComplexVector derivative_values;

  bool has_derivative() const {
    return derivative_values.size() == values.size() && values.size() > 0;
  }
  double time(Eigen::Index k) const { return t0 + static_cast<double>(k) * dt; }
  /// Grid span end, t0 + n*dt (the last sample sits half a step before
  /// it on the midpoint grids produced by sample_branch).
  double span() const { return t0 + static_cast<double>(values.size()) * dt; }
};

/// One receiver branch: pulse, training sequence, channel and noise.
/// The channel coefficient is alpha = channel_amp * exp(j*channel_phase);
/// cfo is the residual carrier offset omega in rad/s. noise_psd holds
/// sigma^2, the per-component two-sided noise spectral density.
struct BranchSpec {
  PulseSpec pulse;
  ModulationSpec modulation;
  int n_symbols = 1;
  double channel_amp = 1.0;
  double channel_phase = 0.0;
  double cfo = 0.0;
  double noise_psd = 1.0;
  SymbolSequence symbols;

  void validate() const;
  /// Observation interval T = n_symbols * T_sym.
  double duration() const { return n_symbols * pulse.symbol_duration; }
};

/// Convenience builder: validates fields and draws the training symbols.
BranchSpec make_branch(const PulseSpec& pulse, const ModulationSpec& modulation,
                       int n_symbols, double channel_amp, double channel_phase,
                       double cfo, double noise_psd, std::uint64_t seed);

/// Samples the transmitted baseband signal s(t - tau) and its analytic
/// derivative on a midpoint grid covering [0, W] with W =
/// window_symbols * T_sym (window_symbols <= 0 selects n_symbols).
///
/// Samples sit at (k + 1/2)*dt, so slot boundaries of the truncated
/// pulse train never coincide with grid points. dt must divide T_sym.
/// Rejects tau unless the whole pulse train [tau, tau + N*T_sym] lies
/// inside the window.
SampledSignal sample_branch(const BranchSpec& b, double tau, double dt,
                            int window_symbols = 0);

}  // namespace tde
