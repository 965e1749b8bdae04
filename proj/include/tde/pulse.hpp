// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tde/types.hpp"

namespace tde {

/// Gaussian doublet pulse, hard-truncated to one symbol slot.
///
/// p(t) = A (1 - 4 pi (t-t_c)^2 / zeta^2) exp(-2 pi (t-t_c)^2 / zeta^2)
/// for t in [0, T_sym], exactly zero outside. With center = T_sym/2 the
/// truncated pulse is symmetric, so p(0) = p(T_sym).
struct PulseSpec {
  double amplitude = 1.0;         ///< A, amplitude scale
  double zeta = 8e-9;             ///< zeta, width parameter (s)
  double symbol_duration = 20e-9; ///< T_sym (s); also the truncation window
  double center = 10e-9;          ///< t_c, doublet peak offset in [0, T_sym] (s)

  void validate() const;
};

/// Pulse value at time t (seconds). Total on valid specs; zero outside
/// the closed interval [0, T_sym].
double gaussian_doublet(const PulseSpec& p, double t);

/// Analytic derivative dp/dt; zero outside [0, T_sym] like the pulse.
double gaussian_doublet_derivative(const PulseSpec& p, double t);

/// Pulse energy over [0, T_sym] by midpoint quadrature at step dt.
/// dt <= 0 selects the reference step zeta/4096.
double pulse_energy(const PulseSpec& p, double dt = 0.0);

/// Copy of p with amplitude rescaled so pulse_energy() == target_energy.
PulseSpec normalized_pulse(const PulseSpec& p, double target_energy = 1.0,
                           double dt = 0.0);

}  // namespace tde
