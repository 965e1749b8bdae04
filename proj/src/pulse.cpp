// SPDX-License-Identifier: Apache-2.0
#include "tde/pulse.hpp"

#include <cmath>
#include <string>

#include "tde/errors.hpp"

namespace tde {

void PulseSpec::validate() const {
  if (!(zeta > 0.0)) throw ConfigError("pulse: zeta must be > 0");
  if (!(symbol_duration > 0.0))
    throw ConfigError("pulse: symbol_duration must be > 0");
  if (center < 0.0 || center > symbol_duration)
    throw ConfigError("pulse: center must lie in [0, symbol_duration]");
  if (!std::isfinite(amplitude))
    throw ConfigError("pulse: amplitude must be finite");
}

double gaussian_doublet(const PulseSpec& p, double t) {
  if (t < 0.0 || t > p.symbol_duration) return 0.0;
  const double u = t - p.center;
  const double q = u * u / (p.zeta * p.zeta);
  return p.amplitude * (1.0 - 4.0 * M_PI * q) * std::exp(-2.0 * M_PI * q);
}

double gaussian_doublet_derivative(const PulseSpec& p, double t) {
  if (t < 0.0 || t > p.symbol_duration) return 0.0;
  const double u = t - p.center;
  const double q = u * u / (p.zeta * p.zeta);
  return -p.amplitude * (4.0 * M_PI * u / (p.zeta * p.zeta)) *
         (3.0 - 4.0 * M_PI * q) * std::exp(-2.0 * M_PI * q);
}

double pulse_energy(const PulseSpec& p, double dt) {
  p.validate();
  if (dt <= 0.0) dt = p.zeta / 4096.0;
  const auto n = static_cast<long>(std::llround(p.symbol_duration / dt));
  if (n < 2) throw ConfigError("pulse_energy: dt too coarse for the slot");
  const double step = p.symbol_duration / static_cast<double>(n);
  double acc = 0.0;
  for (long k = 0; k < n; ++k) {
    const double v = gaussian_doublet(p, (static_cast<double>(k) + 0.5) * step);
    acc += v * v;
  }
  return acc * step;
}

PulseSpec normalized_pulse(const PulseSpec& p, double target_energy, double dt) {
  if (!(target_energy > 0.0))
    throw ConfigError("normalized_pulse: target energy must be > 0");
  const double e = pulse_energy(p, dt);
  if (!(e > 0.0)) throw NumericalError("normalized_pulse: zero pulse energy");
  PulseSpec out = p;
  out.amplitude = p.amplitude * std::sqrt(target_energy / e);
  return out;
}

}  // namespace tde
