// SPDX-License-Identifier: Apache-2.0
#include "tde/signal.hpp"

#include <cmath>
#include <string>

#include "tde/errors.hpp"

namespace tde {

void BranchSpec::validate() const {
  pulse.validate();
  modulation.validate();
  if (n_symbols < 1) throw ConfigError("branch: n_symbols must be >= 1");
  if (!(channel_amp >= 0.0)) throw ConfigError("branch: channel_amp must be >= 0");
  if (!(noise_psd > 0.0)) throw ConfigError("branch: noise_psd must be > 0");
  if (static_cast<int>(symbols.values.size()) != n_symbols)
    throw ConfigError("branch: symbol sequence length != n_symbols");
  if (modulation.kind == ModulationKind::FSK &&
      static_cast<int>(symbols.tones.size()) != n_symbols)
    throw ConfigError("branch: FSK tone sequence length != n_symbols");
}

BranchSpec make_branch(const PulseSpec& pulse, const ModulationSpec& modulation,
                       int n_symbols, double channel_amp, double channel_phase,
                       double cfo, double noise_psd, std::uint64_t seed) {
  BranchSpec b;
  b.pulse = pulse;
  b.modulation = modulation;
  b.n_symbols = n_symbols;
  b.channel_amp = channel_amp;
  b.channel_phase = channel_phase;
  b.cfo = cfo;
  b.noise_psd = noise_psd;
  b.symbols = make_symbols(modulation, n_symbols, seed);
  b.validate();
  return b;
}

/// Samples per symbol slot; throws unless dt divides T_sym.
static long samples_per_symbol(const PulseSpec& p, double dt) {
  if (!(dt > 0.0)) throw ConfigError("sample_branch: dt must be > 0");
  const long spp = std::llround(p.symbol_duration / dt);
  if (spp < 4 || std::abs(spp * dt - p.symbol_duration) > 1e-9 * p.symbol_duration)
    throw ConfigError("sample_branch: dt must divide symbol_duration (>= 4 samples per symbol)");
  return spp;
}

SampledSignal sample_branch(const BranchSpec& b, double tau, double dt,
                            int window_symbols) {
  b.validate();
  if (window_symbols <= 0) window_symbols = b.n_symbols;
  if (window_symbols < b.n_symbols)
    throw ConfigError("sample_branch: window shorter than the pulse train");
  const long spp = samples_per_symbol(b.pulse, dt);
  const double t_sym = b.pulse.symbol_duration;
  const double window = window_symbols * t_sym;
  const double train = b.n_symbols * t_sym;
  const double slack = 1e-9 * t_sym;
  if (tau < -slack || tau + train > window + slack)
    throw ConfigError("sample_branch: tau pushes the pulse train outside the observation window");

  const long n = window_symbols * spp;
  SampledSignal sig;
  sig.t0 = 0.5 * dt;
  sig.dt = dt;
  sig.values.resize(n);
  sig.derivative_values.resize(n);

  const bool fsk = b.modulation.kind == ModulationKind::FSK;
  for (long k = 0; k < n; ++k) {
    const double x = sig.time(k) - tau;  // time within the pulse train
    Complex v(0.0, 0.0), d(0.0, 0.0);
    if (x >= 0.0 && x < train) {
      long l = static_cast<long>(x / t_sym);
      if (l >= b.n_symbols) l = b.n_symbols - 1;
      const double u = x - static_cast<double>(l) * t_sym;
      const double p = gaussian_doublet(b.pulse, u);
      const double pd = gaussian_doublet_derivative(b.pulse, u);
      if (fsk) {
        const double w = 2.0 * M_PI * b.symbols.tones[static_cast<std::size_t>(l)] *
                         b.modulation.fsk_shift;
        const Complex phase(std::cos(w * u), std::sin(w * u));
        const Complex marker = b.symbols.values[static_cast<std::size_t>(l)];
        v = marker * phase * p;
        d = marker * phase * Complex(pd, w * p);
      } else {
        const Complex sym = b.symbols.values[static_cast<std::size_t>(l)];
        v = sym * p;
        d = sym * pd;
      }
    }
    sig.values[k] = v;
    sig.derivative_values[k] = d;
  }
  return sig;
}

}  // namespace tde
