// SPDX-License-Identifier: Apache-2.0
#include "tde/functionals.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "tde/errors.hpp"

namespace tde {

double FunctionalSet::e_hat() const { return std::hypot(e_hat_r, e_hat_i); }

void FunctionalSet::validate() const {
  if (!(energy > 0.0)) throw NumericalError("functionals: signal energy must be > 0");
  if (!(deriv_energy > 0.0))
    throw NumericalError("functionals: derivative energy must be > 0");
  if (!(f_moment > 0.0)) throw NumericalError("functionals: t^2 moment must be > 0");
  const double moment_det = energy * f_moment - f_hat * f_hat;
  if (moment_det < -1e-12 * energy * f_moment)
    throw NumericalError("functionals: Cauchy-Schwarz violation, E*F < Fh^2");
  const double ehat2 = e_hat_r * e_hat_r + e_hat_i * e_hat_i;
  if (ehat2 > energy * deriv_energy * (1.0 + 1e-12))
    throw NumericalError("functionals: Cauchy-Schwarz violation, Ehat^2 > E*Et");
}

namespace {

/// RMS bandwidth from a zero-padded DFT of the samples. Pads to the next
/// power of two >= 8x the length. Spectral moments are restricted to
/// |f| <= min(4 * f_q, Nyquist), with f_q the (1 - 1e-4) energy quantile
/// of |S|^2: the signal's genuine spectrum lies far inside that band,
/// while the truncation-edge floor (|S|^2 ~ 1/f^2) is left out.
double rms_bandwidth(const ComplexVector& values, double dt) {
  const auto n = static_cast<std::size_t>(values.size());
  std::size_t padded = 1;
  while (padded < 8 * n) padded <<= 1;

  std::vector<Complex> in(padded, Complex(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k) in[k] = values[static_cast<Eigen::Index>(k)];
  std::vector<Complex> out(padded);
  Eigen::FFT<double> fft;
  fft.fwd(out, in);

  // |S|^2 indexed by |f| bins: bin j covers +f_j and -f_j.
  const double df = 1.0 / (static_cast<double>(padded) * dt);
  const std::size_t half = padded / 2;
  std::vector<double> power(half + 1, 0.0);
  power[0] = std::norm(out[0]);
  power[half] = std::norm(out[half]);
  for (std::size_t j = 1; j < half; ++j)
    power[j] = std::norm(out[j]) + std::norm(out[padded - j]);

  const double total = std::accumulate(power.begin(), power.end(), 0.0);
  if (!(total > 0.0)) throw NumericalError("eff_bandwidth: empty spectrum");

  const double q_target = (1.0 - 1e-4) * total;
  double cum = 0.0;
  std::size_t jq = half;
  for (std::size_t j = 0; j <= half; ++j) {
    cum += power[j];
    if (cum >= q_target) {
      jq = j;
      break;
    }
  }
  const std::size_t jcut = std::min(half, 4 * jq);

  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j <= jcut; ++j) {
    const double f = static_cast<double>(j) * df;
    den += power[j];
    num += f * f * power[j];
  }
  return std::sqrt(num / den);
}

FunctionalSet functionals_no_validate(const SampledSignal& sig) {
  if (sig.values.size() == 0) throw NumericalError("functionals: empty signal");
  if (!sig.has_derivative())
    throw NumericalError("functionals: derivative_values missing");

  const auto n = sig.values.size();
  const double dt = sig.dt;
  double e = 0.0, et = 0.0, ehr = 0.0, ehi = 0.0, f2 = 0.0, f1 = 0.0, g = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex s = sig.values[k];
    const Complex d = sig.derivative_values[k];
    const double t = sig.time(k);
    const double mag2 = std::norm(s);
    const Complex prod = d * std::conj(s);
    e += mag2;
    et += std::norm(d);
    ehr += prod.real();
    ehi += prod.imag();
    f1 += t * mag2;
    f2 += t * t * mag2;
    g += t * prod.imag();
  }
  FunctionalSet out;
  out.energy = e * dt;
  out.deriv_energy = et * dt;
  out.e_hat_r = ehr * dt;
  out.e_hat_i = ehi * dt;
  out.f_hat = f1 * dt;
  out.f_moment = f2 * dt;
  out.g_moment = g * dt;
  out.eff_bandwidth = rms_bandwidth(sig.values, dt);
  return out;
}

}  // namespace

FunctionalSet compute_functionals(const SampledSignal& sig) {
  FunctionalSet out = functionals_no_validate(sig);
  out.validate();
  return out;
}

const std::array<const char*, ConvergenceReport::n_fields>&
ConvergenceReport::field_names() {
  static const std::array<const char*, n_fields> names = {
      "energy",  "deriv_energy", "e_hat_r",  "e_hat_i",
      "f_moment", "f_hat",       "g_moment", "eff_bandwidth"};
  return names;
}

bool ConvergenceReport::any_flagged() const {
  return std::any_of(flagged.begin(), flagged.end(), [](bool f) { return f; });
}

ConvergenceReport convergence_check(const BranchSpec& b, double tau, double dt,
                                    double tolerance) {
  ConvergenceReport rep;
  rep.dt = dt;
  rep.tolerance = tolerance;
  rep.coarse = compute_functionals(sample_branch(b, tau, dt));
  rep.fine = compute_functionals(sample_branch(b, tau, 0.5 * dt));

  const FunctionalSet& a = rep.coarse;
  const double window = b.duration();
  const double mixed = std::sqrt(a.energy * a.deriv_energy);
  // Per-field magnitude scales; zero-valued fields (e_hat_i, g_moment for
  // linear modulations) compare against these rather than themselves.
  const std::array<double, ConvergenceReport::n_fields> scale = {
      a.energy,          a.deriv_energy, mixed, mixed,
      a.energy * window * window, a.energy * window, mixed * window,
      a.eff_bandwidth};
  const std::array<double, ConvergenceReport::n_fields> coarse_v = {
      a.energy, a.deriv_energy, a.e_hat_r, a.e_hat_i,
      a.f_moment, a.f_hat, a.g_moment, a.eff_bandwidth};
  const std::array<double, ConvergenceReport::n_fields> fine_v = {
      rep.fine.energy, rep.fine.deriv_energy, rep.fine.e_hat_r, rep.fine.e_hat_i,
      rep.fine.f_moment, rep.fine.f_hat, rep.fine.g_moment, rep.fine.eff_bandwidth};
  for (int i = 0; i < ConvergenceReport::n_fields; ++i) {
    rep.delta[i] = std::abs(coarse_v[i] - fine_v[i]) / scale[i];
    rep.flagged[i] = rep.delta[i] > tolerance;
  }
  return rep;
}

}  // namespace tde
