// SPDX-License-Identifier: Apache-2.0
#include "tde/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tde/errors.hpp"
#include "tde/parallel.hpp"

namespace tde {

const char* to_string(Knowledge level) {
  switch (level) {
    case Knowledge::Full: return "FULL";
    case Knowledge::CfoKnown: return "CFO_KNOWN";
    case Knowledge::None: return "NONE";
  }
  return "?";
}

void TrialConfig::validate() const {
  if (branches.empty()) throw ConfigError("mc: need at least one branch");
  for (const auto& b : branches) b.validate();
  if (n_trials < 1) throw ConfigError("mc: n_trials must be >= 1");
  if (!(dt > 0.0)) throw ConfigError("mc: dt must be > 0");
  if (!(tau_range > 0.0)) throw ConfigError("mc: tau_range must be > 0");
  const double step = tau_step > 0.0 ? tau_step : dt;
  if (tau_range < step) throw ConfigError("mc: tau search grid is empty");
  if (level == Knowledge::None && !(omega_max > 0.0))
    throw ConfigError("mc: None level requires omega_max > 0");
}

SampledSignal synthesize_received(const BranchSpec& b, double tau, double dt,
                                  Rng& rng, int window_symbols) {
  SampledSignal sig = sample_branch(b, tau, dt, window_symbols);
  const Complex alpha = std::polar(b.channel_amp, b.channel_phase);
  const double noise_sigma = std::sqrt(b.noise_psd / dt);
  for (Eigen::Index k = 0; k < sig.values.size(); ++k) {
    const double wt = b.cfo * sig.time(k);
    const Complex rot(std::cos(wt), -std::sin(wt));  // e^{-j omega t}
    sig.values[k] = alpha * rot * sig.values[k] + rng.complex_normal(noise_sigma);
  }
  sig.derivative_values.resize(0);  // received data carries no derivative
  return sig;
}

namespace {

/// corr[j] = dt * sum_k q[k] conj(s0[k - (m_lo + j)]) over the valid
/// overlap, for absolute lags m_lo .. m_hi.
void correlate(const ComplexVector& q, const ComplexVector& s0, double dt,
               long m_lo, long m_hi, std::vector<Complex>& corr) {
  const auto n = static_cast<long>(q.size());
  const auto ns = static_cast<long>(s0.size());
  corr.assign(static_cast<std::size_t>(m_hi - m_lo + 1), Complex(0, 0));
  for (long m = m_lo; m <= m_hi; ++m) {
    const long k_lo = std::max<long>(0, m);
    const long k_hi = std::min<long>(n, ns + m);
    Complex acc(0.0, 0.0);
    for (long k = k_lo; k < k_hi; ++k)
      acc += q[k] * std::conj(s0[k - m]);
    corr[static_cast<std::size_t>(m - m_lo)] = acc * dt;
  }
}

/// Index of the metric maximum plus one parabolic refinement step.
EstimateResult refine_peak(const std::vector<double>& metric, double grid_start,
                           double step) {
  const auto n = metric.size();
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (metric[i] > metric[best]) best = i;

  EstimateResult out;
  out.boundary_hit = (best == 0 || best + 1 == n);
  double offset = 0.0;
  if (!out.boundary_hit) {
    const double ym = metric[best - 1];
    const double y0 = metric[best];
    const double yp = metric[best + 1];
    const double denom = ym - 2.0 * y0 + yp;
    if (denom < 0.0) offset = std::clamp(0.5 * (ym - yp) / denom, -0.5, 0.5);
  }
  out.tau_hat = grid_start + (static_cast<double>(best) + offset) * step;
  return out;
}

}  // namespace

EstimateResult ml_estimate(const std::vector<SampledSignal>& received,
                           const TrialConfig& cfg) {
  cfg.validate();
  if (received.size() != cfg.branches.size())
    throw ConfigError("ml_estimate: received/branches length mismatch");

  const double dt = cfg.dt;
  const double step = cfg.tau_step > 0.0 ? cfg.tau_step : dt;
  // Candidate delays are integer sample shifts of the tau = 0 template:
  // tau_m = m * dt for m in [m0 - span, m0 + span], centered on the
  // nearest on-grid delay to tau_true.
  const int stride = std::max(1, static_cast<int>(std::llround(step / dt)));
  const int half = static_cast<int>(std::llround(cfg.tau_range / dt)) / stride;
  const int n_lags = 2 * half + 1;
  if (n_lags < 3) throw ConfigError("ml_estimate: tau search grid too small");
  const long m0 = std::llround(cfg.tau_true / dt);
  const long m_lo = m0 - static_cast<long>(half) * stride;
  const long m_hi = m0 + static_cast<long>(half) * stride;

  const std::size_t n_branches = cfg.branches.size();
  std::vector<double> metric(static_cast<std::size_t>(n_lags), 0.0);
  std::vector<Complex> corr;
  ComplexVector q;

  for (std::size_t i = 0; i < n_branches; ++i) {
    const BranchSpec& b = cfg.branches[i];
    const SampledSignal& r = received[i];
    SampledSignal t0 = sample_branch(b, 0.0, dt, cfg.window_symbols);
    const double energy = dt * t0.values.squaredNorm();
    const ComplexVector& s0 = t0.values;
    if (r.values.size() != s0.size() || r.dt != dt)
      throw ConfigError("ml_estimate: received grid does not match the template grid");

    auto derotate = [&](double omega) {
      q.resize(r.values.size());
      for (Eigen::Index k = 0; k < r.values.size(); ++k) {
        const double wt = omega * r.time(k);
        q[k] = r.values[k] * Complex(std::cos(wt), std::sin(wt));  // e^{+j w t}
      }
    };
    auto lag_of = [&](int j) {
      return static_cast<std::size_t>(static_cast<long>(j - half) * stride + m0 - m_lo);
    };

    if (cfg.level == Knowledge::None) {
      const double t_obs = static_cast<double>(r.values.size()) * dt;
      const double w_step = cfg.omega_step > 0.0 ? cfg.omega_step : 0.3 / t_obs;
      const int n_w = static_cast<int>(std::floor(cfg.omega_max / w_step));
      std::vector<double> best_lag(static_cast<std::size_t>(n_lags),
                                   -std::numeric_limits<double>::infinity());
      for (int wi = -n_w; wi <= n_w; ++wi) {
        derotate(static_cast<double>(wi) * w_step);
        correlate(q, s0, dt, m_lo, m_hi, corr);
        for (int j = 0; j < n_lags; ++j) {
          const double v = std::norm(corr[lag_of(j)]);
          auto& slot = best_lag[static_cast<std::size_t>(j)];
          slot = std::max(slot, v);
        }
      }
      const double scale = 1.0 / (b.noise_psd * energy);
      for (int j = 0; j < n_lags; ++j)
        metric[static_cast<std::size_t>(j)] +=
            scale * best_lag[static_cast<std::size_t>(j)];
      continue;
    }

    derotate(b.cfo);
    correlate(q, s0, dt, m_lo, m_hi, corr);
    if (cfg.level == Knowledge::Full) {
      const Complex alpha_conj = std::polar(b.channel_amp, -b.channel_phase);
      for (int j = 0; j < n_lags; ++j)
        metric[static_cast<std::size_t>(j)] +=
            (alpha_conj * corr[lag_of(j)]).real() / b.noise_psd;
    } else {  // CfoKnown: channel concentrated out
      const double scale = 1.0 / (b.noise_psd * energy);
      for (int j = 0; j < n_lags; ++j)
        metric[static_cast<std::size_t>(j)] += scale * std::norm(corr[lag_of(j)]);
    }
  }

  const double grid_start = static_cast<double>(m_lo) * dt;
  return refine_peak(metric, grid_start, static_cast<double>(stride) * dt);
}

TrialReport run_trials(const TrialConfig& cfg) {
  cfg.validate();
  TrialReport rep;
  rep.estimates.assign(static_cast<std::size_t>(cfg.n_trials), 0.0);
  std::vector<char> hit(static_cast<std::size_t>(cfg.n_trials), 0);

  parallel_for(static_cast<std::size_t>(cfg.n_trials), [&](std::size_t trial) {
    Rng rng(derive_seed(cfg.seed, trial));
    std::vector<SampledSignal> received;
    received.reserve(cfg.branches.size());
    for (const BranchSpec& b : cfg.branches)
      received.push_back(
          synthesize_received(b, cfg.tau_true, cfg.dt, rng, cfg.window_symbols));
    const EstimateResult est = ml_estimate(received, cfg);
    rep.estimates[trial] = est.tau_hat;
    hit[trial] = est.boundary_hit ? 1 : 0;
  });

  for (char h : hit) rep.boundary_hits += h;
  if (rep.boundary_hits > 0.01 * cfg.n_trials)
    throw BoundaryHitError("run_trials: " + std::to_string(rep.boundary_hits) +
                           " of " + std::to_string(cfg.n_trials) +
                           " trials peaked on the search boundary");

  double sum = 0.0, sum_sq = 0.0;
  for (double est : rep.estimates) {
    const double err = est - cfg.tau_true;
    sum += err;
    sum_sq += err * err;
  }
  const double n = static_cast<double>(cfg.n_trials);
  rep.bias = sum / n;
  rep.rmse = std::sqrt(sum_sq / n);
  if (cfg.matching_crlb > 0.0) rep.ratio = rep.rmse / std::sqrt(cfg.matching_crlb);

  // Percentile bootstrap (2.5%..97.5%) on the rmse.
  const int n_boot = 400;
  std::vector<double> boot(n_boot);
  Rng brng(derive_seed(cfg.seed, 0xb00757a9ULL));
  for (int bi = 0; bi < n_boot; ++bi) {
    double acc = 0.0;
    for (int j = 0; j < cfg.n_trials; ++j) {
      const double err =
          rep.estimates[brng.uniform_index(static_cast<std::uint32_t>(cfg.n_trials))] -
          cfg.tau_true;
      acc += err * err;
    }
    boot[static_cast<std::size_t>(bi)] = std::sqrt(acc / n);
  }
  std::sort(boot.begin(), boot.end());
  rep.rmse_ci_low = boot[static_cast<std::size_t>(std::llround(0.025 * (n_boot - 1)))];
  rep.rmse_ci_high = boot[static_cast<std::size_t>(std::llround(0.975 * (n_boot - 1)))];
  return rep;
}

}  // namespace tde
