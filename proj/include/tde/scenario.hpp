// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tde/crlb.hpp"
#include "tde/functionals.hpp"
#include "tde/mc.hpp"
#include "tde/signal.hpp"

namespace tde {

/// Monte Carlo section of a scenario file.
struct McSection {
  int n_trials = 200;
  std::vector<Knowledge> levels = {Knowledge::Full};
  std::vector<double> snr_db = {30.0};
  std::string modulation = "16PSK";
  double tau_search = 2e-9;       ///< seconds
  double tau_step = 0.0;          ///< <=0: dt
  double omega_max = 2.0 * 3.14159265358979323846 * 5e6;  ///< rad/s
  double omega_step = 0.0;        ///< <=0: 0.3 / T
};

/// Parsed scenario configuration (JSON, schema_version 1).
///
/// snr_db entries are system SNRs: the sum over branches of the
/// per-branch training-symbol SNR |alpha_i|^2 Ed Ep / sigma_i^2, where
/// Ed is the constellation's mean symbol energy and Ep the pulse energy.
/// The share is split equally across branches, so gamma_i =
/// (snr / K) / (Ed * Ep); branch noise then follows as sigma_i^2 =
/// |alpha_i|^2 / gamma_i.
struct ScenarioFile {
  int schema_version = 1;
  std::string name;
  std::vector<int> branch_counts;   ///< K values (fig4-style sweeps allowed)
  int symbol_count = 2;             ///< N
  std::vector<std::string> modulations;
  PulseSpec pulse;                  ///< amplitude auto-normalized to `pulse_energy`
  double pulse_energy = 1.0;
  double fsk_shift = 23.75e6;       ///< Hz
  std::vector<double> snr_db;
  double tau = 0.0;                 ///< seconds
  double dt = 0.025e-9;             ///< seconds
  int window_symbols = 0;           ///< 0: equal to symbol_count
  std::uint64_t seed = 1;
  std::string unit = "seconds";     ///< "seconds" | "meters"
  std::vector<double> override_amps;    ///< per-branch |alpha_i|, default 1
  std::vector<double> override_phases;  ///< per-branch phi_i (rad), default 0
  std::vector<double> override_cfos;    ///< per-branch omega_i (rad/s), default 0
  std::optional<McSection> mc;

  void validate() const;
};

/// Parses and validates a scenario file; throws ConfigError with a
/// field-level message on schema violations.
ScenarioFile load_scenario(const std::string& path);
ScenarioFile parse_scenario(const std::string& json_text);

/// Parses a modulation name like "16PSK", "16QAM", "4PAM", "16FSK".
ModulationSpec parse_modulation(const std::string& name, double fsk_shift);

/// One CRLB sweep row.
struct CrlbRow {
  std::string modulation;
  int branch_count = 0;
  int symbol_count = 0;
  double snr_db = 0.0;
  CrlbReport report;
};

/// One Monte Carlo row.
struct McRow {
  std::string level;
  double snr_db = 0.0;
  double rmse = 0.0;
  double sqrt_crlb = 0.0;
  double ratio = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// Builds the K branches for one (modulation, K) scenario point. All
/// branches share the training sequence (same seed) and the normalized
/// pulse; gamma follows the scenario's SNR convention.
std::vector<BranchSpec> build_branches(const ScenarioFile& sc,
                                       const ModulationSpec& mod,
                                       int branch_count, double snr_db);

/// Runs the CRLB sweep over (modulation, K, snr) points.
std::vector<CrlbRow> run_crlb_sweep(const ScenarioFile& sc);

/// Runs the Monte Carlo comparison described by the scenario's mc section.
std::vector<McRow> run_mc(const ScenarioFile& sc);

/// CSV renderers. Floats use 17 significant digits, '.' decimal
/// separator, no locale dependence; byte-deterministic given identical
/// rows. `unit` scales reported deviations by c when "meters".
void write_crlb_csv(std::ostream& os, const std::vector<CrlbRow>& rows,
                    const std::string& unit);
void write_mc_csv(std::ostream& os, const std::vector<McRow>& rows,
                  const std::string& unit);
void write_convergence_csv(std::ostream& os, const ScenarioFile& sc);

}  // namespace tde
