// SPDX-License-Identifier: Apache-2.0
#include "tde/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "tde/errors.hpp"

namespace tde {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw ConfigError("scenario." + field + ": " + msg);
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(key, "wrong type");
  }
}

std::vector<double> get_number_list(const json& j, const std::string& key) {
  std::vector<double> out;
  if (!j.contains(key)) return out;
  const json& v = j.at(key);
  if (v.is_number()) {
    out.push_back(v.get<double>());
    return out;
  }
  if (!v.is_array()) fail(key, "expected a number or an array of numbers");
  for (const auto& e : v) {
    if (!e.is_number()) fail(key, "expected numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

Knowledge parse_level(const std::string& s) {
  if (s == "FULL") return Knowledge::Full;
  if (s == "CFO_KNOWN") return Knowledge::CfoKnown;
  if (s == "NONE") return Knowledge::None;
  fail("mc.levels", "unknown knowledge level '" + s + "'");
}

/// 17 significant digits: lossless double round trip, locale-free.
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ModulationSpec parse_modulation(const std::string& name, double fsk_shift) {
  std::size_t pos = 0;
  while (pos < name.size() && std::isdigit(static_cast<unsigned char>(name[pos])))
    ++pos;
  if (pos == 0 || pos == name.size())
    throw ConfigError("modulation name '" + name + "' must look like '16PSK'");
  ModulationSpec m;
  m.order = std::stoi(name.substr(0, pos));
  std::string kind = name.substr(pos);
  std::transform(kind.begin(), kind.end(), kind.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  if (kind == "PAM") m.kind = ModulationKind::PAM;
  else if (kind == "PSK") m.kind = ModulationKind::PSK;
  else if (kind == "QAM") m.kind = ModulationKind::QAM;
  else if (kind == "FSK") m.kind = ModulationKind::FSK;
  else throw ConfigError("modulation name '" + name + "': unknown kind '" + kind + "'");
  m.fsk_shift = fsk_shift;
  m.validate();
  return m;
}

void ScenarioFile::validate() const {
  if (schema_version != 1) fail("schema_version", "expected 1");
  if (branch_counts.empty()) fail("branch_count", "required, must be >= 1");
  for (int k : branch_counts)
    if (k < 1) fail("branch_count", "must be >= 1");
  if (symbol_count < 1) fail("symbol_count", "must be >= 1");
  if (modulations.empty()) fail("modulations", "at least one required");
  for (const auto& name : modulations) parse_modulation(name, fsk_shift);
  pulse.validate();
  if (!(pulse_energy > 0.0)) fail("pulse.energy", "must be > 0");
  if (snr_db.empty()) fail("snr_db", "non-empty sweep required");
  if (!(dt > 0.0)) fail("dt_ns", "must be > 0");
  const double spp = pulse.symbol_duration / dt;
  if (std::abs(spp - std::round(spp)) > 1e-9 * spp || spp < 4)
    fail("dt_ns", "must divide symbol_duration_ns with >= 4 samples per symbol");
  if (unit != "seconds" && unit != "meters")
    fail("unit", "expected 'seconds' or 'meters'");
  const int window = window_symbols > 0 ? window_symbols : symbol_count;
  if (window < symbol_count)
    fail("window_symbols", "must be >= symbol_count");
  if (tau < 0.0 || tau + symbol_count * pulse.symbol_duration >
                       window * pulse.symbol_duration + 1e-9 * pulse.symbol_duration)
    fail("tau_ns", "pulse train does not fit the observation window");
  const std::size_t max_k =
      static_cast<std::size_t>(*std::max_element(branch_counts.begin(), branch_counts.end()));
  if (!override_amps.empty() && override_amps.size() != max_k)
    fail("branch_overrides.amps", "length must equal the largest branch_count");
  if (!override_phases.empty() && override_phases.size() != max_k)
    fail("branch_overrides.phases", "length must equal the largest branch_count");
  if (!override_cfos.empty() && override_cfos.size() != max_k)
    fail("branch_overrides.cfos_rad_per_s", "length must equal the largest branch_count");
  for (double a : override_amps)
    if (!(a > 0.0)) fail("branch_overrides.amps", "must be > 0");
  if (mc) {
    if (mc->n_trials < 1) fail("mc.n_trials", "must be >= 1");
    if (mc->levels.empty()) fail("mc.levels", "at least one required");
    if (mc->snr_db.empty()) fail("mc.snr_db", "non-empty list required");
    parse_modulation(mc->modulation, fsk_shift);
    if (!(mc->tau_search > 0.0)) fail("mc.tau_search_ns", "must be > 0");
  }
}

ScenarioFile parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scenario: JSON parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("scenario: top level must be an object");

  ScenarioFile sc;
  sc.schema_version = get_or<int>(j, "schema_version", 0);
  sc.name = get_or<std::string>(j, "name", "");
  for (double k : get_number_list(j, "branch_count"))
    sc.branch_counts.push_back(static_cast<int>(std::llround(k)));
  sc.symbol_count = get_or<int>(j, "symbol_count", 0);
  if (j.contains("modulations")) {
    if (!j.at("modulations").is_array()) fail("modulations", "expected an array");
    for (const auto& e : j.at("modulations")) {
      if (!e.is_string()) fail("modulations", "expected strings");
      sc.modulations.push_back(e.get<std::string>());
    }
  }
  if (j.contains("pulse")) {
    const json& p = j.at("pulse");
    if (!p.is_object()) fail("pulse", "expected an object");
    sc.pulse.zeta = get_or<double>(p, "zeta_ns", 8.0) * 1e-9;
    sc.pulse.symbol_duration = get_or<double>(p, "symbol_duration_ns", 20.0) * 1e-9;
    sc.pulse.center = p.contains("center_ns")
                          ? p.at("center_ns").get<double>() * 1e-9
                          : 0.5 * sc.pulse.symbol_duration;
    sc.pulse_energy = get_or<double>(p, "energy", 1.0);
  } else {
    sc.pulse.center = 0.5 * sc.pulse.symbol_duration;
  }
  sc.fsk_shift = get_or<double>(j, "fsk_shift_hz", 23.75e6);
  sc.snr_db = get_number_list(j, "snr_db");
  sc.tau = get_or<double>(j, "tau_ns", 0.0) * 1e-9;
  sc.dt = get_or<double>(j, "dt_ns", 0.025) * 1e-9;
  sc.window_symbols = get_or<int>(j, "window_symbols", 0);
  sc.seed = get_or<std::uint64_t>(j, "seed", 1);
  sc.unit = get_or<std::string>(j, "unit", "seconds");
  if (j.contains("branch_overrides")) {
    const json& o = j.at("branch_overrides");
    if (!o.is_object()) fail("branch_overrides", "expected an object");
    for (double a : get_number_list(o, "amps")) sc.override_amps.push_back(a);
    for (double p : get_number_list(o, "phases")) sc.override_phases.push_back(p);
    for (double w : get_number_list(o, "cfos_rad_per_s"))
      sc.override_cfos.push_back(w);
  }
  if (j.contains("mc")) {
    const json& m = j.at("mc");
    if (!m.is_object()) fail("mc", "expected an object");
    McSection mc;
    mc.n_trials = get_or<int>(m, "n_trials", 200);
    if (m.contains("levels")) {
      mc.levels.clear();
      if (!m.at("levels").is_array()) fail("mc.levels", "expected an array");
      for (const auto& e : m.at("levels")) {
        if (!e.is_string()) fail("mc.levels", "expected strings");
        mc.levels.push_back(parse_level(e.get<std::string>()));
      }
    }
    if (m.contains("snr_db")) mc.snr_db = get_number_list(m, "snr_db");
    mc.modulation = get_or<std::string>(m, "modulation", "16PSK");
    mc.tau_search = get_or<double>(m, "tau_search_ns", 2.0) * 1e-9;
    mc.tau_step = get_or<double>(m, "tau_step_ns", 0.0) * 1e-9;
    mc.omega_max = 2.0 * M_PI * get_or<double>(m, "omega_max_hz", 5e6);
    mc.omega_step = 2.0 * M_PI * get_or<double>(m, "omega_step_hz", 0.0);
    sc.mc = mc;
  }
  sc.validate();
  return sc;
}

ScenarioFile load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("scenario: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::vector<BranchSpec> build_branches(const ScenarioFile& sc,
                                       const ModulationSpec& mod,
                                       int branch_count, double snr_db) {
  const PulseSpec pulse = normalized_pulse(sc.pulse, sc.pulse_energy);
  // Pulse energy at the working grid resolution, consistent with the
  // quadrature used for the functionals.
  const double ep = pulse_energy(pulse, sc.dt);
  const double snr_linear = std::pow(10.0, snr_db / 10.0);
  const double share = snr_linear / branch_count;
  const double mean_symbol_energy = mod.normalization;

  std::vector<BranchSpec> branches;
  branches.reserve(static_cast<std::size_t>(branch_count));
  for (int i = 0; i < branch_count; ++i) {
    const double amp =
        sc.override_amps.empty() ? 1.0 : sc.override_amps[static_cast<std::size_t>(i)];
    const double phase =
        sc.override_phases.empty() ? 0.0 : sc.override_phases[static_cast<std::size_t>(i)];
    const double cfo =
        sc.override_cfos.empty() ? 0.0 : sc.override_cfos[static_cast<std::size_t>(i)];
    const double gamma = share / (mean_symbol_energy * ep);
    const double noise_psd = amp * amp / gamma;
    // Same seed for every branch: identical training sequences.
    branches.push_back(make_branch(pulse, mod, sc.symbol_count, amp, phase, cfo,
                                   noise_psd, sc.seed));
  }
  return branches;
}

std::vector<CrlbRow> run_crlb_sweep(const ScenarioFile& sc) {
  sc.validate();
  std::vector<CrlbRow> rows;
  for (const std::string& mod_name : sc.modulations) {
    const ModulationSpec mod = parse_modulation(mod_name, sc.fsk_shift);
    for (int k : sc.branch_counts) {
      // Functionals are SNR-independent; compute once per (modulation, K).
      std::vector<BranchSpec> branches = build_branches(sc, mod, k, sc.snr_db.front());
      std::vector<FunctionalSet> fs;
      fs.reserve(branches.size());
      for (const BranchSpec& b : branches)
        fs.push_back(compute_functionals(
            sample_branch(b, sc.tau, sc.dt, sc.window_symbols)));
      for (double snr : sc.snr_db) {
        std::vector<BranchSpec> pt = build_branches(sc, mod, k, snr);
        CrlbRow row;
        row.modulation = mod_name;
        row.branch_count = k;
        row.symbol_count = sc.symbol_count;
        row.snr_db = snr;
        row.report = evaluate_crlb(fs, pt);
        rows.push_back(std::move(row));
      }
    }
  }
  std::sort(rows.begin(), rows.end(), [](const CrlbRow& a, const CrlbRow& b) {
    return std::tie(a.modulation, a.branch_count, a.symbol_count, a.snr_db) <
           std::tie(b.modulation, b.branch_count, b.symbol_count, b.snr_db);
  });
  return rows;
}

std::vector<McRow> run_mc(const ScenarioFile& sc) {
  sc.validate();
  if (!sc.mc) throw ConfigError("scenario.mc: section required for the mc command");
  const McSection& mcs = *sc.mc;
  const ModulationSpec mod = parse_modulation(mcs.modulation, sc.fsk_shift);
  const int k = sc.branch_counts.front();

  std::vector<McRow> rows;
  for (Knowledge level : mcs.levels) {
    for (double snr : mcs.snr_db) {
      std::vector<BranchSpec> branches = build_branches(sc, mod, k, snr);
      std::vector<FunctionalSet> fs;
      std::vector<double> gammas;
      for (const BranchSpec& b : branches) {
        fs.push_back(compute_functionals(
            sample_branch(b, sc.tau, sc.dt, sc.window_symbols)));
        gammas.push_back(b.channel_amp * b.channel_amp / b.noise_psd);
      }
      double bound = 0.0;
      switch (level) {
        case Knowledge::Full: bound = crlb3(fs, gammas); break;
        case Knowledge::CfoKnown: bound = crlb2(fs, gammas); break;
        case Knowledge::None: bound = crlb1_closed(fs, gammas); break;
      }

      TrialConfig cfg;
      cfg.branches = std::move(branches);
      cfg.tau_true = sc.tau;
      cfg.level = level;
      cfg.n_trials = mcs.n_trials;
      cfg.seed = derive_seed(sc.seed, static_cast<std::uint64_t>(rows.size()) + 101);
      cfg.dt = sc.dt;
      cfg.window_symbols = sc.window_symbols;
      cfg.tau_range = mcs.tau_search;
      cfg.tau_step = mcs.tau_step;
      cfg.omega_max = mcs.omega_max;
      cfg.omega_step = mcs.omega_step;
      cfg.matching_crlb = bound;
      const TrialReport rep = run_trials(cfg);

      McRow row;
      row.level = to_string(level);
      row.snr_db = snr;
      row.rmse = rep.rmse;
      row.sqrt_crlb = std::sqrt(bound);
      row.ratio = rep.ratio;
      row.ci_low = rep.rmse_ci_low;
      row.ci_high = rep.rmse_ci_high;
      rows.push_back(row);
    }
  }
  std::sort(rows.begin(), rows.end(), [](const McRow& a, const McRow& b) {
    return std::tie(a.level, a.snr_db) < std::tie(b.level, b.snr_db);
  });
  return rows;
}

namespace {

double unit_scale(const std::string& unit) {
  return unit == "meters" ? kSpeedOfLight : 1.0;
}

}  // namespace

void write_crlb_csv(std::ostream& os, const std::vector<CrlbRow>& rows,
                    const std::string& unit) {
  const double scale = unit_scale(unit);
  os << "modulation,K,N,snr_db,sqrt_crlb1,sqrt_crlb2,sqrt_crlb3,sqrt_crlb24,xi\n";
  for (const CrlbRow& r : rows) {
    os << r.modulation << ',' << r.branch_count << ',' << r.symbol_count << ','
       << fmt(r.snr_db) << ',' << fmt(scale * std::sqrt(r.report.crlb1)) << ','
       << fmt(scale * std::sqrt(r.report.crlb2)) << ','
       << fmt(scale * std::sqrt(r.report.crlb3)) << ',';
    if (r.report.closed_form_24)
      os << fmt(scale * std::sqrt(*r.report.closed_form_24));
    os << ',' << fmt(r.report.xi) << '\n';
  }
}

void write_mc_csv(std::ostream& os, const std::vector<McRow>& rows,
                  const std::string& unit) {
  const double scale = unit_scale(unit);
  os << "level,snr_db,rmse,sqrt_crlb,ratio,ci_low,ci_high\n";
  for (const McRow& r : rows) {
    os << r.level << ',' << fmt(r.snr_db) << ',' << fmt(scale * r.rmse) << ','
       << fmt(scale * r.sqrt_crlb) << ',' << fmt(r.ratio) << ','
       << fmt(scale * r.ci_low) << ',' << fmt(scale * r.ci_high) << '\n';
  }
}

void write_convergence_csv(std::ostream& os, const ScenarioFile& sc) {
  sc.validate();
  os << "modulation,field,value_dt,value_half_dt,delta,flagged\n";
  for (const std::string& mod_name : sc.modulations) {
    const ModulationSpec mod = parse_modulation(mod_name, sc.fsk_shift);
    std::vector<BranchSpec> branches =
        build_branches(sc, mod, sc.branch_counts.front(), sc.snr_db.front());
    const ConvergenceReport rep = convergence_check(branches.front(), sc.tau, sc.dt);
    const auto& names = ConvergenceReport::field_names();
    const std::array<double, ConvergenceReport::n_fields> coarse = {
        rep.coarse.energy, rep.coarse.deriv_energy, rep.coarse.e_hat_r,
        rep.coarse.e_hat_i, rep.coarse.f_moment, rep.coarse.f_hat,
        rep.coarse.g_moment, rep.coarse.eff_bandwidth};
    const std::array<double, ConvergenceReport::n_fields> fine = {
        rep.fine.energy, rep.fine.deriv_energy, rep.fine.e_hat_r,
        rep.fine.e_hat_i, rep.fine.f_moment, rep.fine.f_hat,
        rep.fine.g_moment, rep.fine.eff_bandwidth};
    for (int i = 0; i < ConvergenceReport::n_fields; ++i) {
      os << mod_name << ',' << names[static_cast<std::size_t>(i)] << ','
         << fmt(coarse[static_cast<std::size_t>(i)]) << ','
         << fmt(fine[static_cast<std::size_t>(i)]) << ','
         << fmt(rep.delta[static_cast<std::size_t>(i)]) << ','
         << (rep.flagged[static_cast<std::size_t>(i)] ? 1 : 0) << '\n';
    }
  }
}

}  // namespace tde
