// SPDX-License-Identifier: Apache-2.0
#include "tde/modulation.hpp"

#include <cmath>

#include "tde/errors.hpp"
#include "tde/rng.hpp"

namespace tde {

std::string to_string(ModulationKind kind) {
  switch (kind) {
    case ModulationKind::PAM: return "PAM";
    case ModulationKind::PSK: return "PSK";
    case ModulationKind::QAM: return "QAM";
    case ModulationKind::FSK: return "FSK";
  }
  return "?";
}

namespace {

bool is_perfect_square(int m) {
  const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
  return r * r == m;
}

}  // namespace

void ModulationSpec::validate() const {
  if (order < 2) throw ConfigError("modulation: order must be >= 2");
  if (!(normalization > 0.0))
    throw ConfigError("modulation: normalization target must be > 0");
  if (kind == ModulationKind::QAM && !is_perfect_square(order))
    throw ConfigError("modulation: QAM order must be a perfect square, got " +
                      std::to_string(order));
  if (kind == ModulationKind::FSK && !(fsk_shift > 0.0))
    throw ConfigError("modulation: FSK requires fsk_shift > 0");
}

std::vector<Complex> constellation(const ModulationSpec& m) {
  m.validate();
  std::vector<Complex> points;
  points.reserve(static_cast<std::size_t>(m.order));
  switch (m.kind) {
    case ModulationKind::PAM: {
      // levels -(M-1), ..., -1, +1, ..., +(M-1); raw mean power (M^2-1)/3
      for (int i = 0; i < m.order; ++i)
        points.emplace_back(static_cast<double>(2 * i - (m.order - 1)), 0.0);
      break;
    }
    case ModulationKind::PSK: {
      for (int i = 0; i < m.order; ++i) {
        const double phase = 2.0 * M_PI * i / m.order;
        points.emplace_back(std::cos(phase), std::sin(phase));
      }
      break;
    }
    case ModulationKind::QAM: {
      const int side = static_cast<int>(std::lround(std::sqrt(m.order)));
      for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j)
          points.emplace_back(static_cast<double>(2 * i - (side - 1)),
                              static_cast<double>(2 * j - (side - 1)));
      break;
    }
    case ModulationKind::FSK: {
      points.assign(static_cast<std::size_t>(m.order), Complex(1.0, 0.0));
      break;
    }
  }
  double mean_power = 0.0;
  for (const auto& c : points) mean_power += std::norm(c);
  mean_power /= static_cast<double>(points.size());
  const double scale = std::sqrt(m.normalization / mean_power);
  for (auto& c : points) c *= scale;
  return points;
}

SymbolSequence make_symbols(const ModulationSpec& m, int n, std::uint64_t seed) {
  if (n < 1) throw ConfigError("make_symbols: n must be >= 1");
  const auto points = constellation(m);
  Rng rng(derive_seed(seed, 0x5eedULL));
  SymbolSequence seq;
  seq.values.reserve(static_cast<std::size_t>(n));
  if (m.kind == ModulationKind::FSK) seq.tones.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto idx = rng.uniform_index(static_cast<std::uint32_t>(m.order));
    seq.values.push_back(points[idx]);
    if (m.kind == ModulationKind::FSK) seq.tones.push_back(static_cast<int>(idx));
  }
  return seq;
}

}  // namespace tde
