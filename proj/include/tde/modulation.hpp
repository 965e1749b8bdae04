// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tde/types.hpp"

namespace tde {

enum class ModulationKind { PAM, PSK, QAM, FSK };

std::string to_string(ModulationKind kind);

/// Constellation description. The normalization target is the mean
/// squared symbol magnitude of the full constellation, which equalizes
/// training-sequence energy across modulation types.
struct ModulationSpec {
  ModulationKind kind = ModulationKind::PSK;
  int order = 16;               ///< M
  double fsk_shift = 23.75e6;   ///< delta-f (Hz), used only for FSK
  double normalization = 1.0;   ///< target mean |d|^2

  void validate() const;
  bool is_linear() const { return kind != ModulationKind::FSK; }
  /// True when every constellation point has the same magnitude.
  bool constant_envelope() const { return kind == ModulationKind::PSK; }
};

/// One drawn training sequence. For FSK, `values` holds the
/// constant-magnitude markers sqrt(normalization) and `tones` the
/// per-symbol tone indices m_l in {0..M-1}; the time-varying waveform is
/// realized in sample_branch. For linear kinds `tones` is empty.
struct SymbolSequence {
  std::vector<Complex> values;
  std::vector<int> tones;
};

/// Full order-M constellation, normalized to the spec's target mean
/// squared magnitude. For FSK this returns the M unit markers.
std::vector<Complex> constellation(const ModulationSpec& m);

/// Draws n symbols uniformly from the constellation. Deterministic and
/// platform-independent for a given (spec, n, seed).
SymbolSequence make_symbols(const ModulationSpec& m, int n, std::uint64_t seed);

}  // namespace tde
