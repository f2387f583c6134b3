#pragma once

#include <utility>

#include "thz/core.hpp"

namespace thz {

/// Multiplier-extended chain M·f_lo ± f_if with per-term step sizes.
struct ExtensionConfig {
  int multiplier = 6;
  int delta_multiplier = 0;
  double f_lo_hz = 30e9;
  double delta_f_lo_hz = 0.0;
  double f_if_hz = 2.4e9;
  double delta_f_if_hz = 0.0;
  std::optional<double> epsilon;  // Δf_lo / f_lo when given explicitly

  void validate() const;
  /// Explicit epsilon, or Δf_lo / f_lo.
  double broadband_constraint() const;
};

struct SidebandPair {
  double lower;
  double upper;
};

/// (M·f_lo − f_if, M·f_lo + f_if).
SidebandPair operating_frequencies(const ExtensionConfig& cfg);

/// Both branches of M·Δf_lo + ΔM·Δf_lo ± Δf_if; the upper branch carries +Δf_if.
SidebandPair step_size_unfiltered(const ExtensionConfig& cfg);

/// Image-rejected step: 0 when ε = 0, otherwise Δf_lo·(M + ΔM).
double step_size_filtered(const ExtensionConfig& cfg);

enum class Sideband { lower, upper };

struct IntRange {
  int min;
  int max;
};

/// Inclusive grid min, min + step, ... <= max.
struct FrequencyGrid {
  double min_hz;
  double max_hz;
  double step_hz;

  std::size_t size() const;
  double at(std::size_t i) const { return min_hz + double(i) * step_hz; }
};

struct FrequencyPlan {
  ExtensionConfig config;
  Sideband sideband = Sideband::upper;
  double achieved_hz = 0.0;
  double residual_hz = 0.0;  // achieved − target
};

/// Exhaustive search over the M × f_lo × f_if grid and both sidebands.
/// Ties go to smaller M, then lower f_lo, then lower f_if, then the lower sideband.
FrequencyPlan plan_for_target(double target_hz, IntRange multipliers, const FrequencyGrid& lo,
                              const FrequencyGrid& intermediate);

}  // namespace thz
