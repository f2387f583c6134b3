#include "thz/freqplan.hpp"

namespace thz {

void ExtensionConfig::validate() const {
  if (multiplier < 1) throw Error(Errc::parameter, "extension: M must be >= 1");
  if (delta_multiplier < 0) throw Error(Errc::parameter, "extension: delta M must be >= 0");
  if (!(f_lo_hz > 0.0)) throw Error(Errc::parameter, "extension: f_lo must be > 0");
  if (f_if_hz < 0.0) throw Error(Errc::parameter, "extension: f_if must be >= 0");
  if (delta_f_lo_hz < 0.0 || delta_f_if_hz < 0.0) throw Error(Errc::parameter, "extension: steps must be >= 0");
  if (epsilon) {
    if (*epsilon < 0.0) throw Error(Errc::parameter, "extension: epsilon must be >= 0");
    const double implied = *epsilon * f_lo_hz;
    const double scale = std::max(std::abs(implied), std::abs(delta_f_lo_hz));
    if (std::abs(implied - delta_f_lo_hz) > 1e-9 * scale)
      throw Error(Errc::parameter, "extension: delta_f_lo disagrees with epsilon·f_lo");
  }
}

double ExtensionConfig::broadband_constraint() const {
  return epsilon ? *epsilon : delta_f_lo_hz / f_lo_hz;
}

SidebandPair operating_frequencies(const ExtensionConfig& cfg) {
  cfg.validate();
  const double centre = double(cfg.multiplier) * cfg.f_lo_hz;
  return {centre - cfg.f_if_hz, centre + cfg.f_if_hz};
}

SidebandPair step_size_unfiltered(const ExtensionConfig& cfg) {
  cfg.validate();
  const double common = double(cfg.multiplier) * cfg.delta_f_lo_hz + double(cfg.delta_multiplier) * cfg.delta_f_lo_hz;
  return {common - cfg.delta_f_if_hz, common + cfg.delta_f_if_hz};
}

double step_size_filtered(const ExtensionConfig& cfg) {
  cfg.validate();
  if (cfg.broadband_constraint() == 0.0) return 0.0;
  return cfg.delta_f_lo_hz * double(cfg.multiplier + cfg.delta_multiplier);
}

std::size_t FrequencyGrid::size() const {
  if (!(step_hz > 0.0) || max_hz < min_hz) return 0;
  // Small slack so an endpoint that is a whole number of steps away survives rounding.
  return static_cast<std::size_t>(std::floor((max_hz - min_hz) / step_hz + 1e-9)) + 1;
}

FrequencyPlan plan_for_target(double target_hz, IntRange multipliers, const FrequencyGrid& lo,
                              const FrequencyGrid& intermediate) {
  if (!(lo.step_hz > 0.0) || !(intermediate.step_hz > 0.0))
    throw Error(Errc::parameter, "plan_for_target: grid steps must be > 0");
  if (!(lo.min_hz > 0.0) || intermediate.min_hz < 0.0)
    throw Error(Errc::parameter, "plan_for_target: f_lo must be > 0 and f_if >= 0");
  const int m_lo = std::max(multipliers.min, 1);
  const std::size_t n_lo = lo.size();
  const std::size_t n_if = intermediate.size();
  if (multipliers.max < m_lo || n_lo == 0 || n_if == 0)
    throw Error(Errc::no_plan, "plan_for_target: empty search grid");

  bool found = false;
  FrequencyPlan best;
  double best_abs = std::numeric_limits<double>::infinity();

  // Strict improvement only; iteration order already realises the tie-break.
  for (int m = m_lo; m <= multipliers.max; ++m) {
    for (std::size_t i = 0; i < n_lo; ++i) {
      const double f_lo = lo.at(i);
      for (std::size_t j = 0; j < n_if; ++j) {
        const double f_if = intermediate.at(j);
        for (Sideband sb : {Sideband::lower, Sideband::upper}) {
          const double achieved = double(m) * f_lo + (sb == Sideband::upper ? f_if : -f_if);
          const double err = std::abs(achieved - target_hz);
          if (err < best_abs) {
            best_abs = err;
            found = true;
            best.config = ExtensionConfig{m, 1, f_lo, lo.step_hz, f_if, intermediate.step_hz, std::nullopt};
            best.sideband = sb;
            best.achieved_hz = achieved;
            best.residual_hz = achieved - target_hz;
          }
        }
      }
    }
  }
  if (!found) throw Error(Errc::no_plan, "plan_for_target: no reachable configuration");
  return best;
}

}  // namespace thz
