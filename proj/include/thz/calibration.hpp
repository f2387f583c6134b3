#pragma once

#include "thz/scenario.hpp"

namespace thz {

struct CalibrationTargets {
  double los_snr_db = 32.463;
  double gap_db = 14.91;   // LoS minus reflector-at-d
  double eta_prior = 2.0;  // free-space exponent, weakly enforced
  double eta_prior_weight = 0.1;
};

struct CalibrationResult {
  double xi = 0.0;
  double k_diff = 0.0;
  double eta = 0.0;
  double los_snr_db = 0.0;
  double reflector_snr_db = 0.0;
  int iterations = 0;
  bool converged = false;

  double gap_db() const { return los_snr_db - reflector_snr_db; }
};

/// Fits (xi, k, eta) so the closed-form LoS and reflector SNRs hit the
/// targets. `los` and `reflector` supply the stage, geometry and distances;
/// their xi/k/eta are the starting point.
CalibrationResult calibrate_reflector(const ScenarioConfig& los, const ScenarioConfig& reflector,
                                      const CalibrationTargets& targets = {});

/// Copy of `cfg` with the fitted geometry parameters.
ScenarioConfig with_calibration(ScenarioConfig cfg, const CalibrationResult& fit);

}  // namespace thz
