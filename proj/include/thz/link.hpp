#pragma once

#include "thz/impairments.hpp"

namespace thz {

/// Reported antenna figures. They do not enter any link equation.
struct AntennaInfo {
  double gain_dbi = 11.0;
  double beamwidth_e_deg = 8.9;
  double beamwidth_h_deg = 10.28;
  double aperture_efficiency = 0.511;
};

struct StageConfig {
  double p_s_dbm = 5.0;
  double p_t_dbm = 5.0;
  double insertion_loss_db = 0.0;
  double loss = 1.0;  // L from path_loss
  double n0 = 0.0;    // per-sample AWGN variance, same power unit as P (mW)
  double phase_walk_linewidth_hz = 0.0;
  HardwareNoiseParams noise;
  AntennaInfo antenna;

  double p_s() const { return dbm_to_mw(p_s_dbm); }
  double p_t() const { return dbm_to_mw(p_t_dbm); }
  /// L with the fixed insertion losses folded in.
  double effective_loss() const { return loss * db_to_linear(insertion_loss_db); }

  void validate() const {
    noise.validate();
    if (!(loss > 0.0)) throw Error(Errc::parameter, "stage: L must be > 0");
    if (insertion_loss_db < 0.0) throw Error(Errc::parameter, "stage: insertion loss must be >= 0 dB");
    if (n0 < 0.0) throw Error(Errc::parameter, "stage: n0 must be >= 0");
    if (!std::isfinite(p_s_dbm) || !std::isfinite(p_t_dbm))
      throw Error(Errc::parameter, "stage: transmit powers must be finite");
  }
};

/// 1/κ_S². Returns infinite_snr when κ_S = 0.
double snr_stage1(const HardwareNoiseParams& noise);

/// Closed-form S(2) SNR exactly as the cascaded model states it:
///   (P_T|h|²/(L κ_S² N0)) / (P_T|h|² κ_S² κ_T²/(L N0) + 1)
/// Diverges as κ_S -> 0 (returns infinite_snr at κ_S = 0).
double snr_stage2(const StageConfig& cfg, std::complex<double> h);

/// SNR of the additive chain that simulate_end_to_end realises:
///   P_S·G / (P_S·G·κ_S² + G·κ_T² + N0),  G = P_T|h|²/L.
double snr_cascade(const StageConfig& cfg, std::complex<double> h);

/// 2·B_T·log2(M).
double max_data_rate(double bandwidth_hz, int constellation_size);

/// Stage 1 noise (κ_S), I/Q impairments, sqrt(P_T/L)·h, stage 2 noise (κ_T),
/// then AWGN. Optional LO phase walk sits after the I/Q impairments.
template <typename Scalar>
BasicIqFrame<Scalar> simulate_end_to_end(const BasicIqFrame<Scalar>& tx, const StageConfig& cfg,
                                         std::complex<double> h, const IqImpairmentSpec& iq_spec, Rng& rng) {
  cfg.validate();
  require_nonempty(tx, "simulate_end_to_end");

  BasicIqFrame<Scalar> y = inject_stage_noise(tx, cfg.p_s(), cfg.noise.kappa_S(), rng);
  y = apply_iq_impairments(y, iq_spec);
  if (cfg.phase_walk_linewidth_hz > 0.0) y = apply_phase_walk(y, cfg.phase_walk_linewidth_hz, rng);

  const double gain2 = cfg.p_t() / cfg.effective_loss();
  const std::complex<double> g = std::sqrt(gain2) * h;
  if (g != std::complex<double>(1.0, 0.0)) y.samples *= std::complex<Scalar>(g);

  const double kt = cfg.noise.kappa_T();
  add_circular_noise(y.samples, gain2 * std::norm(h) * kt * kt, rng);
  return add_awgn(y, cfg.n0, rng);
}

}  // namespace thz
