#include "thz/link.hpp"

namespace thz {

double snr_stage1(const HardwareNoiseParams& noise) {
  noise.validate();
  const double ks = noise.kappa_S();
  if (ks == 0.0) return infinite_snr;
  return 1.0 / (ks * ks);
}

double snr_stage2(const StageConfig& cfg, std::complex<double> h) {
  cfg.validate();
  if (!(cfg.n0 > 0.0)) throw Error(Errc::parameter, "snr_stage2: N0 must be > 0");
  const double ks2 = cfg.noise.kappa_S() * cfg.noise.kappa_S();
  const double kt2 = cfg.noise.kappa_T() * cfg.noise.kappa_T();
  if (ks2 == 0.0) return infinite_snr;
  const double g = cfg.p_t() * std::norm(h) / cfg.effective_loss();
  const double num = g / (ks2 * cfg.n0);
  const double den = g * ks2 * kt2 / cfg.n0 + 1.0;
  return num / den;
}

double snr_cascade(const StageConfig& cfg, std::complex<double> h) {
  cfg.validate();
  const double ps = cfg.p_s();
  const double g = cfg.p_t() * std::norm(h) / cfg.effective_loss();
  const double ks = cfg.noise.kappa_S();
  const double kt = cfg.noise.kappa_T();
  const double noise = ps * g * ks * ks + g * kt * kt + cfg.n0;
  if (noise == 0.0) return infinite_snr;
  return ps * g / noise;
}

double max_data_rate(double bandwidth_hz, int constellation_size) {
  if (constellation_size < 2) throw Error(Errc::parameter, "max_data_rate: M must be >= 2");
  if (!(bandwidth_hz > 0.0)) throw Error(Errc::parameter, "max_data_rate: B_T must be > 0");
  return 2.0 * bandwidth_hz * std::log2(double(constellation_size));
}

}  // namespace thz
