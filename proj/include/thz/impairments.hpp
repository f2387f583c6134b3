#pragma once

#include "thz/core.hpp"

namespace thz {

/// Hardware impairment strengths of the cascaded transmitter. Stage
/// aggregates are always derived, never stored.
struct HardwareNoiseParams {
  double kappa_I = 0.0;    // SDR transmit
  double kappa_Fr = 0.0;   // FEX-1 IF receive
  double kappa_Ft = 0.0;   // FEX-1 transmit
  double kappa_F2r = 0.0;  // FEX-2 receive

  double kappa_S() const { return std::hypot(kappa_I, kappa_Fr); }
  double kappa_T() const { return std::hypot(kappa_Ft, kappa_F2r); }

  void validate() const {
    if (kappa_I < 0 || kappa_Fr < 0 || kappa_Ft < 0 || kappa_F2r < 0)
      throw Error(Errc::parameter, "hardware noise: kappa coefficients must be >= 0");
  }
};

/// Forward I/Q impairment model. Applied as gain -> skew -> droop -> CFO/phase.
struct IqImpairmentSpec {
  double gain_imbalance_db = 0.0;  // on I, relative to Q
  double skew_deg = 0.0;           // Q axis rotated toward I
  double droop_db_total = 0.0;     // decay first -> last symbol
  double cfo_hz = 0.0;
  double phase_offset_deg = 0.0;

  bool is_identity() const {
    return gain_imbalance_db == 0.0 && skew_deg == 0.0 && droop_db_total == 0.0 && cfo_hz == 0.0 &&
           phase_offset_deg == 0.0;
  }
};

/// sqrt(power_scale)·x + n, n ~ CN(0, power_scale·kappa²) per sample.
template <typename Scalar>
BasicIqFrame<Scalar> inject_stage_noise(const BasicIqFrame<Scalar>& frame, double power_scale, double kappa,
                                        Rng& rng) {
  if (kappa < 0.0) throw Error(Errc::parameter, "inject_stage_noise: kappa must be >= 0");
  if (!(power_scale > 0.0)) throw Error(Errc::parameter, "inject_stage_noise: power_scale must be > 0");
  BasicIqFrame<Scalar> out = frame;
  if (power_scale != 1.0) out.samples *= Scalar(std::sqrt(power_scale));
  if (kappa > 0.0) add_circular_noise(out.samples, power_scale * kappa * kappa, rng);
  return out;
}

/// `n0` is the per-sample complex noise variance (full sample-rate band).
template <typename Scalar>
BasicIqFrame<Scalar> add_awgn(const BasicIqFrame<Scalar>& frame, double n0, Rng& rng) {
  if (n0 < 0.0) throw Error(Errc::parameter, "add_awgn: n0 must be >= 0");
  BasicIqFrame<Scalar> out = frame;
  add_circular_noise(out.samples, n0, rng);
  return out;
}

template <typename Scalar>
BasicIqFrame<Scalar> apply_iq_impairments(const BasicIqFrame<Scalar>& frame, const IqImpairmentSpec& spec) {
  require_nonempty(frame, "apply_iq_impairments");
  BasicIqFrame<Scalar> out = frame;
  if (spec.is_identity()) return out;

  auto& x = out.samples;
  const Eigen::Index n = x.size();

  if (spec.gain_imbalance_db != 0.0) {
    const Scalar g = Scalar(std::pow(10.0, spec.gain_imbalance_db / 20.0));
    for (Eigen::Index i = 0; i < n; ++i) x[i] = {x[i].real() * g, x[i].imag()};
  }
  if (spec.skew_deg != 0.0) {
    const Scalar c = Scalar(std::cos(deg_to_rad(spec.skew_deg)));
    const Scalar s = Scalar(std::sin(deg_to_rad(spec.skew_deg)));
    for (Eigen::Index i = 0; i < n; ++i) x[i] = {x[i].real(), x[i].imag() * c + x[i].real() * s};
  }

  const SymbolTiming timing = frame.symbol_timing();
  const double first = double(timing.first_sample);

  if (spec.droop_db_total != 0.0 && timing.count > 1) {
    // Linear-in-dB ramp anchored at 0 dB on the first symbol instant.
    const double span = double(timing.samples_per_symbol) * double(timing.count - 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double db = -spec.droop_db_total * (double(i) - first) / span;
      x[i] *= Scalar(std::pow(10.0, db / 20.0));
    }
  }
  if (spec.cfo_hz != 0.0 || spec.phase_offset_deg != 0.0) {
    const double w = 2.0 * std::numbers::pi * spec.cfo_hz / frame.sample_rate_hz;
    const double phi0 = deg_to_rad(spec.phase_offset_deg);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double phase = w * (double(i) - first) + phi0;
      x[i] *= std::complex<Scalar>(Scalar(std::cos(phase)), Scalar(std::sin(phase)));
    }
  }
  return out;
}

/// Wiener phase walk with Lorentzian linewidth `linewidth_hz`. Not part of the
/// default chain; LO phase noise is disabled unless a linewidth is configured.
template <typename Scalar>
BasicIqFrame<Scalar> apply_phase_walk(const BasicIqFrame<Scalar>& frame, double linewidth_hz, Rng& rng) {
  if (linewidth_hz < 0.0) throw Error(Errc::parameter, "apply_phase_walk: linewidth must be >= 0");
  BasicIqFrame<Scalar> out = frame;
  if (linewidth_hz == 0.0) return out;
  std::normal_distribution<double> step(0.0, std::sqrt(2.0 * std::numbers::pi * linewidth_hz / frame.sample_rate_hz));
  double phase = 0.0;
  for (Eigen::Index i = 0; i < out.samples.size(); ++i) {
    phase += step(rng);
    out.samples[i] *= std::complex<Scalar>(Scalar(std::cos(phase)), Scalar(std::sin(phase)));
  }
  return out;
}

}  // namespace thz
