#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "thz/core.hpp"

namespace thz {

/// Aligned reference (I_0, Q_0) and measured (I_M, Q_M) component vectors.
template <typename Scalar>
struct ConstellationPair {
  RealVector<Scalar> i_ref, q_ref, i_meas, q_meas;
  std::optional<double> fc_ref_hz;
  std::optional<double> fc_meas_hz;

  static ConstellationPair from_complex(const Signal<Scalar>& reference, const Signal<Scalar>& measured) {
    ConstellationPair p;
    p.i_ref = reference.real();
    p.q_ref = reference.imag();
    p.i_meas = measured.real();
    p.q_meas = measured.imag();
    p.validate();
    return p;
  }

  Eigen::Index size() const { return i_ref.size(); }

  Signal<Scalar> reference() const { return assemble(i_ref, q_ref); }
  Signal<Scalar> measured() const { return assemble(i_meas, q_meas); }

  /// Peak magnitude of the reference constellation.
  double norm_ref() const { return std::sqrt(double((i_ref.array().square() + q_ref.array().square()).maxCoeff())); }

  void validate() const {
    const auto n = i_ref.size();
    if (n < 1) throw Error(Errc::length, "constellation pair: N must be >= 1");
    if (q_ref.size() != n || i_meas.size() != n || q_meas.size() != n)
      throw Error(Errc::length, "constellation pair: component vectors differ in length");
  }

 private:
  static Signal<Scalar> assemble(const RealVector<Scalar>& i, const RealVector<Scalar>& q) {
    Signal<Scalar> s(i.size());
    for (Eigen::Index k = 0; k < i.size(); ++k) s[k] = {i[k], q[k]};
    return s;
  }
};

/// RMS error-vector magnitude in percent of the peak reference magnitude.
template <typename Scalar>
double evm(const ConstellationPair<Scalar>& p) {
  p.validate();
  const double peak = p.norm_ref();
  if (!(peak > 0.0)) throw Error(Errc::degenerate, "evm: reference peak magnitude is zero");
  const double err = double((p.i_ref - p.i_meas).squaredNorm() + (p.q_ref - p.q_meas).squaredNorm());
  return std::sqrt(err / double(p.size())) / peak * 100.0;
}

/// Reference phase minus measured phase, after de-modulating the measured
/// symbols by the reference and averaging coherently. Degrees in (-180, 180].
template <typename Scalar>
double phase_error(const ConstellationPair<Scalar>& p) {
  p.validate();
  std::complex<double> acc{0, 0};
  for (Eigen::Index k = 0; k < p.size(); ++k)
    acc += std::complex<double>(p.i_ref[k], p.q_ref[k]) * std::conj(std::complex<double>(p.i_meas[k], p.q_meas[k]));
  if (std::abs(acc) == 0.0) throw Error(Errc::degenerate, "phase_error: coherent average is zero");
  return wrap_degrees(rad_to_deg(std::arg(acc)));
}

/// 90° minus the angle between the measured I and Q component vectors.
template <typename Scalar>
double skew_error(const ConstellationPair<Scalar>& p) {
  p.validate();
  const double ni = double(p.i_meas.norm());
  const double nq = double(p.q_meas.norm());
  if (ni == 0.0 || nq == 0.0) throw Error(Errc::degenerate, "skew_error: zero-norm branch vector");
  const double c = std::clamp(double(p.i_meas.dot(p.q_meas)) / (ni * nq), -1.0, 1.0);
  return rad_to_deg(std::numbers::pi / 2.0 - std::acos(c));
}

struct DroopEstimate {
  double total_db = 0.0;
  double per_symbol_db = 0.0;
};

/// 20·log10(E_2/E_1) where E_1 and E_2 are the first- and last-symbol values
/// of a least-squares line through the per-symbol amplitudes in dB.
template <typename Scalar>
DroopEstimate amplitude_droop(const ConstellationPair<Scalar>& p) {
  p.validate();
  const Eigen::Index n = p.size();
  Eigen::VectorXd db(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double e = std::hypot(double(p.i_meas[k]), double(p.q_meas[k]));
    if (e == 0.0) throw Error(Errc::degenerate, "amplitude_droop: zero symbol amplitude at index " + std::to_string(k));
    db[k] = 20.0 * std::log10(e);
  }
  if (n == 1) return {};
  const Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(n, 0.0, double(n - 1));
  const Eigen::VectorXd dt = t.array() - t.mean();
  const double slope = dt.dot((db.array() - db.mean()).matrix()) / dt.squaredNorm();
  return {slope * double(n - 1), slope};
}

/// |f_c^0 − f_c^M|.
template <typename Scalar>
double frequency_error(const ConstellationPair<Scalar>& p) {
  if (!p.fc_ref_hz || !p.fc_meas_hz)
    throw Error(Errc::incomplete_input, "frequency_error: reference and measured carrier estimates required");
  return std::abs(*p.fc_ref_hz - *p.fc_meas_hz);
}

/// 20·log10(|I_M| / |Q_M|).
template <typename Scalar>
double gain_imbalance(const ConstellationPair<Scalar>& p) {
  p.validate();
  const double nq = double(p.q_meas.norm());
  if (nq == 0.0) throw Error(Errc::degenerate, "gain_imbalance: zero Q norm");
  return 20.0 * std::log10(double(p.i_meas.norm()) / nq);
}

/// Measured symbol energy over error-vector energy, dB. infinite_snr when the
/// measurement matches the reference exactly.
template <typename Scalar>
double snr_estimate(const ConstellationPair<Scalar>& p) {
  p.validate();
  const double err = double((p.i_ref - p.i_meas).squaredNorm() + (p.q_ref - p.q_meas).squaredNorm());
  if (err == 0.0) return infinite_snr;
  const double sig = double(p.i_meas.squaredNorm() + p.q_meas.squaredNorm());
  return linear_to_db(sig / err);
}

struct MetricReport {
  double evm_pct_rms = 0.0;
  double phase_err_deg = 0.0;
  double skew_err_deg = 0.0;
  double amp_droop_db_per_sym = 0.0;
  double freq_err_hz = 0.0;
  double gain_imbalance_db = 0.0;
  double snr_db = 0.0;

  static constexpr std::size_t field_count = 7;
  /// Column names in report order.
  static constexpr std::array<std::string_view, field_count> field_names{
      "evm_pct", "phase_err_deg", "skew_err_deg", "droop_db_per_sym", "freq_err_hz", "gain_imbalance_db", "snr_db"};

  std::array<double, field_count> values() const {
    return {evm_pct_rms, phase_err_deg, skew_err_deg, amp_droop_db_per_sym, freq_err_hz, gain_imbalance_db, snr_db};
  }
  static MetricReport from_values(const std::array<double, field_count>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
  }
};

/// All seven rules. Frequency error is 0 when no carrier estimates are attached.
template <typename Scalar>
MetricReport compute_metrics(const ConstellationPair<Scalar>& p) {
  MetricReport r;
  r.evm_pct_rms = evm(p);
  r.phase_err_deg = phase_error(p);
  r.skew_err_deg = skew_error(p);
  r.amp_droop_db_per_sym = amplitude_droop(p).per_symbol_db;
  r.freq_err_hz = (p.fc_ref_hz && p.fc_meas_hz) ? frequency_error(p) : 0.0;
  r.gain_imbalance_db = gain_imbalance(p);
  r.snr_db = snr_estimate(p);
  return r;
}

struct FieldDispersion {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

struct AggregateReport {
  MetricReport rms;
  std::array<FieldDispersion, MetricReport::field_count> dispersion;
  std::size_t trials = 0;
};

/// Per-field RMS across trials plus boxplot quartiles (linear interpolation).
AggregateReport rms_aggregate(std::span<const MetricReport> reports);

}  // namespace thz
