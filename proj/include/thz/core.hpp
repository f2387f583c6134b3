#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace thz {

template <typename Scalar>
using Signal = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Random engine shared by every stochastic stage. Always passed explicitly.
using Rng = std::mt19937_64;

enum class Errc {
  invalid_seed,
  length,
  aliasing,
  parameter,
  geometry,
  empty_profile,
  domain,
  insufficient_data,
  estimation,
  degenerate,
  incomplete_input,
  no_plan,
  config,
  format,
  truncation,
  io,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Where the symbols sit inside a sample stream. `first_sample` is the
/// group-delay annotation: the index of the centre of symbol 0's pulse.
struct SymbolTiming {
  std::size_t first_sample = 0;
  std::size_t samples_per_symbol = 1;
  std::size_t count = 0;
};

/// Complex-envelope sample block: I(t) + jQ(t) around `center_freq_hz`.
template <typename Scalar>
struct BasicIqFrame {
  Signal<Scalar> samples;
  double sample_rate_hz = 1.0;
  double center_freq_hz = 0.0;
  double origin_time_s = 0.0;
  std::optional<SymbolTiming> timing;

  Eigen::Index size() const { return samples.size(); }

  /// Timing annotation, or one symbol per sample when none was attached.
  SymbolTiming symbol_timing() const {
    if (timing) return *timing;
    return SymbolTiming{0, 1, static_cast<std::size_t>(samples.size())};
  }

  double mean_power() const {
    return samples.size() == 0 ? 0.0 : double(samples.squaredNorm()) / double(samples.size());
  }

  template <typename Other>
  BasicIqFrame<Other> cast() const {
    BasicIqFrame<Other> out;
    out.samples = samples.template cast<std::complex<Other>>();
    out.sample_rate_hz = sample_rate_hz;
    out.center_freq_hz = center_freq_hz;
    out.origin_time_s = origin_time_s;
    out.timing = timing;
    return out;
  }
};

using IqFrame = BasicIqFrame<double>;
using IqFrameF = BasicIqFrame<float>;

inline void require_valid(const SymbolTiming& t, Eigen::Index n_samples) {
  if (t.samples_per_symbol == 0 || t.count == 0) throw Error(Errc::parameter, "symbol timing: empty");
  const auto last = t.first_sample + (t.count - 1) * t.samples_per_symbol;
  if (last >= static_cast<std::size_t>(n_samples))
    throw Error(Errc::length, "symbol timing: last symbol instant beyond frame end");
}

template <typename Scalar>
void require_nonempty(const BasicIqFrame<Scalar>& frame, const char* who) {
  if (frame.samples.size() == 0) throw Error(Errc::length, std::string(who) + ": empty frame");
  if (!(frame.sample_rate_hz > 0.0)) throw Error(Errc::parameter, std::string(who) + ": sample_rate_hz must be > 0");
}

// dB helpers. Power quantities only.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_mw(double dbm) { return db_to_linear(dbm); }
inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Wrap to (-180, 180].
inline double wrap_degrees(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w <= -180.0) w += 360.0;
  if (w > 180.0) w -= 360.0;
  return w;
}

inline constexpr double infinite_snr = std::numeric_limits<double>::infinity();

/// Adds circularly-symmetric complex Gaussian noise of total variance
/// `variance` (split evenly between I and Q) to every sample.
template <typename Scalar>
void add_circular_noise(Signal<Scalar>& x, double variance, Rng& rng) {
  if (variance == 0.0) return;
  std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
  for (Eigen::Index n = 0; n < x.size(); ++n) {
    const double re = normal(rng);
    const double im = normal(rng);
    x[n] += std::complex<Scalar>(Scalar(re), Scalar(im));
  }
}

}  // namespace thz
