#pragma once

#include <array>
#include <span>
#include <vector>

#include "thz/core.hpp"

namespace thz {

// ---------------------------------------------------------------------------
// Bit source

enum class Prbs { prbs7, prbs9, prbs15, prbs23, prbs31 };

/// Register length and second feedback tap of x^n + x^m + 1.
struct PrbsPolynomial {
  unsigned degree;
  unsigned tap;
};

PrbsPolynomial prbs_polynomial(Prbs generator);
std::uint64_t prbs_period(Prbs generator);
Prbs parse_prbs(const std::string& name);
std::string to_string(Prbs generator);

struct BitSource {
  Prbs generator = Prbs::prbs15;
  std::uint32_t seed = 0x7FFF;
  std::size_t length_bits = 10000;
};

/// Fibonacci LFSR output. Bit j of `seed` is the output emitted j+1 steps
/// before the first returned bit.
std::vector<std::uint8_t> generate_bits(const BitSource& src);

// ---------------------------------------------------------------------------
// Constellation

/// Gray-coded M-PSK with unit symbol energy. QPSK sits on odd multiples of 45°.
class ModulationScheme {
 public:
  static ModulationScheme psk(int order);
  static ModulationScheme qpsk() { return psk(4); }
  static ModulationScheme parse(const std::string& name);

  int order() const { return order_; }
  int bits_per_symbol() const { return bits_; }
  double phase_offset_rad() const { return offset_; }
  std::string name() const;

  /// Point for the bit pattern `value` (MSB first).
  std::complex<double> point(unsigned value) const { return points_[value]; }
  const std::vector<std::complex<double>>& points() const { return points_; }

  /// s^M for any constellation point; the modulation-stripped constant.
  std::complex<double> stripped_constant() const { return std::pow(points_[0], order_); }

  /// Nearest-point bit pattern.
  unsigned decide(std::complex<double> z) const;

 private:
  ModulationScheme(int order);

  int order_ = 4;
  int bits_ = 2;
  double offset_ = 0.0;
  std::vector<std::complex<double>> points_;
};

template <typename Scalar = double>
Signal<Scalar> map_symbols(std::span<const std::uint8_t> bits, const ModulationScheme& scheme) {
  const auto k = static_cast<std::size_t>(scheme.bits_per_symbol());
  if (bits.size() % k != 0)
    throw Error(Errc::length, "map_symbols: " + std::to_string(bits.size()) +
                                  " bits not divisible by " + std::to_string(k));
  Signal<Scalar> out(static_cast<Eigen::Index>(bits.size() / k));
  for (Eigen::Index s = 0; s < out.size(); ++s) {
    unsigned value = 0;
    for (std::size_t b = 0; b < k; ++b) {
      const auto bit = bits[static_cast<std::size_t>(s) * k + b];
      if (bit > 1) throw Error(Errc::parameter, "map_symbols: bit values must be 0 or 1");
      value = (value << 1) | bit;
    }
    out[s] = std::complex<Scalar>(scheme.point(value));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pulse shaping

struct PulseShape {
  double rolloff = 0.25;
  std::size_t span_symbols = 32;
  std::size_t samples_per_symbol = 4;

  std::size_t tap_count() const { return span_symbols * samples_per_symbol + 1; }
  std::size_t group_delay() const { return span_symbols * samples_per_symbol / 2; }

  void validate() const {
    if (samples_per_symbol < 2)
      throw Error(Errc::aliasing, "pulse shape: samples_per_symbol must be >= 2");
    if (!(rolloff > 0.0 && rolloff <= 1.0))
      throw Error(Errc::parameter, "pulse shape: rolloff must lie in (0, 1]");
    if (span_symbols == 0 || (span_symbols * samples_per_symbol) % 2 != 0)
      throw Error(Errc::parameter, "pulse shape: span_symbols * samples_per_symbol must be even and nonzero");
  }
};

inline double occupied_bandwidth_hz(const PulseShape& shape, double symbol_rate_hz) {
  return symbol_rate_hz * (1.0 + shape.rolloff);
}

/// One-sided Nyquist bandwidth R/2; the B_T of the 2·B_T·log2(M) rate formula.
inline double nyquist_bandwidth_hz(double symbol_rate_hz) { return symbol_rate_hz / 2.0; }

/// Root-raised-cosine taps, unit energy, symmetric.
template <typename Scalar = double>
RealVector<Scalar> rrc_taps(const PulseShape& shape) {
  shape.validate();
  const auto n_taps = static_cast<Eigen::Index>(shape.tap_count());
  const double beta = shape.rolloff;
  const double sps = double(shape.samples_per_symbol);
  const auto half = static_cast<double>(shape.group_delay());
  const double pi = std::numbers::pi;

  Eigen::VectorXd h(n_taps);
  for (Eigen::Index n = 0; n < n_taps; ++n) {
    const double t = (double(n) - half) / sps;
    if (t == 0.0) {
      h[n] = 1.0 - beta + 4.0 * beta / pi;
    } else if (std::abs(std::abs(t) - 1.0 / (4.0 * beta)) < 1e-12) {
      h[n] = beta / std::sqrt(2.0) *
             ((1.0 + 2.0 / pi) * std::sin(pi / (4.0 * beta)) + (1.0 - 2.0 / pi) * std::cos(pi / (4.0 * beta)));
    } else {
      const double x = 4.0 * beta * t;
      h[n] = (std::sin(pi * t * (1.0 - beta)) + x * std::cos(pi * t * (1.0 + beta))) /
             (pi * t * (1.0 - x * x));
    }
  }
  // Enforce exact symmetry before normalising.
  for (Eigen::Index n = 0; n < n_taps / 2; ++n) {
    const double m = 0.5 * (h[n] + h[n_taps - 1 - n]);
    h[n] = m;
    h[n_taps - 1 - n] = m;
  }
  h /= h.norm();
  return h.cast<Scalar>();
}

/// Upsample by samples_per_symbol and filter with the RRC. Output length is
/// (N-1)·sps + tap_count, so a single unit symbol yields the taps themselves.
template <typename Derived>
BasicIqFrame<typename Derived::RealScalar> pulse_shape(const Eigen::MatrixBase<Derived>& symbols,
                                                       const PulseShape& shape, double symbol_rate_hz,
                                                       double center_freq_hz = 0.0) {
  using Scalar = typename Derived::RealScalar;
  if (symbols.size() == 0) throw Error(Errc::length, "pulse_shape: no symbols");
  if (!(symbol_rate_hz > 0.0)) throw Error(Errc::parameter, "pulse_shape: symbol_rate_hz must be > 0");
  const RealVector<Scalar> taps = rrc_taps<Scalar>(shape);
  const auto sps = static_cast<Eigen::Index>(shape.samples_per_symbol);
  const Eigen::Index n_sym = symbols.size();

  BasicIqFrame<Scalar> frame;
  frame.samples = Signal<Scalar>::Zero((n_sym - 1) * sps + taps.size());
  for (Eigen::Index k = 0; k < n_sym; ++k)
    frame.samples.segment(k * sps, taps.size()) += symbols(k) * taps.template cast<std::complex<Scalar>>();
  frame.sample_rate_hz = symbol_rate_hz * double(sps);
  frame.center_freq_hz = center_freq_hz;
  frame.timing = SymbolTiming{shape.group_delay(), shape.samples_per_symbol, static_cast<std::size_t>(n_sym)};
  return frame;
}

}  // namespace thz
