#pragma once

#include <vector>

#include "thz/waveform.hpp"

namespace thz {

inline std::complex<double> ipow(std::complex<double> z, int m) {
  std::complex<double> r{1.0, 0.0};
  for (int i = 0; i < m; ++i) r *= z;
  return r;
}

/// RX half of the RRC pair. Uses the frame's group-delay annotation to find
/// symbol instants; an unannotated frame is assumed to start where the TX
/// shaping filter did.
template <typename Scalar>
Signal<Scalar> matched_filter_and_sample(const BasicIqFrame<Scalar>& rx, const PulseShape& shape) {
  shape.validate();
  const auto n_taps = static_cast<Eigen::Index>(shape.tap_count());
  if (rx.samples.size() < n_taps)
    throw Error(Errc::insufficient_data, "matched_filter_and_sample: frame of " + std::to_string(rx.samples.size()) +
                                             " samples is shorter than the " + std::to_string(n_taps) + "-tap filter");

  const auto delay = static_cast<Eigen::Index>(shape.group_delay());
  const auto sps = static_cast<Eigen::Index>(shape.samples_per_symbol);
  Eigen::Index first = delay;
  Eigen::Index count = -1;
  if (rx.timing) {
    if (rx.timing->samples_per_symbol != shape.samples_per_symbol)
      throw Error(Errc::parameter, "matched_filter_and_sample: frame and pulse disagree on samples per symbol");
    first = static_cast<Eigen::Index>(rx.timing->first_sample);
    count = static_cast<Eigen::Index>(rx.timing->count);
  }
  const Eigen::Index last_centre = rx.samples.size() - 1 - delay;
  if (last_centre < first) throw Error(Errc::insufficient_data, "matched_filter_and_sample: no complete symbol");
  const Eigen::Index available = (last_centre - first) / sps + 1;
  count = count < 0 ? available : std::min(count, available);

  const RealVector<Scalar> taps = rrc_taps<Scalar>(shape);
  Signal<Scalar> out(count);
  for (Eigen::Index k = 0; k < count; ++k) {
    const Eigen::Index start = first + k * sps - delay;  // taps are symmetric
    if (start >= 0) {
      out[k] = rx.samples.segment(start, n_taps).transpose() * taps.template cast<std::complex<Scalar>>();
    } else {
      std::complex<Scalar> acc{0, 0};
      for (Eigen::Index j = -start; j < n_taps; ++j) acc += rx.samples[start + j] * taps[j];
      out[k] = acc;
    }
  }
  return out;
}

struct CfoEstimate {
  double hz = 0.0;
  bool ambiguous = false;
};

/// M-th power CFO estimator. The modulation-stripped sequence is coarsely
/// derotated by its lag-1 phase, block-averaged, unwrapped and fitted by least
/// squares. Estimates past half of the ±R/(2M) unambiguous range are flagged:
/// out-of-range offsets alias into that band.
template <typename Derived>
CfoEstimate estimate_cfo(const Eigen::MatrixBase<Derived>& symbols, double symbol_rate_hz,
                         const ModulationScheme& scheme) {
  constexpr Eigen::Index min_symbols = 64;
  constexpr Eigen::Index block = 16;
  const Eigen::Index n = symbols.size();
  if (n < min_symbols) throw Error(Errc::insufficient_data, "estimate_cfo: need at least 64 symbols");
  if (!(symbol_rate_hz > 0.0)) throw Error(Errc::parameter, "estimate_cfo: symbol rate must be > 0");
  const int m = scheme.order();

  std::vector<std::complex<double>> z(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) z[i] = ipow(std::complex<double>(symbols(i)), m);

  std::complex<double> lag{0, 0};
  for (std::size_t i = 1; i < z.size(); ++i) lag += z[i] * std::conj(z[i - 1]);
  const double coarse = std::arg(lag);

  const Eigen::Index n_blocks = n / block;
  Eigen::VectorXd t(n_blocks), phase(n_blocks);
  double prev = 0.0;
  for (Eigen::Index b = 0; b < n_blocks; ++b) {
    std::complex<double> acc{0, 0};
    for (Eigen::Index i = b * block; i < (b + 1) * block; ++i) acc += z[i] * std::polar(1.0, -coarse * double(i));
    double ph = std::arg(acc);
    if (b > 0) {
      while (ph - prev > std::numbers::pi) ph -= 2.0 * std::numbers::pi;
      while (ph - prev < -std::numbers::pi) ph += 2.0 * std::numbers::pi;
    }
    prev = ph;
    phase[b] = ph;
    t[b] = double(b * block) + 0.5 * double(block - 1);
  }
  const double t_mean = t.mean();
  const Eigen::VectorXd dt = t.array() - t_mean;
  const double fine = dt.dot(phase.array().matrix() - Eigen::VectorXd::Constant(n_blocks, phase.mean())) / dt.squaredNorm();

  const double hz = (coarse + fine) * symbol_rate_hz / (2.0 * std::numbers::pi * m);
  const double bound = symbol_rate_hz / (2.0 * m);
  return {hz, std::abs(hz) > 0.5 * bound};
}

/// Removes exp(j2π·cfo·k/R) from a symbol-rate sequence.
template <typename Derived>
Signal<typename Derived::RealScalar> derotate(const Eigen::MatrixBase<Derived>& symbols, double cfo_hz,
                                              double symbol_rate_hz) {
  using Scalar = typename Derived::RealScalar;
  Signal<Scalar> out(symbols.size());
  const double w = 2.0 * std::numbers::pi * cfo_hz / symbol_rate_hz;
  for (Eigen::Index k = 0; k < symbols.size(); ++k)
    out[k] = symbols(k) * std::complex<Scalar>(std::polar(1.0, -w * double(k)));
  return out;
}

template <typename Derived>
Signal<typename Derived::RealScalar> hard_decide(const Eigen::MatrixBase<Derived>& symbols,
                                                 const ModulationScheme& scheme) {
  using Scalar = typename Derived::RealScalar;
  Signal<Scalar> out(symbols.size());
  for (Eigen::Index k = 0; k < symbols.size(); ++k)
    out[k] = std::complex<Scalar>(scheme.point(scheme.decide(std::complex<double>(symbols(k)))));
  return out;
}

template <typename Scalar>
struct EqualizedBurst {
  Signal<Scalar> symbols_measured;
  std::complex<double> h_hat{1.0, 0.0};
  double cfo_hat_hz = 0.0;
  int ambiguity_rotation = 0;  // multiples of 2π/M folded into h_hat
};

struct EqualizerOptions {
  bool decision_directed = false;  // second phase pass against hard decisions
};

/// Blind flat-fading estimate and zero-forcing. Phase from the M-th power
/// average, amplitude from RMS normalisation to unit energy. A nonempty
/// `reference` resolves the M-fold phase ambiguity.
template <typename Scalar>
EqualizedBurst<Scalar> blind_equalize(const Signal<Scalar>& symbols, const ModulationScheme& scheme,
                                      const Signal<Scalar>& reference = Signal<Scalar>(),
                                      EqualizerOptions options = {}) {
  if (symbols.size() < 64) throw Error(Errc::insufficient_data, "blind_equalize: need at least 64 symbols");
  if (reference.size() != 0 && reference.size() != symbols.size())
    throw Error(Errc::length, "blind_equalize: reference length differs from burst length");
  const int m = scheme.order();

  const double power = double(symbols.squaredNorm()) / double(symbols.size());
  if (!(power > 0.0)) throw Error(Errc::estimation, "blind_equalize: all-zero burst");

  std::complex<double> acc{0, 0};
  for (Eigen::Index k = 0; k < symbols.size(); ++k) acc += ipow(std::complex<double>(symbols[k]), m);
  acc *= std::conj(scheme.stripped_constant());
  if (std::abs(acc) == 0.0) throw Error(Errc::estimation, "blind_equalize: M-th power average vanished");

  EqualizedBurst<Scalar> burst;
  burst.h_hat = std::polar(std::sqrt(power), std::arg(acc) / m);
  burst.symbols_measured = symbols / std::complex<Scalar>(burst.h_hat);

  if (options.decision_directed) {
    const Signal<Scalar> d = hard_decide(burst.symbols_measured, scheme);
    const std::complex<double> c = std::complex<double>(d.dot(burst.symbols_measured));  // Σ conj(d)·eq
    burst.h_hat *= std::polar(1.0, std::arg(c));
    burst.symbols_measured = symbols / std::complex<Scalar>(burst.h_hat);
  }

  if (reference.size() != 0) {
    int best_k = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    const std::complex<double> corr = std::complex<double>(reference.dot(burst.symbols_measured));  // Σ conj(ref)·eq
    for (int k = 0; k < m; ++k) {
      const double score = std::real(corr * std::polar(1.0, -2.0 * std::numbers::pi * k / m));
      if (score > best_score) {
        best_score = score;
        best_k = k;
      }
    }
    if (best_k != 0) {
      burst.h_hat *= std::polar(1.0, 2.0 * std::numbers::pi * best_k / m);
      burst.symbols_measured = symbols / std::complex<Scalar>(burst.h_hat);
    }
    burst.ambiguity_rotation = best_k;
  }
  return burst;
}

enum class MetricStage { post_equalization, pre_equalization };

struct ReceiverOptions {
  MetricStage stage = MetricStage::post_equalization;
  bool correct_cfo = true;
  EqualizerOptions equalizer;
};

/// Matched filter -> CFO estimate and removal -> blind ZF equalisation. In
/// pre-equalisation mode the burst is only RMS-normalised (no phase rotation).
template <typename Scalar>
EqualizedBurst<Scalar> receive(const BasicIqFrame<Scalar>& rx, const PulseShape& shape,
                               const ModulationScheme& scheme, const Signal<Scalar>& reference,
                               const ReceiverOptions& options = {}) {
  const double symbol_rate = rx.sample_rate_hz / double(shape.samples_per_symbol);
  Signal<Scalar> y = matched_filter_and_sample(rx, shape);
  if (reference.size() != 0 && reference.size() != y.size())
    throw Error(Errc::length, "receive: recovered " + std::to_string(y.size()) + " symbols, reference has " +
                                  std::to_string(reference.size()));

  CfoEstimate cfo;
  if (options.correct_cfo) {
    cfo = estimate_cfo(y, symbol_rate, scheme);
    y = derotate(y, cfo.hz, symbol_rate);
  }

  EqualizedBurst<Scalar> burst;
  if (options.stage == MetricStage::post_equalization) {
    burst = blind_equalize(y, scheme, reference, options.equalizer);
  } else {
    const double power = double(y.squaredNorm()) / double(y.size());
    if (!(power > 0.0)) throw Error(Errc::estimation, "receive: all-zero burst");
    burst.h_hat = std::sqrt(power);
    burst.symbols_measured = y / std::complex<Scalar>(burst.h_hat);
  }
  burst.cfo_hat_hz = cfo.hz;
  return burst;
}

}  // namespace thz
