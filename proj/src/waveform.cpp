#include "thz/waveform.hpp"

namespace thz {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_seed: return "invalid-seed";
    case Errc::length: return "length";
    case Errc::aliasing: return "aliasing";
    case Errc::parameter: return "parameter";
    case Errc::geometry: return "geometry";
    case Errc::empty_profile: return "empty-profile";
    case Errc::domain: return "domain";
    case Errc::insufficient_data: return "insufficient-data";
    case Errc::estimation: return "estimation";
    case Errc::degenerate: return "degenerate";
    case Errc::incomplete_input: return "incomplete-input";
    case Errc::no_plan: return "no-plan";
    case Errc::config: return "config";
    case Errc::format: return "format";
    case Errc::truncation: return "truncation";
    case Errc::io: return "io";
  }
  return "unknown";
}

PrbsPolynomial prbs_polynomial(Prbs generator) {
  switch (generator) {
    case Prbs::prbs7: return {7, 6};
    case Prbs::prbs9: return {9, 5};
    case Prbs::prbs15: return {15, 14};
    case Prbs::prbs23: return {23, 18};
    case Prbs::prbs31: return {31, 28};
  }
  throw Error(Errc::parameter, "unknown PRBS generator");
}

std::uint64_t prbs_period(Prbs generator) {
  return (std::uint64_t{1} << prbs_polynomial(generator).degree) - 1;
}

Prbs parse_prbs(const std::string& name) {
  if (name == "prbs7") return Prbs::prbs7;
  if (name == "prbs9") return Prbs::prbs9;
  if (name == "prbs15") return Prbs::prbs15;
  if (name == "prbs23") return Prbs::prbs23;
  if (name == "prbs31") return Prbs::prbs31;
  throw Error(Errc::parameter, "unknown PRBS generator '" + name + "'");
}

std::string to_string(Prbs generator) {
  return "prbs" + std::to_string(prbs_polynomial(generator).degree);
}

std::vector<std::uint8_t> generate_bits(const BitSource& src) {
  const auto poly = prbs_polynomial(src.generator);
  const std::uint32_t mask = static_cast<std::uint32_t>((std::uint64_t{1} << poly.degree) - 1);
  std::uint32_t state = src.seed & mask;
  if (state == 0) throw Error(Errc::invalid_seed, "generate_bits: seed must be nonzero in the register width");
  if (src.seed != state)
    throw Error(Errc::invalid_seed, "generate_bits: seed wider than the " + std::to_string(poly.degree) + "-bit register");
  if (src.length_bits > prbs_period(src.generator))
    throw Error(Errc::length, "generate_bits: " + std::to_string(src.length_bits) + " bits exceed the " +
                                  to_string(src.generator) + " period");

  std::vector<std::uint8_t> bits(src.length_bits);
  for (auto& bit : bits) {
    const std::uint32_t fb = ((state >> (poly.degree - 1)) ^ (state >> (poly.tap - 1))) & 1u;
    state = ((state << 1) | fb) & mask;
    bit = static_cast<std::uint8_t>(fb);
  }
  return bits;
}

ModulationScheme::ModulationScheme(int order) : order_(order) {
  bits_ = 0;
  while ((1 << bits_) < order) ++bits_;
  offset_ = order >= 4 ? std::numbers::pi / order : 0.0;
  points_.resize(static_cast<std::size_t>(order));
  for (int k = 0; k < order; ++k) {
    const auto gray = static_cast<unsigned>(k ^ (k >> 1));
    points_[gray] = std::polar(1.0, 2.0 * std::numbers::pi * k / order + offset_);
  }
}

ModulationScheme ModulationScheme::psk(int order) {
  if (order != 2 && order != 4 && order != 8)
    throw Error(Errc::parameter, "modulation: supported PSK orders are 2, 4 and 8");
  return ModulationScheme(order);
}

ModulationScheme ModulationScheme::parse(const std::string& name) {
  if (name == "bpsk") return psk(2);
  if (name == "qpsk") return psk(4);
  if (name == "8psk") return psk(8);
  throw Error(Errc::parameter, "unknown modulation '" + name + "'");
}

std::string ModulationScheme::name() const {
  switch (order_) {
    case 2: return "bpsk";
    case 4: return "qpsk";
    default: return "8psk";
  }
}

unsigned ModulationScheme::decide(std::complex<double> z) const {
  unsigned best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (unsigned v = 0; v < points_.size(); ++v) {
    const double d = std::norm(z - points_[v]);
    if (d < best_d) {
      best_d = d;
      best = v;
    }
  }
  return best;
}

}  // namespace thz
