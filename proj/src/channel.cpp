#include "thz/channel.hpp"

#include <unsupported/Eigen/SpecialFunctions>

namespace thz {

void ReflectorGeometry::validate() const {
  if (!(d_r_m > 0.0)) throw Error(Errc::geometry, "reflector: d_R must be > 0");
  if (!(d_ref_m > 0.0)) throw Error(Errc::geometry, "reflector: d_ref must be > 0");
  if (eta < 0.0) throw Error(Errc::geometry, "reflector: eta must be >= 0");
  if (xi < 0.0) throw Error(Errc::geometry, "reflector: xi must be >= 0");
  if (!(k_diff >= 0.0 && k_diff <= 1.0)) throw Error(Errc::geometry, "reflector: k must lie in [0, 1]");
  if (!(a_ref > 0.0)) throw Error(Errc::geometry, "reflector: a_ref must be > 0");
}

double ReflectorGeometry::propagation_loss() const {
  return a_ref * std::pow(d_r_m / d_ref_m, -eta);
}

double path_loss(const ReflectorGeometry& geom) {
  geom.validate();
  const double loss = geom.xi + geom.k_diff * geom.propagation_loss();
  if (!(loss > 0.0)) throw Error(Errc::geometry, "reflector: xi + k·a must be > 0");
  return loss;
}

void MultipathProfile::validate() const {
  if (amplitudes.empty()) throw Error(Errc::empty_profile, "multipath profile: K must be >= 1");
  if (!delays_s.empty() && delays_s.size() != amplitudes.size())
    throw Error(Errc::parameter, "multipath profile: delays and amplitudes differ in length");
  for (double a : amplitudes)
    if (a < 0.0) throw Error(Errc::parameter, "multipath profile: amplitudes must be >= 0");
}

double MultipathProfile::mean_power_gain() const {
  double s = 0.0;
  for (double a : amplitudes) s += (k * a) * (k * a);
  return s;
}

std::complex<double> channel_coefficient(const MultipathProfile& profile, Propagation mode, Rng& rng,
                                         std::span<const double> forced_phases) {
  profile.validate();
  if (!forced_phases.empty() && forced_phases.size() != profile.amplitudes.size())
    throw Error(Errc::parameter, "channel_coefficient: one forced phase per path required");

  std::uniform_real_distribution<double> uniform(0.0, 2.0 * std::numbers::pi);
  std::complex<double> h{0.0, 0.0};
  for (std::size_t i = 0; i < profile.amplitudes.size(); ++i) {
    const double phi = forced_phases.empty() ? uniform(rng) : forced_phases[i];
    double delay_phase = 0.0;
    if (mode == Propagation::nlos && !profile.delays_s.empty())
      delay_phase = -2.0 * std::numbers::pi * profile.carrier_hz * profile.delays_s[i];
    h += profile.k * profile.amplitudes[i] * std::polar(1.0, delay_phase) * std::polar(1.0, phi);
  }
  return h;
}

void AlphaMuParams::validate() const {
  if (!(alpha > 0.0 && mu > 0.0 && beta > 0.0))
    throw Error(Errc::parameter, "alpha-mu: alpha, mu and beta must be > 0");
}

double alpha_mu_pdf(double h, const AlphaMuParams& p) {
  p.validate();
  if (h < 0.0 || std::isnan(h)) throw Error(Errc::domain, "alpha_mu_pdf: h must be >= 0");
  const double am = p.alpha * p.mu;
  if (h == 0.0) {
    if (am > 1.0) return 0.0;
    if (am < 1.0) return std::numeric_limits<double>::infinity();
    return p.alpha * std::pow(p.mu, p.mu) / (p.beta * std::tgamma(p.mu));
  }
  const double r = h / p.beta;
  const double log_f = std::log(p.alpha) + p.mu * std::log(p.mu) + (am - 1.0) * std::log(r) -
                       p.mu * std::pow(r, p.alpha) - std::log(p.beta) - std::lgamma(p.mu);
  return std::exp(log_f);
}

double alpha_mu_cdf(double h, const AlphaMuParams& p) {
  p.validate();
  if (h < 0.0 || std::isnan(h)) throw Error(Errc::domain, "alpha_mu_cdf: h must be >= 0");
  if (h == 0.0) return 0.0;
  const double x = p.mu * std::pow(h / p.beta, p.alpha);
  // Take the small tail directly rather than 1 - Q.
  return x < p.mu ? gamma_p(p.mu, x) : 1.0 - gamma_q(p.mu, x);
}

Eigen::VectorXd alpha_mu_sample(const AlphaMuParams& p, std::size_t n, Rng& rng) {
  p.validate();
  if (n == 0) throw Error(Errc::parameter, "alpha_mu_sample: n must be >= 1");
  std::gamma_distribution<double> gamma(p.mu, 1.0);
  Eigen::VectorXd out(static_cast<Eigen::Index>(n));
  for (auto& h : out) h = p.beta * std::pow(gamma(rng) / p.mu, 1.0 / p.alpha);
  return out;
}

double gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw Error(Errc::domain, "gamma_p: need a > 0, x >= 0");
  return Eigen::numext::igamma(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw Error(Errc::domain, "gamma_q: need a > 0, x >= 0");
  return Eigen::numext::igammac(a, x);
}

}  // namespace thz
