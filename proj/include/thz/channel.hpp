#pragma once

#include <span>
#include <vector>

#include "thz/core.hpp"

namespace thz {

/// Reflector path: L = xi + k·a with a = a_ref·(d_R/d_ref)^-eta.
struct ReflectorGeometry {
  double d_r_m = 0.127;
  double xi = 0.0;      // conversion loss
  double k_diff = 1.0;  // plate diffraction coefficient
  double eta = 2.0;     // path-loss exponent
  double a_ref = 1.0;   // propagation term at d_ref_m
  double d_ref_m = 0.1;

  void validate() const;

  /// The propagation term a. Non-increasing in d_R for eta > 0.
  double propagation_loss() const;
};

double path_loss(const ReflectorGeometry& geom);

/// K-path flat channel. LoS profiles carry all-zero delays.
struct MultipathProfile {
  std::vector<double> amplitudes;  // a_i
  std::vector<double> delays_s;    // t_i
  double k = 1.0;
  double carrier_hz = 0.0;

  void validate() const;
  /// Sum of (k·a_i)²; the mean of |h|² under independent uniform phases.
  double mean_power_gain() const;
};

enum class Propagation { los, nlos };

/// Draws fresh U(0, 2π) path phases unless `forced_phases` supplies them.
std::complex<double> channel_coefficient(const MultipathProfile& profile, Propagation mode, Rng& rng,
                                         std::span<const double> forced_phases = {});

struct AlphaMuParams {
  double alpha = 2.0;
  double mu = 1.0;
  double beta = 1.0;  // (E[h^alpha])^(1/alpha)

  void validate() const;
};

double alpha_mu_pdf(double h, const AlphaMuParams& p);
double alpha_mu_cdf(double h, const AlphaMuParams& p);

/// h = beta·(X/mu)^(1/alpha) with X ~ Gamma(mu, 1).
Eigen::VectorXd alpha_mu_sample(const AlphaMuParams& p, std::size_t n, Rng& rng);

/// Regularised incomplete gamma P(a, x) and Q(a, x) = 1 - P(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

}  // namespace thz
