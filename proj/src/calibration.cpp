#include "thz/calibration.hpp"

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

namespace thz {

namespace {

// Parameters: log xi, logit k, log eta. Keeps every iterate in range.
struct Unpacked {
  double xi, k, eta;
};

Unpacked unpack(const Eigen::VectorXd& p) {
  return {std::exp(p[0]), 1.0 / (1.0 + std::exp(-p[1])), std::exp(p[2])};
}

struct GapFunctor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const ScenarioConfig* los;
  const ScenarioConfig* refl;
  CalibrationTargets targets;

  int inputs() const { return 3; }
  int values() const { return 3; }

  int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& r) const {
    const Unpacked u = unpack(p);
    ScenarioConfig a = *los, b = *refl;
    for (ScenarioConfig* c : {&a, &b}) {
      c->channel.geometry.xi = u.xi;
      c->channel.geometry.k_diff = u.k;
      c->channel.geometry.eta = u.eta;
    }
    r.resize(3);
    r[0] = predicted_snr_db(a) - targets.los_snr_db;
    r[1] = predicted_snr_db(b) - (targets.los_snr_db - targets.gap_db);
    r[2] = targets.eta_prior_weight * (u.eta - targets.eta_prior);
    return 0;
  }
};

double logit(double k) { return std::log(k / (1.0 - k)); }

}  // namespace

CalibrationResult calibrate_reflector(const ScenarioConfig& los, const ScenarioConfig& reflector,
                                      const CalibrationTargets& targets) {
  if (los.channel.mode != ChannelMode::los)
    throw Error(Errc::parameter, "calibrate_reflector: first config must be a LoS scenario");
  if (reflector.channel.mode == ChannelMode::los)
    throw Error(Errc::parameter, "calibrate_reflector: second config must be a reflector scenario");

  const auto& g = reflector.channel.geometry;
  Eigen::VectorXd p(3);
  p << std::log(std::max(g.xi, 1e-3)), logit(std::clamp(g.k_diff, 1e-3, 1.0 - 1e-3)),
      std::log(std::max(g.eta, 1e-2));

  GapFunctor f{&los, &reflector, targets};
  Eigen::NumericalDiff<GapFunctor> numeric(f);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<GapFunctor>> lm(numeric);
  lm.parameters.xtol = 1e-12;
  lm.parameters.ftol = 1e-12;
  lm.parameters.maxfev = 2000;
  const auto status = lm.minimize(p);

  const Unpacked u = unpack(p);
  CalibrationResult out;
  out.xi = u.xi;
  out.k_diff = u.k;
  out.eta = u.eta;
  out.iterations = int(lm.iter);
  out.converged = status == Eigen::LevenbergMarquardtSpace::RelativeReductionTooSmall ||
                  status == Eigen::LevenbergMarquardtSpace::RelativeErrorTooSmall ||
                  status == Eigen::LevenbergMarquardtSpace::RelativeErrorAndReductionTooSmall ||
                  status == Eigen::LevenbergMarquardtSpace::CosinusTooSmall ||
                  status == Eigen::LevenbergMarquardtSpace::XtolTooSmall ||
                  status == Eigen::LevenbergMarquardtSpace::FtolTooSmall;
  out.los_snr_db = predicted_snr_db(with_calibration(los, out));
  out.reflector_snr_db = predicted_snr_db(with_calibration(reflector, out));
  return out;
}

ScenarioConfig with_calibration(ScenarioConfig cfg, const CalibrationResult& fit) {
  cfg.channel.geometry.xi = fit.xi;
  cfg.channel.geometry.k_diff = fit.k_diff;
  cfg.channel.geometry.eta = fit.eta;
  return cfg;
}

}  // namespace thz
