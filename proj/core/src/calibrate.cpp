#include "ppe/calibrate.hpp"

#include <cmath>
#include <stdexcept>

#include "ppe/diagnostics.hpp"

namespace ppe {

namespace {
// Below this distance from 1 the direct formula cancels catastrophically.
constexpr double kSeriesThreshold = 1e-6;
} // namespace

CalibratorConfig CalibratorConfig::for_budget(double pi_inf) {
  CalibratorConfig cfg;
  cfg.e_min = ptoe(1.0);
  cfg.e_max = ptoe(cfg.p_floor);
  cfg.eta = solve_eta_for_budget(cfg.e_min, cfg.e_max, pi_inf);
  return cfg;
}

ComponentBounds CalibratorConfig::rescaled_bounds() const {
  return {rescale(e_min, eta), rescale(e_max, eta)};
}

double ptoe(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("ptoe requires p in (0, 1]");
  const double q = 1.0 - p;
  if (q < kSeriesThreshold) return 0.5 + q / 6.0 + q * q / 8.0;
  const double lp = std::log(p);
  return (q + p * lp) / (p * lp * lp);
}

double clip_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p-value outside [0, 1]");
  return std::max(p, kPValueFloor);
}

double rescale(double e, double eta) { return eta * (e - 1.0) + 1.0; }

double solve_eta_for_budget(double e_min, double e_max, double pi_inf) {
  if (!(e_min < 1.0 && 1.0 < e_max)) throw std::invalid_argument("need e_min < 1 < e_max");
  if (!(pi_inf > 0.0 && pi_inf <= 1.0)) throw std::invalid_argument("pi_inf must lie in (0, 1]");
  const double eta = pi_inf / ((1.0 - e_min) + (1.0 - pi_inf) * (e_max - 1.0));
  if (eta > 1.0) {
    warn(WarningKind::eta_clamped, "budget admits eta > 1; clamping to 1");
    return 1.0;
  }
  return eta;
}

} // namespace ppe
