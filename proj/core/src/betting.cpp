#include "ppe/betting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ppe {

namespace {

double mean_spread(double theta) {
  return std::max(theta / (1.0 - theta), (1.0 - theta) / theta);
}

double risk_spread(double m0) { return std::max(1.0 / m0 - 1.0, 0.0); }

void check_theta(double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in (0, 1)");
}

void check_budget(double pi_inf) {
  if (!(pi_inf > 0.0 && pi_inf <= 1.0)) throw std::invalid_argument("pi_inf must lie in (0, 1]");
}

} // namespace

MeanBetConfig MeanBetConfig::from_budget(double theta, double pi_inf) {
  return {theta, solve_c_mean(theta, pi_inf), pi_inf};
}

MeanBetConfig MeanBetConfig::untruncated(double theta) {
  check_theta(theta);
  return {theta, 1.0, 1.0};
}

BetRange MeanBetConfig::range() const { return {-c / (1.0 - theta), c / theta}; }

ComponentBounds MeanBetConfig::bounds() const { return mean_component_bounds(theta, c); }

RiskBetConfig RiskBetConfig::from_budget(double m0, double pi_inf) {
  return {m0, solve_c_risk(m0, pi_inf), pi_inf};
}

RiskBetConfig RiskBetConfig::untruncated(double m0) {
  if (!(m0 > 0.0)) throw std::invalid_argument("m0 must be positive");
  return {m0, 1.0, 1.0};
}

BetRange RiskBetConfig::range() const { return {0.0, c / m0}; }

ComponentBounds RiskBetConfig::bounds() const { return risk_component_bounds(m0, c); }

void BetState::update(double z) {
  ++count;
  const double delta = z - running_mean;
  running_mean += delta / static_cast<double>(count);
  running_m2 += delta * (z - running_mean);
}

double BetState::mean_with_prior(double prior_mean) const {
  const auto n = static_cast<double>(count);
  return (prior_mean + n * running_mean) / (n + 1.0);
}

double BetState::variance_with_prior() const {
  return (kPriorVariance + running_m2) / (static_cast<double>(count) + 1.0);
}

double mean_component(double z, double theta, double lambda) {
  check_theta(theta);
  if (!(lambda > -1.0 / (1.0 - theta) && lambda < 1.0 / theta)) {
    throw std::invalid_argument("bet outside (-1/(1-theta), 1/theta)");
  }
  return 1.0 + lambda * (z - theta);
}

ComponentBounds mean_component_bounds(double theta, double c) {
  return {1.0 - c, 1.0 + c * mean_spread(theta)};
}

double solve_c_mean(double theta, double pi_inf) {
  check_theta(theta);
  check_budget(pi_inf);
  return pi_inf / (1.0 + (1.0 - pi_inf) * mean_spread(theta));
}

double risk_component(double loss, double m0, double lambda) {
  if (!(m0 > 0.0)) throw std::invalid_argument("m0 must be positive");
  if (!(lambda >= 0.0 && lambda < 1.0 / m0)) throw std::invalid_argument("bet outside [0, 1/m0)");
  return 1.0 + lambda * (loss - m0);
}

ComponentBounds risk_component_bounds(double m0, double c) {
  return {1.0 - c, 1.0 + c * risk_spread(m0)};
}

double solve_c_risk(double m0, double pi_inf) {
  if (!(m0 > 0.0)) throw std::invalid_argument("m0 must be positive");
  check_budget(pi_inf);
  return pi_inf / (1.0 + (1.0 - pi_inf) * risk_spread(m0));
}

double agrapa_bet(double mean, double var, double theta, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("empty bet range");
  const double margin = kBetMarginRel * (hi - lo);
  const double diff = mean - theta;
  const double denom = var + diff * diff;
  const double raw = denom > 0.0 ? diff / denom : 0.0;
  return std::clamp(raw, lo + margin, hi - margin);
}

double agrapa_bet(const BetState& state, double theta, double lo, double hi) {
  return agrapa_bet(state.mean_with_prior(theta), state.variance_with_prior(), theta, lo, hi);
}

double agrapa_bet_one_sided(const BetState& state, double m0, double hi) {
  if (!(hi > 0.0)) throw std::invalid_argument("empty bet range");
  const double margin = kBetMarginRel * hi;
  const double diff = state.mean_with_prior(m0) - m0;
  const double denom = state.variance_with_prior() + diff * diff;
  return std::clamp(diff / denom, 0.0, hi - margin);
}

} // namespace ppe
