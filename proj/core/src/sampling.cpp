#include "ppe/sampling.hpp"

#include <cmath>
#include <stdexcept>

#include "ppe/diagnostics.hpp"

namespace ppe {

namespace {
constexpr double kDenominatorGuard = 1e-6;
constexpr double kProbSumTol = 1e-9;

double evaluate_in_domain(const ComponentSpec& component, double y) {
  const double v = component.eval(y);
  const auto& b = component.bounds;
  const double slack = 1e-9 * b.upper;
  if (!(v > 0.0) || !std::isfinite(v) || v < b.lower - slack || v > b.upper + slack) {
    throw std::invalid_argument("predictive support outside the component's domain");
  }
  return v;
}
} // namespace

double constant_policy(double pi_inf, std::span<const double> /*x*/) { return pi_inf; }

TaylorCoeffs taylor_coeffs(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("Taylor expansion point must be positive");
  return {std::log(a) + 2.0 / a - 2.0, (a - 1.0) / (a * a)};
}

PolicyDecision approx_optimal_pi(double r, const TaylorCoeffs& coeffs, double pi_inf) {
  if (!(r > 0.0)) throw std::invalid_argument("ratio estimate must be positive");
  if (!(pi_inf > 0.0 && pi_inf <= 1.0)) throw std::invalid_argument("pi_inf must lie in (0, 1]");
  if (coeffs.beta == 0.0) {
    warn(WarningKind::policy_degenerate, "Taylor point a = 1 gives beta = 0; using constant policy");
    return {pi_inf, PolicyBranch::fallback};
  }
  const double denom = coeffs.alpha / coeffs.beta + 1.0;
  if (std::abs(denom) > kDenominatorGuard) {
    const double u = -(r - 1.0) / denom;
    if (u >= pi_inf && u <= 1.0) return {u, PolicyBranch::unconstrained};
  }
  const double grad = coeffs.alpha + coeffs.beta * (r / pi_inf - (1.0 - pi_inf) / pi_inf);
  if (grad <= 0.0) return {pi_inf, PolicyBranch::floor};
  return {1.0, PolicyBranch::full};
}

double ratio_estimate(const DiscreteDistribution& predictive, const ComponentSpec& component,
                      double mu_x) {
  if (predictive.values.size() != predictive.probs.size() || predictive.values.empty()) {
    throw std::invalid_argument("malformed predictive distribution");
  }
  double total = 0.0;
  double expected = 0.0;
  for (std::size_t k = 0; k < predictive.values.size(); ++k) {
    const double p = predictive.probs[k];
    if (p < 0.0) throw std::invalid_argument("negative predictive probability");
    total += p;
    if (p > 0.0) expected += p * evaluate_in_domain(component, predictive.values[k]);
  }
  if (std::abs(total - 1.0) > kProbSumTol) {
    throw std::invalid_argument("predictive probabilities do not sum to one");
  }
  return expected / evaluate_in_domain(component, mu_x);
}

double ratio_estimate(const std::function<double(CounterRng&)>& sampler,
                      const ComponentSpec& component, double mu_x, CounterRng& rng,
                      int samples) {
  if (samples < kMinRatioSamples) throw std::invalid_argument("too few Monte Carlo samples");
  double acc = 0.0;
  for (int s = 0; s < samples; ++s) acc += evaluate_in_domain(component, sampler(rng));
  return acc / samples / evaluate_in_domain(component, mu_x);
}

} // namespace ppe
