#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ppe/evalue.hpp"
#include "ppe/rng.hpp"

namespace ppe {

enum class PolicyMode { constant, approx_optimal };

struct PolicyConfig {
  double pi_inf{1.0};
  double taylor_a{1.5};
  PolicyMode mode{PolicyMode::constant};
};

double constant_policy(double pi_inf, std::span<const double> x);

// Second-order expansion coefficients of h(t) = 1/t + log t around a.
struct TaylorCoeffs {
  double alpha{0.0};
  double beta{0.0};
};

TaylorCoeffs taylor_coeffs(double a);

enum class PolicyBranch {
  unconstrained,  // interior KKT solution
  floor,          // pinned at pi_inf
  full,           // pinned at 1
  fallback,       // beta == 0, constant policy used
};

struct PolicyDecision {
  double pi{1.0};
  PolicyBranch branch{PolicyBranch::full};
};

// Approximately log-optimal collection probability given
// r = E[e(Y) | X] / e(mu(X)).
PolicyDecision approx_optimal_pi(double r, const TaylorCoeffs& coeffs, double pi_inf);

// Finite predictive distribution over outcome values.
struct DiscreteDistribution {
  std::vector<double> values;
  std::vector<double> probs;
};

// sum_y P(y|x) e(y) / e(mu(x)), exact for discrete predictors.
double ratio_estimate(const DiscreteDistribution& predictive, const ComponentSpec& component,
                      double mu_x);

inline constexpr int kMinRatioSamples = 256;

// Monte Carlo version for sampleable predictors.
double ratio_estimate(const std::function<double(CounterRng&)>& sampler,
                      const ComponentSpec& component, double mu_x, CounterRng& rng,
                      int samples = kMinRatioSamples);

} // namespace ppe
