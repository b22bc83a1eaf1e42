#pragma once

#include <cstdint>

#include "ppe/evalue.hpp"

namespace ppe {

// Open interval of admissible bets.
struct BetRange {
  double lo{0.0};
  double hi{0.0};
};

// Two-sided bounded-mean bet for the null "mean = theta", truncated by c.
struct MeanBetConfig {
  double theta{0.5};
  double c{1.0};
  double pi_inf{1.0};

  static MeanBetConfig from_budget(double theta, double pi_inf);
  static MeanBetConfig untruncated(double theta);

  BetRange range() const;
  ComponentBounds bounds() const;
};

// One-sided risk bet for the null "risk <= m0", truncated by c.
struct RiskBetConfig {
  double m0{0.5};
  double c{1.0};
  double pi_inf{1.0};

  static RiskBetConfig from_budget(double m0, double pi_inf);
  static RiskBetConfig untruncated(double m0);

  BetRange range() const;
  ComponentBounds bounds() const;
};

// Welford sufficient statistics for aGRAPA.
struct BetState {
  std::uint64_t count{0};
  double running_mean{0.0};
  double running_m2{0.0};

  void update(double z);

  // Estimates shrunk towards one pseudo-observation at `prior_mean` with
  // variance 1/4.
  double mean_with_prior(double prior_mean) const;
  double variance_with_prior() const;
};

inline constexpr double kPriorVariance = 0.25;
inline constexpr double kBetMarginRel = 1e-9;

// 1 + lambda (z - theta).
double mean_component(double z, double theta, double lambda);
ComponentBounds mean_component_bounds(double theta, double c);
// Truncation level making 1 - a/b equal to pi_inf.
double solve_c_mean(double theta, double pi_inf);

// 1 + lambda (loss - m0).
double risk_component(double loss, double m0, double lambda);
ComponentBounds risk_component_bounds(double m0, double c);
double solve_c_risk(double m0, double pi_inf);

// (mean - theta) / (var + (mean - theta)^2), clamped to [lo + d, hi - d]
// with d = 1e-9 (hi - lo).
double agrapa_bet(double mean, double var, double theta, double lo, double hi);
double agrapa_bet(const BetState& state, double theta, double lo, double hi);

// One-sided variant: clamped to [0, hi - d].
double agrapa_bet_one_sided(const BetState& state, double m0, double hi);

} // namespace ppe
