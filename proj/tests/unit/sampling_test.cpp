#include "ppe/sampling.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "ppe/diagnostics.hpp"

namespace {

TEST(ConstantPolicy, ReturnsBudget) {
  const std::vector<double> x{0.3, -1.0};
  EXPECT_DOUBLE_EQ(ppe::constant_policy(0.01, x), 0.01);
  EXPECT_DOUBLE_EQ(ppe::constant_policy(1.0, x), 1.0);
  EXPECT_DOUBLE_EQ(ppe::constant_policy(0.005, {}), 0.005);
}

TEST(TaylorCoeffs, Examples) {
  const auto one = ppe::taylor_coeffs(1.0);
  EXPECT_DOUBLE_EQ(one.alpha, 0.0);
  EXPECT_DOUBLE_EQ(one.beta, 0.0);
  const auto two = ppe::taylor_coeffs(2.0);
  EXPECT_NEAR(two.alpha, -0.306852819440054691, 1e-15);
  EXPECT_DOUBLE_EQ(two.beta, 0.25);
  const auto e = ppe::taylor_coeffs(std::numbers::e);
  EXPECT_NEAR(e.alpha, -0.264241117657115357, 1e-15);
  EXPECT_NEAR(e.beta, 0.232544157934829630, 1e-15);
  EXPECT_THROW(ppe::taylor_coeffs(0.0), std::invalid_argument);
}

TEST(ApproxOptimalPi, Examples) {
  const auto c2 = ppe::taylor_coeffs(2.0);
  const auto floor = ppe::approx_optimal_pi(1.0, c2, 0.1);
  EXPECT_DOUBLE_EQ(floor.pi, 0.1);
  EXPECT_EQ(floor.branch, ppe::PolicyBranch::floor);
  EXPECT_DOUBLE_EQ(ppe::approx_optimal_pi(3.0, c2, 1.0).pi, 1.0);
  const auto full = ppe::approx_optimal_pi(5.0, c2, 0.1);
  EXPECT_DOUBLE_EQ(full.pi, 1.0);
  EXPECT_EQ(full.branch, ppe::PolicyBranch::full);
}

TEST(ApproxOptimalPi, DegenerateFallsBackWithWarning) {
  ppe::reset_warnings();
  ppe::set_warning_echo(false);
  const auto d = ppe::approx_optimal_pi(2.0, ppe::taylor_coeffs(1.0), 0.2);
  EXPECT_DOUBLE_EQ(d.pi, 0.2);
  EXPECT_EQ(d.branch, ppe::PolicyBranch::fallback);
  EXPECT_EQ(ppe::warning_count(ppe::WarningKind::policy_degenerate), 1u);
  ppe::set_warning_echo(true);
}

TEST(ApproxOptimalPi, RangeAndExactlyOneBranch) {
  ppe::CounterRng rng(31, "policy");
  std::size_t counts[3] = {0, 0, 0};
  for (int i = 0; i < 100000; ++i) {
    const double a = 0.05 + 5.0 * rng.uniform();
    if (std::abs(a - 1.0) < 1e-3) continue;
    const double r = std::exp(6.0 * rng.uniform() - 3.0);
    const double pi_inf = 0.001 + 0.999 * rng.uniform();
    const auto d = ppe::approx_optimal_pi(r, ppe::taylor_coeffs(a), pi_inf);
    ASSERT_GE(d.pi, pi_inf);
    ASSERT_LE(d.pi, 1.0);
    ASSERT_NE(d.branch, ppe::PolicyBranch::fallback);
    ++counts[static_cast<int>(d.branch)];
  }
  EXPECT_GT(counts[0], 0u);
  EXPECT_GT(counts[1], 0u);
  EXPECT_GT(counts[2], 0u);
}

TEST(RatioEstimate, Examples) {
  const ppe::ComponentSpec spec{[](double y) { return 0.5 + y; }, {0.5, 1.5}};
  EXPECT_DOUBLE_EQ(ppe::ratio_estimate({{0.3}, {1.0}}, spec, 0.3), 1.0);
  // mu(x) = 1 gives e(mu) = 1.5.
  EXPECT_NEAR(ppe::ratio_estimate({{0.0, 1.0}, {0.5, 0.5}}, spec, 1.0), 2.0 / 3.0, 1e-15);
  const ppe::ComponentSpec flat{[](double) { return 1.0; }, {1.0, 1.0}};
  EXPECT_DOUBLE_EQ(ppe::ratio_estimate({{0.0, 1.0}, {0.2, 0.8}}, flat, 0.6), 1.0);
}

TEST(RatioEstimate, RejectsSupportOutsideDomain) {
  const ppe::ComponentSpec spec{[](double y) { return 0.5 + y; }, {0.5, 1.5}};
  EXPECT_THROW(ppe::ratio_estimate({{0.0, 2.0}, {0.5, 0.5}}, spec, 0.5), std::invalid_argument);
  EXPECT_THROW(ppe::ratio_estimate({{0.0, 1.0}, {0.5, 0.6}}, spec, 0.5), std::invalid_argument);
}

TEST(RatioEstimate, MonteCarloMatchesEnumeration) {
  const ppe::ComponentSpec spec{[](double y) { return 0.5 + y; }, {0.5, 1.5}};
  ppe::CounterRng rng(3, "ratio");
  const auto sampler = [](ppe::CounterRng& r) { return r.uniform() < 0.7 ? 1.0 : 0.0; };
  const double mc = ppe::ratio_estimate(sampler, spec, 0.5, rng, 100000);
  const double exact = ppe::ratio_estimate({{0.0, 1.0}, {0.3, 0.7}}, spec, 0.5);
  // Sample sd of e(Y) is sqrt(0.21); three standard errors.
  EXPECT_NEAR(mc, exact, 3.0 * std::sqrt(0.21 / 100000.0));
  EXPECT_THROW(ppe::ratio_estimate(sampler, spec, 0.5, rng, 10), std::invalid_argument);
}

TEST(Budget, RealizedRateMatchesConstantPolicy) {
  ppe::CounterRng rng(41, "budget");
  const double pi_inf = 0.01;
  const int n = 100000;
  int labels = 0;
  for (int i = 0; i < n; ++i) labels += ppe::draw_xi(ppe::constant_policy(pi_inf, {}), rng);
  EXPECT_NEAR(static_cast<double>(labels) / n, pi_inf, 3.0 * std::sqrt(pi_inf * (1 - pi_inf) / n));
}

} // namespace
