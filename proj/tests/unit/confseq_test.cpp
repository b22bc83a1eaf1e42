#include "ppe/confseq.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "ppe/betting.hpp"
#include "ppe/rng.hpp"

namespace {

std::vector<double> logs(std::initializer_list<double> es) {
  std::vector<double> out;
  for (double e : es) out.push_back(std::log(e));
  return out;
}

TEST(Invert, AllOnesKeepsGrid) {
  const auto set = ppe::invert(std::vector<double>(9, 0.0), 0.05);
  EXPECT_EQ(set, ppe::GridSet(9, true));
}

TEST(Invert, SinglePointSurvives) {
  auto l = logs({25, 25, 25, 1, 25});
  const ppe::GridSet want{false, false, false, true, false};
  EXPECT_EQ(ppe::invert(l, 0.05), want);
}

TEST(Invert, ElementwiseThreshold) {
  const auto l = logs({30, 18, 5, 1, 2, 9, 21, 40, 100});
  const ppe::GridSet want{false, true, true, true, true, true, false, false, false};
  EXPECT_EQ(ppe::invert(l, 0.05), want);
}

TEST(RunningIntersection, Examples) {
  const ppe::GridSet abc{true, true, true};
  const ppe::GridSet bc{false, true, true};
  const ppe::GridSet b{false, true, false};
  const ppe::GridSet a{true, false, false};
  std::vector<ppe::GridSet> one{abc};
  EXPECT_EQ(ppe::running_intersection(one), abc);
  std::vector<ppe::GridSet> chain{abc, bc, b};
  EXPECT_EQ(ppe::running_intersection(chain), b);
  std::vector<ppe::GridSet> pair{a, b};
  EXPECT_TRUE(ppe::is_empty(ppe::running_intersection(pair)));
  EXPECT_TRUE(ppe::disjoint(a, b));
  EXPECT_FALSE(ppe::disjoint(abc, b));
}

TEST(ThetaGrid, UniformFloorMatchesBudget) {
  const auto grid = ppe::ThetaGrid::uniform(0.001, 0.999, 512, 0.01);
  EXPECT_EQ(grid.size(), 512u);
  EXPECT_DOUBLE_EQ(grid.points().front(), 0.001);
  EXPECT_DOUBLE_EQ(grid.points().back(), 0.999);
  EXPECT_NEAR(grid.policy_floor(), 0.01 + ppe::kPolicyFloor, 1e-12);
  EXPECT_EQ(grid.nearest(0.3), grid.nearest(grid.points()[grid.nearest(0.3)]));
  EXPECT_EQ(grid.nearest(-1.0), 0u);
  EXPECT_EQ(grid.nearest(2.0), 511u);
}

struct Stream {
  std::vector<double> y;
  std::vector<double> mu;
};

Stream bernoulli_stream(double theta, double bias, int n, std::uint64_t seed) {
  ppe::CounterRng rng(seed, "cs-stream");
  Stream s;
  for (int i = 0; i < n; ++i) {
    const double p = std::clamp(theta + bias, 0.0, 1.0);
    s.mu.push_back(p);
    s.y.push_back(rng.uniform() < theta ? 1.0 : 0.0);
  }
  return s;
}

TEST(PLandscape, PerfectPredictorCollapsesToLabeled) {
  const auto grid = ppe::ThetaGrid::uniform(0.01, 0.99, 64, 0.01);
  const auto s = bernoulli_stream(0.4, 0.0, 3000, 1);
  ppe::PLandscape ppi(grid.size(), ppe::LandscapeArm::prediction_powered);
  ppe::PLandscape full(grid.size(), ppe::LandscapeArm::prediction_powered);
  ppe::CounterRng coin(2, "coin");
  const double pi = grid.policy_floor();
  for (std::size_t i = 0; i < s.y.size(); ++i) {
    const bool xi = ppe::draw_xi(pi, coin);
    ppi.update(grid, {s.y[i], xi ? std::optional<double>(s.y[i]) : std::nullopt, xi, pi});
    full.update(grid, {s.y[i], s.y[i], true, 1.0});
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    EXPECT_NEAR(ppi.log_e()[k], full.log_e()[k], 1e-12);
  }
}

TEST(PLandscape, FullCollectionMatchesIndependentLabeledOracle) {
  const auto grid = ppe::ThetaGrid::uniform(0.05, 0.95, 19, 0.5);
  const auto s = bernoulli_stream(0.5, 0.2, 500, 3);
  ppe::PLandscape land(grid.size(), ppe::LandscapeArm::prediction_powered);
  for (std::size_t i = 0; i < s.y.size(); ++i) land.update(grid, {s.mu[i], s.y[i], true, 1.0});

  // Oracle: plain aGRAPA betting on labels with the same truncation,
  // accumulated in the linear domain.
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double theta = grid.points()[k];
    const double c = 0.5 / (1.0 + 0.5 * std::max(theta / (1 - theta), (1 - theta) / theta));
    const ppe::BetRange range{-c / (1.0 - theta), c / theta};
    ppe::BetState state;
    double e = 1.0;
    for (double y : s.y) {
      e *= ppe::mean_component(y, theta, ppe::agrapa_bet(state, theta, range.lo, range.hi));
      state.update(y);
    }
    EXPECT_NEAR(land.log_e()[k], std::log(e), 1e-9) << "theta " << theta;
  }
}

TEST(PLandscape, NeutralStepLeavesEntryUnchanged) {
  const std::vector<double> pts{0.5};
  const ppe::ThetaGrid grid(pts, 0.5);
  ppe::PLandscape land(1, ppe::LandscapeArm::prediction_powered);
  land.update(grid, {0.5, 0.5, true, 0.9});
  EXPECT_EQ(land.log_e()[0], 0.0);
  land.update(grid, {0.5, std::nullopt, false, 0.9});
  EXPECT_EQ(land.log_e()[0], 0.0);
}

TEST(PLandscape, LabelsOnlyIgnoresUncollectedSteps) {
  const auto grid = ppe::ThetaGrid::uniform(0.1, 0.9, 9, 0.1);
  ppe::PLandscape land(grid.size(), ppe::LandscapeArm::labels_only);
  land.update(grid, {1.0, std::nullopt, false, 0.2});
  EXPECT_EQ(land.n(), 1u);
  EXPECT_EQ(land.labels_used(), 0u);
  for (double v : land.log_e()) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(land.update(grid, {1.0, std::nullopt, true, 0.2}), std::invalid_argument);
}

TEST(PLandscape, MaskFreezesExcludedEntries) {
  const auto grid = ppe::ThetaGrid::uniform(0.1, 0.9, 9, 0.1);
  ppe::PLandscape land(grid.size(), ppe::LandscapeArm::imputation);
  ppe::GridSet mask(grid.size(), true);
  mask[0] = false;
  for (int i = 0; i < 50; ++i) land.update(grid, {0.8, std::nullopt, false, 0.2}, &mask);
  EXPECT_EQ(land.log_e()[0], 0.0);
  EXPECT_GT(land.log_e()[1], 0.0);
}

TEST(PLandscape, CoverageAndMonotoneIntersection) {
  const double alpha = 0.05;
  const int replicas = 300;
  const auto grid = ppe::ThetaGrid::uniform(0.1, 0.9, 33, 0.01);
  const std::size_t truth = grid.nearest(0.3);
  const double theta = grid.points()[truth];
  int misses = 0;
  for (int r = 0; r < replicas; ++r) {
    const auto s = bernoulli_stream(theta, 0.05, 1000, 100 + r);
    ppe::CounterRng coin(7, "coverage");
    coin = coin.substream(static_cast<std::uint64_t>(r));
    ppe::PLandscape land(grid.size(), ppe::LandscapeArm::prediction_powered);
    ppe::GridSet running(grid.size(), true);
    bool missed = false;
    for (std::size_t i = 0; i < s.y.size(); ++i) {
      const bool xi = ppe::draw_xi(grid.policy_floor(), coin);
      land.update(grid, {s.mu[i], xi ? std::optional<double>(s.y[i]) : std::nullopt, xi,
                         grid.policy_floor()});
      const auto before = running;
      ppe::intersect_in_place(running, ppe::invert(land, alpha));
      for (std::size_t k = 0; k < grid.size(); ++k) ASSERT_TRUE(before[k] || !running[k]);
      if (!running[truth]) missed = true;
    }
    misses += missed;
  }
  const double se = std::sqrt(alpha * (1 - alpha) / replicas);
  EXPECT_LE(static_cast<double>(misses) / replicas, alpha + 3.0 * se);
}

TEST(PLandscape, ImputationMisses) {
  const auto grid = ppe::ThetaGrid::uniform(0.05, 0.95, 19, 0.01);
  const std::size_t truth = grid.nearest(0.3);
  const auto s = bernoulli_stream(0.3, 0.15, 5000, 9);
  ppe::PLandscape imp(grid.size(), ppe::LandscapeArm::imputation);
  ppe::PLandscape ppi(grid.size(), ppe::LandscapeArm::prediction_powered);
  ppe::CounterRng coin(4, "imp");
  for (std::size_t i = 0; i < s.y.size(); ++i) {
    const bool xi = ppe::draw_xi(grid.policy_floor(), coin);
    const ppe::LandscapeStep step{s.mu[i], xi ? std::optional<double>(s.y[i]) : std::nullopt, xi,
                                  grid.policy_floor()};
    imp.update(grid, step);
    ppi.update(grid, step);
    EXPECT_EQ(imp.labels_used(), ppi.labels_used());
  }
  EXPECT_FALSE(ppe::invert(imp, 0.05)[truth]);
  EXPECT_TRUE(ppe::invert(ppi, 0.05)[truth]);
}

TEST(LandscapeCsv, HeaderAndRows) {
  const auto grid = ppe::ThetaGrid::uniform(0.25, 0.75, 3, 1.0);
  ppe::PLandscape land(grid.size(), ppe::LandscapeArm::labels_only);
  std::ostringstream out;
  ppe::write_landscape_csv(out, grid, land);
  EXPECT_EQ(out.str(), "theta,e_value,p_landscape\n0.25,1,1\n0.5,1,1\n0.75,1,1\n");
}

} // namespace
