#include "ppe/evalue.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "ppe/betting.hpp"
#include "ppe/diagnostics.hpp"
#include "ppe/rng.hpp"

namespace {

using ppe::ComponentBounds;

TEST(PpiComponent, UncollectedReturnsImputed) {
  EXPECT_DOUBLE_EQ(ppe::ppi_component(0.7, std::nullopt, false, 0.5, {0.7, 1.2}), 0.7);
}

TEST(PpiComponent, FullPropensityRecoversLabel) {
  EXPECT_DOUBLE_EQ(ppe::ppi_component(1.2, 0.8, true, 1.0, {0.5, 1.5}), 0.8);
}

TEST(PpiComponent, CollectedBranch) {
  EXPECT_NEAR(ppe::ppi_component(1.2, 0.8, true, 0.5, {0.7, 1.2}), 0.4, 1e-15);
}

TEST(PpiComponent, RejectsOutOfBoundsInputs) {
  EXPECT_THROW(ppe::ppi_component(2.0, std::nullopt, false, 1.0, {0.5, 1.5}), std::invalid_argument);
  EXPECT_THROW(ppe::ppi_component(1.0, 0.1, true, 1.0, {0.5, 1.5}), std::invalid_argument);
  EXPECT_THROW(ppe::ppi_component(1.0, std::nullopt, true, 1.0, {0.5, 1.5}), std::invalid_argument);
}

TEST(PpiComponent, RejectsPropensityBelowFloor) {
  // 1 - 0.5 / 1.5 = 2/3.
  EXPECT_THROW(ppe::ppi_component(1.0, std::nullopt, false, 0.5, {0.5, 1.5}), std::invalid_argument);
  EXPECT_NO_THROW(ppe::ppi_component(1.0, std::nullopt, false, 2.0 / 3.0, {0.5, 1.5}));
}

TEST(PpiComponent, NonnegativeOnRandomAdmissibleInputs) {
  ppe::CounterRng rng(7, "nonneg");
  for (int i = 0; i < 100000; ++i) {
    const double a = 1e-6 + rng.uniform();
    const double b = a + 5.0 * rng.uniform();
    const double floor = ppe::min_collection_prob(a, b);
    const double pi = floor + (1.0 - floor) * rng.uniform();
    if (!(pi > 0.0)) continue;
    const double e_mu = a + (b - a) * rng.uniform();
    const double e_y = a + (b - a) * rng.uniform();
    ASSERT_GE(ppe::ppi_component(e_mu, e_y, true, pi, {a, b}), 0.0);
  }
}

TEST(PpiComponent, ZeroAtExactFloorCorner) {
  const double a = 0.5;
  const double b = 2.0;
  const double pi = ppe::min_collection_prob(a, b);
  EXPECT_NEAR(ppe::ppi_component(b, a, true, pi, {a, b}), 0.0, 1e-15);
}

TEST(PpiComponent, ConditionalMeanIdentityByEnumeration) {
  ppe::CounterRng rng(11, "enum");
  for (int trial = 0; trial < 200; ++trial) {
    const double a = 0.2 + 0.5 * rng.uniform();
    const double b = 1.0 + 2.0 * rng.uniform();
    const double floor = ppe::min_collection_prob(a, b);
    const double pi = floor + (1.0 - floor) * rng.uniform();
    const double e_mu = a + (b - a) * rng.uniform();
    std::vector<double> ys{a, 1.0, b, a + (b - a) * rng.uniform()};
    std::vector<double> ps{0.1, 0.2, 0.3, 0.4};
    double lhs = 0.0;
    double rhs = 0.0;
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const double mix = pi * ppe::ppi_component(e_mu, ys[j], true, pi, {a, b}) +
                         (1.0 - pi) * ppe::ppi_component(e_mu, std::nullopt, false, pi, {a, b});
      EXPECT_NEAR(mix, ys[j], 1e-12);
      lhs += ps[j] * mix;
      rhs += ps[j] * ys[j];
    }
    EXPECT_NEAR(lhs, rhs, 1e-12);
  }
}

TEST(MinCollectionProb, Examples) {
  EXPECT_DOUBLE_EQ(ppe::min_collection_prob(1.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(ppe::min_collection_prob(0.5, 2.0), 0.75);
  EXPECT_NEAR(ppe::min_collection_prob(0.99, 1.01), 0.019801980198019802, 1e-15);
}

TEST(MinCollectionProb, RejectsBadBounds) {
  EXPECT_THROW(ppe::min_collection_prob(2.0, 1.0), std::invalid_argument);
  EXPECT_THROW(ppe::min_collection_prob(0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(ppe::min_collection_prob(-1.0, 1.0), std::invalid_argument);
}

TEST(Stream, AdvanceMultipliesInLogSpace) {
  ppe::PpiStream s;
  s = ppe::advance(s, 1.0, false);
  EXPECT_DOUBLE_EQ(s.e_value(), 1.0);
  ppe::PpiStream t;
  t.log_e = std::log(2.0);
  t = ppe::advance(t, 0.5, true);
  EXPECT_NEAR(t.e_value(), 1.0, 1e-15);
  EXPECT_EQ(t.labels_used, 1u);
}

TEST(Stream, ThreeStepProduct) {
  ppe::PpiStream s;
  double linear = 1.0;
  for (double c : {1.5, 0.4, 2.0}) {
    s = ppe::advance(s, c, false);
    linear *= c;
  }
  EXPECT_NEAR(s.e_value(), 1.2, 1e-14);
  EXPECT_NEAR(s.e_value(), linear, 1e-14);
  EXPECT_EQ(s.n, 3u);
  EXPECT_EQ(s.labels_used, 0u);
}

TEST(Stream, ZeroComponentIsHardFault) {
  EXPECT_THROW(ppe::advance({}, 0.0, true), std::domain_error);
  EXPECT_THROW(ppe::advance({}, std::nan(""), true), std::domain_error);
}

TEST(Stream, StepCountsLabels) {
  const ppe::ComponentSpec spec{[](double y) { return 1.0 + 0.5 * (y - 0.5); }, {0.75, 1.25}};
  ppe::PpiStream s;
  ppe::Observation skip{{}, std::nullopt, false, 1.0};
  ppe::Observation take{{}, 1.0, true, 1.0};
  s = ppe::step(s, skip, spec, 1.0);
  s = ppe::step(s, take, spec, 0.0);
  EXPECT_EQ(s.n, 2u);
  EXPECT_EQ(s.labels_used, 1u);
  EXPECT_NEAR(s.e_value(), 1.25 * 1.25, 1e-14);
}

TEST(Stream, PerfectPredictorCollapsesToLabeledPath) {
  const auto cfg = ppe::MeanBetConfig::from_budget(0.4, 0.05);
  const double lambda = 0.9 * cfg.range().hi;
  const ppe::ComponentSpec spec{[&](double y) { return ppe::mean_component(y, 0.4, lambda); }, cfg.bounds()};
  const double pi = ppe::min_collection_prob(cfg.bounds().lower, cfg.bounds().upper) + ppe::kPolicyFloor;
  ppe::CounterRng rng(3, "collapse");
  ppe::PpiStream ppi;
  ppe::PpiStream labeled;
  for (int i = 0; i < 2000; ++i) {
    const double y = rng.uniform() < 0.55 ? 1.0 : 0.0;
    const bool xi = ppe::draw_xi(pi, rng);
    ppe::Observation obs{{}, xi ? std::optional<double>(y) : std::nullopt, xi, pi};
    ppi = ppe::step(ppi, obs, spec, y);
    labeled = ppe::step(labeled, {{}, y, true, 1.0}, spec, y);
    ASSERT_NEAR(ppi.log_e, labeled.log_e, 1e-12);
  }
}

TEST(DrawXi, Extremes) {
  ppe::CounterRng rng(1, "xi");
  for (int i = 0; i < 1000; ++i) {
    EXPECT_TRUE(ppe::draw_xi(1.0, rng));
    EXPECT_FALSE(ppe::draw_xi(0.0, rng));
  }
}

TEST(DrawXi, EmpiricalRate) {
  ppe::CounterRng rng(2024, "xi");
  int hits = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) hits += ppe::draw_xi(0.3, rng);
  EXPECT_NEAR(static_cast<double>(hits) / n, 0.3, 3.0 * std::sqrt(0.3 * 0.7 / n));
}

TEST(DrawXi, RejectsBadProbability) {
  ppe::CounterRng rng;
  EXPECT_THROW(ppe::draw_xi(1.5, rng), std::invalid_argument);
  EXPECT_THROW(ppe::draw_xi(-0.1, rng), std::invalid_argument);
}

TEST(EvaluateComponent, ClampsAndCounts) {
  ppe::reset_warnings();
  ppe::set_warning_echo(false);
  const ppe::ComponentSpec spec{[](double y) { return y; }, {0.5, 1.5}};
  std::uint64_t clamps = 0;
  EXPECT_DOUBLE_EQ(ppe::evaluate_component(spec, 1.0, clamps), 1.0);
  EXPECT_DOUBLE_EQ(ppe::evaluate_component(spec, 1.5 * (1.0 + 1e-12), clamps), 1.5);
  EXPECT_EQ(clamps, 0u);
  EXPECT_DOUBLE_EQ(ppe::evaluate_component(spec, 2.0, clamps), 1.5);
  EXPECT_EQ(clamps, 1u);
  EXPECT_EQ(ppe::warning_count(ppe::WarningKind::component_clamped), 1u);
  ppe::set_warning_echo(true);
}

TEST(StreamRecord, JsonRoundTrip) {
  ppe::PpiStream s;
  s.rng = ppe::CounterRng(99, "record");
  s = ppe::advance(s, 1.7, true);
  s = ppe::advance(s, 0.9, false);
  s.rng();
  const auto doc = ppe::to_json(s);
  EXPECT_EQ(doc.at("version").get<int>(), ppe::kStreamRecordVersion);
  const auto back = ppe::stream_from_json(doc);
  EXPECT_EQ(back.log_e, s.log_e);
  EXPECT_EQ(back.n, s.n);
  EXPECT_EQ(back.labels_used, s.labels_used);
  EXPECT_EQ(back.rng, s.rng);
}

TEST(StreamRecord, RejectsUnknownVersion) {
  auto doc = ppe::to_json(ppe::PpiStream{});
  doc["version"] = 99;
  EXPECT_THROW(ppe::stream_from_json(doc), std::invalid_argument);
}

} // namespace
