#include "ppe/rng.hpp"

#include <cmath>

#include <gtest/gtest.h>

namespace {

TEST(CounterRng, Deterministic) {
  ppe::CounterRng a(42, "x");
  ppe::CounterRng b(42, "x");
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(CounterRng, StreamsDiffer) {
  ppe::CounterRng a(42, "x");
  ppe::CounterRng b(42, "y");
  ppe::CounterRng c(43, "x");
  EXPECT_NE(a(), b());
  EXPECT_NE(ppe::CounterRng(42, "x")(), c());
}

TEST(CounterRng, ReplayFromState) {
  ppe::CounterRng a(7, "replay");
  for (int i = 0; i < 10; ++i) a();
  auto b = ppe::CounterRng::from_state(a.key(), a.counter());
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a(), b());
}

TEST(CounterRng, SubstreamsAreIndependentOfParentCounter) {
  ppe::CounterRng a(9, "parent");
  const auto s1 = a.substream(3);
  a();
  EXPECT_EQ(a.substream(3), s1);
  EXPECT_NE(a.substream(3), a.substream(4));
  EXPECT_NE(a.substream("u"), a.substream("v"));
}

TEST(CounterRng, UniformMoments) {
  ppe::CounterRng rng(1, "moments");
  const int n = 200000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sum_sq += u * u;
  }
  EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(sum_sq / n - 0.25, 1.0 / 12.0, 2e-3);
}

TEST(CounterRng, NormalMoments) {
  ppe::CounterRng rng(2, "normal");
  const int n = 200000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sum_sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(sum_sq / n, 1.0, 4.0 * std::sqrt(2.0 / n));
}

TEST(Fnv1a, KnownVectors) {
  EXPECT_EQ(ppe::fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(ppe::fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

} // namespace
