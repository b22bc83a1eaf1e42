#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ppe/harness/predictors.hpp"
#include "ppe/rng.hpp"

namespace ppe::harness {

struct LabeledRow {
  std::vector<double> x;
  double y{0.0};
  double p_true{0.0};  // P(y = 1 | x) under the generator
};

// y ~ Bern(theta), x | y ~ N(+-shift e1, I).
struct MeanStreamSpec {
  double theta{0.3};
  std::size_t dim{2};
  double shift{1.0};
};

LabeledRow draw_mean_row(const MeanStreamSpec& spec, CounterRng& rng);

// x ~ N(0, I), y ~ Bern(sigmoid(scale * w.x)).
struct RiskWorld {
  std::vector<double> w{0.8, -0.5, 0.3, 0.1};
  double scale{4.0};
};

LabeledRow draw_risk_row(const RiskWorld& world, CounterRng& rng);

using FlipSchedule = std::function<double(double)>;

double no_flip(double t);
// clamp((t / 0.5)^2).
double poison_flip_prob(double t);
// 1[t >= 0.3] clamp(((t + 1) / 5 + 0.2)^2).
double changepoint_flip_prob(double t);

// Frozen classifier together with its validation 0-1 loss.
struct MonitoredModel {
  OnlineLogistic f{1};
  double val_risk{0.0};

  double margin(std::span<const double> x) const;
  double classify(std::span<const double> x) const;
};

struct MonitorSplit {
  std::size_t train_rows{2000};
  std::size_t val_rows{2000};
  int epochs{3};
};

MonitoredModel train_monitored_model(const RiskWorld& world, const MonitorSplit& split,
                                     std::uint64_t seed);

// Per-step record of the monitored stream. `features` are (|margin|, t).
struct LossRow {
  std::vector<double> features;
  double loss{0.0};
  double flip{0.0};
};

std::vector<LossRow> make_loss_stream(const RiskWorld& world, const MonitoredModel& model,
                                      std::uint64_t n, const FlipSchedule& schedule,
                                      CounterRng& rng);

} // namespace ppe::harness
