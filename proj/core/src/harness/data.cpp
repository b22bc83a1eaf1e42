#include "ppe/harness/data.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ppe::harness {

LabeledRow draw_mean_row(const MeanStreamSpec& spec, CounterRng& rng) {
  if (!(spec.theta > 0.0 && spec.theta < 1.0)) throw std::invalid_argument("theta must lie in (0, 1)");
  if (spec.dim == 0) throw std::invalid_argument("dimension must be positive");
  LabeledRow row;
  row.y = rng.uniform() < spec.theta ? 1.0 : 0.0;
  row.x.resize(spec.dim);
  for (auto& v : row.x) v = rng.normal();
  row.x[0] += row.y > 0.5 ? spec.shift : -spec.shift;
  row.p_true = sigmoid(logit(spec.theta) + 2.0 * spec.shift * row.x[0]);
  return row;
}

LabeledRow draw_risk_row(const RiskWorld& world, CounterRng& rng) {
  LabeledRow row;
  row.x.resize(world.w.size());
  double z = 0.0;
  for (std::size_t j = 0; j < row.x.size(); ++j) {
    row.x[j] = rng.normal();
    z += world.w[j] * row.x[j];
  }
  row.p_true = sigmoid(world.scale * z);
  row.y = rng.uniform() < row.p_true ? 1.0 : 0.0;
  return row;
}

double no_flip(double) { return 0.0; }

double poison_flip_prob(double t) { return std::clamp((t / 0.5) * (t / 0.5), 0.0, 1.0); }

double changepoint_flip_prob(double t) {
  if (t < 0.3) return 0.0;
  const double v = (t + 1.0) / 5.0 + 0.2;
  return std::clamp(v * v, 0.0, 1.0);
}

double MonitoredModel::margin(std::span<const double> x) const { return f.score(x); }

double MonitoredModel::classify(std::span<const double> x) const { return f.predict(x) >= 0.5 ? 1.0 : 0.0; }

MonitoredModel train_monitored_model(const RiskWorld& world, const MonitorSplit& split,
                                     std::uint64_t seed) {
  CounterRng rng(seed, "monitor");
  std::vector<LabeledRow> train;
  train.reserve(split.train_rows);
  for (std::size_t i = 0; i < split.train_rows; ++i) train.push_back(draw_risk_row(world, rng));
  MonitoredModel model{OnlineLogistic(world.w.size()), 0.0};
  for (int e = 0; e < split.epochs; ++e) {
    for (const auto& row : train) model.f.update(row.x, row.y);
  }
  std::size_t errors = 0;
  for (std::size_t i = 0; i < split.val_rows; ++i) {
    const auto row = draw_risk_row(world, rng);
    if (model.classify(row.x) != row.y) ++errors;
  }
  model.val_risk = static_cast<double>(errors) / static_cast<double>(std::max<std::size_t>(split.val_rows, 1));
  return model;
}

std::vector<LossRow> make_loss_stream(const RiskWorld& world, const MonitoredModel& model,
                                      std::uint64_t n, const FlipSchedule& schedule,
                                      CounterRng& rng) {
  std::vector<LossRow> out;
  out.reserve(n);
  for (std::uint64_t i = 1; i <= n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n);
    auto row = draw_risk_row(world, rng);
    const double flip = schedule(t);
    if (rng.uniform() < flip) row.y = 1.0 - row.y;
    const double pred = model.classify(row.x);
    out.push_back({{std::abs(model.margin(row.x)), t}, pred != row.y ? 1.0 : 0.0, flip});
  }
  return out;
}

} // namespace ppe::harness
