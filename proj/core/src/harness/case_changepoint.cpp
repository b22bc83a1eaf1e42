#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ppe/harness/cases.hpp"

namespace ppe::harness {

namespace {

constexpr double kEmaWeight = 0.01;

LandscapeArm cp_kind(const std::string& name) {
  if (name == "labels_only") return LandscapeArm::labels_only;
  if (name == "ppi") return LandscapeArm::prediction_powered;
  throw std::invalid_argument("unknown change-point arm '" + name + "'");
}

struct CpArmRuntime {
  std::string name;
  ChangePointConfig config;
  ChangePointState state;
  OnlineLogistic loss_model;
};

} // namespace

const ChangePointArmOutcome& ChangePointRunResult::arm(const std::string& name) const {
  for (const auto& a : arms) {
    if (a.name == name) return a;
  }
  throw std::out_of_range("no arm named '" + name + "'");
}

ChangePointRunResult run_changepoint_stream(const ChangePointRunOptions& options, std::uint64_t seed) {
  ChangePointRunResult result;
  const auto model = train_monitored_model(options.world, options.split, seed);
  result.val_risk = model.val_risk;
  CounterRng data_rng(seed, "cp-data");
  const auto rows = make_loss_stream(options.world, model, options.n, options.schedule, data_rng);

  const ThetaGrid grid = ThetaGrid::uniform(options.grid_lo, options.grid_hi, options.grid_size, options.budget);
  const double pi = std::min(1.0, grid.policy_floor());
  const double prior_logit = logit(std::clamp(model.val_risk, 0.01, 0.99));

  std::vector<CpArmRuntime> arms;
  for (const auto& name : options.arms) {
    arms.push_back({name, ChangePointConfig{options.alpha, options.max_active, cp_kind(name)}, ChangePointState{},
                    OnlineLogistic(2, 0.1, prior_logit)});
  }
  std::vector<std::uint64_t> labels(arms.size(), 0);

  CounterRng coin(seed, "cp-coins");
  double ema = rows.empty() ? 0.0 : rows.front().loss;
  for (std::uint64_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const bool xi = coin.uniform() < pi;
    if (options.record_trace) {
      ema = (1.0 - kEmaWeight) * ema + kEmaWeight * row.loss;
      result.ema.push_back(ema);
      if (xi) result.collected_at.push_back(i + 1);
    }
    for (std::size_t a = 0; a < arms.size(); ++a) {
      auto& arm = arms[a];
      if (xi) ++labels[a];
      if (!arm.state.detected) {
        const double p_hat = arm.loss_model.predict(row.features);
        const LandscapeStep step{p_hat, xi ? std::optional<double>(row.loss) : std::nullopt, xi, pi};
        arm.state = cp_step(std::move(arm.state), grid, step, arm.config);
      }
      if (xi) {
        arm.loss_model.update(row.features, row.loss);
      } else {
        arm.loss_model.observe(row.features);
      }
    }
  }

  for (std::size_t a = 0; a < arms.size(); ++a) {
    const auto& st = arms[a].state;
    result.arms.push_back({arms[a].name, st.detected, st.detection_time, st.declared_location, labels[a]});
  }
  return result;
}

Json run_case_changepoint(const StreamConfig& config) {
  config.validate();
  if (!config.csv_path.empty()) throw std::invalid_argument("change-point case runs on the synthetic monitor stream");
  Json summary = run_header(config);
  Json replicas = Json::array();
  for (std::size_t r = 0; r < config.replicas; ++r) {
    const std::uint64_t seed = config.seed + r;
    ChangePointRunOptions opts;
    opts.n = config.n;
    opts.alpha = config.alpha;
    opts.budget = config.budget;
    opts.grid_size = config.grid_size;
    opts.grid_lo = config.grid_lo;
    opts.grid_hi = config.grid_hi;
    opts.max_active = config.max_active;
    opts.arms = config.arms;
    opts.record_trace = true;
    const auto result = run_changepoint_stream(opts, seed);

    const auto dir = replica_dir(config, r);
    std::string trace = "n,ema,collected\n";
    std::size_t next = 0;
    for (std::size_t i = 0; i < result.ema.size(); ++i) {
      const bool hit = next < result.collected_at.size() && result.collected_at[next] == i + 1;
      if (hit) ++next;
      trace += std::to_string(i + 1) + "," + format_double(result.ema[i]) + "," + (hit ? "1" : "0") + "\n";
    }
    write_text(dir / "trace.csv", trace);

    Json rep;
    rep["seed"] = seed;
    rep["val_risk"] = result.val_risk;
    rep["true_change"] = static_cast<std::uint64_t>(std::ceil(opts.change_time * static_cast<double>(opts.n)));
    Json arms = Json::object();
    for (const auto& arm : result.arms) {
      Json a;
      a["labels_used"] = arm.labels_used;
      a["detected"] = arm.detected;
      a["detection_time"] = arm.detected ? Json(arm.detection_time) : Json(nullptr);
      a["declared_location"] = arm.detected ? Json(arm.declared_location) : Json(nullptr);
      arms[arm.name] = a;
    }
    rep["arms"] = arms;
    replicas.push_back(rep);
  }
  summary["replicas"] = replicas;
  write_json(std::filesystem::path(config.out_dir) / "summary.json", summary);
  return summary;
}

} // namespace ppe::harness
