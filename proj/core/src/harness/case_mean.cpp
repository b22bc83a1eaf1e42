#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ppe/harness/cases.hpp"
#include "ppe/harness/csv.hpp"
#include "ppe/sampling.hpp"

namespace ppe::harness {

namespace {

struct ArmRuntime {
  MeanArmOutcome out;
  bool active{false};
  bool hard_imputation{false};
  OnlineLogistic model;
};

LandscapeArm arm_kind(const std::string& name) {
  if (name == "labels_only") return LandscapeArm::labels_only;
  if (name == "ppi" || name == "active") return LandscapeArm::prediction_powered;
  if (name == "imputation") return LandscapeArm::imputation;
  throw std::invalid_argument("unknown mean arm '" + name + "'");
}

// Collection probability of the active arm, evaluated at the grid point
// closest to the arm's current mean estimate.
double active_pi(const ThetaGrid& grid, const PLandscape& land, const TaylorCoeffs& coeffs,
                 double p_hat, double mu) {
  const auto& bets = land.bets();
  const double centre = bets.count > 0 ? bets.running_mean : 0.5;
  const std::size_t k = grid.nearest(centre);
  const double theta = grid.points()[k];
  const auto& r = grid.truncated_range(k);
  const double lambda = agrapa_bet(bets, theta, r.lo, r.hi);
  const double ratio = (1.0 + lambda * (p_hat - theta)) / (1.0 + lambda * (mu - theta));
  return approx_optimal_pi(ratio, coeffs, grid.policy_floor()).pi;
}

} // namespace

const MeanArmOutcome& MeanRunResult::arm(const std::string& name) const {
  for (const auto& a : arms) {
    if (a.name == name) return a;
  }
  throw std::out_of_range("no arm named '" + name + "'");
}

std::vector<LabeledRow> synthetic_mean_rows(const MeanStreamSpec& spec, std::uint64_t n,
                                            std::uint64_t seed) {
  CounterRng rng(seed, "mean-data");
  std::vector<LabeledRow> rows;
  rows.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) rows.push_back(draw_mean_row(spec, rng));
  return rows;
}

MeanRunResult run_mean_stream(const ThetaGrid& grid, const std::vector<LabeledRow>& rows,
                              const MeanRunOptions& options, std::uint64_t seed) {
  if (rows.empty()) throw std::invalid_argument("empty stream");
  const std::size_t dim = rows.front().x.size();
  const bool biased = options.predictor == "biased";
  if (!biased && options.predictor != "online") throw std::invalid_argument("unknown predictor");

  std::vector<ArmRuntime> arms;
  for (const auto& name : options.arms) {
    ArmRuntime rt{MeanArmOutcome{name, PLandscape(grid.size(), arm_kind(name)), GridSet(grid.size(), true), true, {}},
                  name == "active", name == "active", OnlineLogistic(dim)};
    arms.push_back(std::move(rt));
  }
  const auto coeffs = taylor_coeffs(options.taylor_a);
  CounterRng coin(seed, "mean-coins");
  const std::uint64_t n = std::min<std::uint64_t>(options.n, rows.size());

  for (std::uint64_t i = 0; i < n; ++i) {
    const auto& row = rows[i];
    const double u = coin.uniform();
    for (auto& arm : arms) {
      const double p_hat = biased ? std::clamp(row.p_true + options.predictor_bias, 0.0, 1.0)
                                  : arm.model.predict(row.x);
      const double mu = arm.hard_imputation ? (p_hat >= 0.5 ? 1.0 : 0.0) : p_hat;
      const double pi = arm.active ? active_pi(grid, arm.out.landscape, coeffs, p_hat, mu)
                                   : grid.policy_floor();
      const bool xi = u < pi;
      LandscapeStep step{mu, xi ? std::optional<double>(row.y) : std::nullopt, xi, pi};
      arm.out.landscape.update(grid, step);
      intersect_in_place(arm.out.running, invert(arm.out.landscape, options.alpha));
      if (options.track) arm.out.track_covered = arm.out.track_covered && arm.out.running[*options.track];
      if (options.record_labels) arm.out.labels.push_back(arm.out.landscape.labels_used());
      if (!biased) {
        if (xi) {
          arm.model.update(row.x, row.y);
        } else {
          arm.model.observe(row.x);
        }
      }
    }
  }

  MeanRunResult result;
  for (auto& arm : arms) result.arms.push_back(std::move(arm.out));
  return result;
}

Json run_case_mean(const StreamConfig& config) {
  config.validate();
  const ThetaGrid grid = ThetaGrid::uniform(config.grid_lo, config.grid_hi, config.grid_size, config.budget);

  Json summary = run_header(config);
  Json replicas = Json::array();
  for (std::size_t r = 0; r < config.replicas; ++r) {
    const std::uint64_t seed = config.seed + r;
    std::vector<LabeledRow> rows;
    std::optional<double> truth;
    if (config.csv_path.empty()) {
      truth = grid.points()[grid.nearest(config.theta)];
      rows = synthetic_mean_rows({*truth, 2, 1.0}, config.n, seed);
    } else {
      if (config.predictor == "biased") throw std::invalid_argument("biased predictor needs synthetic data");
      auto data = ingest_csv(config.csv_path, {config.csv_features, config.csv_label, {0.0, 1.0}});
      if (config.shuffle) shuffle(data, seed);
      for (std::size_t i = 0; i < data.size(); ++i) rows.push_back({data.x[i], data.y[i], 0.0});
    }

    MeanRunOptions opts;
    opts.n = config.n;
    opts.alpha = config.alpha;
    opts.arms = config.arms;
    opts.predictor = config.predictor;
    opts.predictor_bias = config.predictor_bias;
    opts.taylor_a = config.taylor_a;
    if (truth) opts.track = grid.nearest(*truth);
    const auto result = run_mean_stream(grid, rows, opts, seed);

    const auto dir = replica_dir(config, r);
    Json rep;
    rep["seed"] = seed;
    rep["steps"] = std::min<std::uint64_t>(config.n, rows.size());
    if (truth) rep["theta_true"] = *truth;
    Json arms = Json::object();
    for (const auto& arm : result.arms) {
      write_text(dir / ("landscape_" + arm.name + ".csv"), landscape_csv(grid, arm.landscape));
      Json a;
      a["labels_used"] = arm.landscape.labels_used();
      a["final_set"] = set_summary(grid, invert(arm.landscape, config.alpha));
      a["running_set"] = set_summary(grid, arm.running);
      if (truth) a["covers_truth_throughout"] = arm.track_covered;
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
