#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ppe/evalue.hpp"
#include "ppe/harness/cases.hpp"
#include "ppe/sampling.hpp"

namespace ppe::harness {

namespace {

enum class RiskArmKind { labels_only, ppi, active, imputation };

RiskArmKind risk_kind(const std::string& name) {
  if (name == "labels_only") return RiskArmKind::labels_only;
  if (name == "ppi") return RiskArmKind::ppi;
  if (name == "active") return RiskArmKind::active;
  if (name == "imputation") return RiskArmKind::imputation;
  throw std::invalid_argument("unknown risk arm '" + name + "'");
}

struct RiskArmRuntime {
  RiskArmOutcome out;
  RiskArmKind kind;
  BetState bets;
  OnlineLogistic loss_model;
};

} // namespace

const RiskArmOutcome& RiskRunResult::arm(const std::string& name) const {
  for (const auto& a : arms) {
    if (a.name == name) return a;
  }
  throw std::out_of_range("no arm named '" + name + "'");
}

RiskRunResult run_risk_stream(const RiskRunOptions& options, std::uint64_t seed) {
  RiskRunResult result;
  const auto model = train_monitored_model(options.world, options.split, seed);
  result.val_risk = model.val_risk;
  result.m0 = std::min(1.0, model.val_risk + options.eps_tol);
  const double m0 = result.m0;

  CounterRng data_rng(seed, "risk-data");
  const auto rows = make_loss_stream(options.world, model, options.n, options.schedule, data_rng);

  const auto truncated = RiskBetConfig::from_budget(m0, options.budget);
  const auto full = RiskBetConfig::untruncated(m0);
  const auto ppi_bounds = truncated.bounds();
  const double floor_pi = std::min(1.0, min_collection_prob(ppi_bounds.lower, ppi_bounds.upper) + kPolicyFloor);
  const auto coeffs = taylor_coeffs(options.taylor_a);
  const double prior_logit = logit(std::clamp(model.val_risk, 0.01, 0.99));

  std::vector<RiskArmRuntime> arms;
  for (const auto& name : options.arms) {
    arms.push_back({RiskArmOutcome{name, PpiStream{}, 0.0, std::nullopt, {}}, risk_kind(name), BetState{},
                    OnlineLogistic(2, 0.1, prior_logit)});
  }

  CounterRng coin(seed, "risk-coins");
  const double threshold = -std::log(options.alpha);
  for (std::uint64_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const double u = coin.uniform();
    for (auto& arm : arms) {
      const bool truncate = arm.kind == RiskArmKind::ppi || arm.kind == RiskArmKind::active;
      const auto& cfg = truncate ? truncated : full;
      const double lambda = agrapa_bet_one_sided(arm.bets, m0, cfg.range().hi);
      const double p_hat = arm.loss_model.predict(row.features);
      double pi = floor_pi;
      double comp = 1.0;
      bool xi = false;
      switch (arm.kind) {
      case RiskArmKind::labels_only:
        xi = u < pi;
        if (xi) comp = risk_component(row.loss, m0, lambda);
        break;
      case RiskArmKind::imputation:
        xi = u < pi;
        comp = risk_component(xi ? row.loss : p_hat, m0, lambda);
        break;
      case RiskArmKind::ppi:
      case RiskArmKind::active: {
        const double mu = arm.kind == RiskArmKind::active ? (p_hat >= 0.5 ? 1.0 : 0.0) : p_hat;
        const double e_mu = risk_component(mu, m0, lambda);
        if (arm.kind == RiskArmKind::active) {
          const double ratio = risk_component(p_hat, m0, lambda) / e_mu;
          pi = approx_optimal_pi(ratio, coeffs, floor_pi).pi;
        }
        xi = u < pi;
        std::optional<double> e_y;
        if (xi) e_y = risk_component(row.loss, m0, lambda);
        comp = ppi_component(e_mu, e_y, xi, pi, ppi_bounds);
        break;
      }
      }
      arm.out.stream = advance(arm.out.stream, comp, xi);
      arm.out.max_log_e = std::max(arm.out.max_log_e, arm.out.stream.log_e);
      if (!arm.out.rejection_time && arm.out.stream.log_e >= threshold) arm.out.rejection_time = i + 1;
      if (options.record_traces) arm.out.log_trace.push_back(arm.out.stream.log_e);

      if (xi) {
        arm.bets.update(row.loss);
        arm.loss_model.update(row.features, row.loss);
      } else {
        if (arm.kind != RiskArmKind::labels_only) arm.bets.update(p_hat);
        arm.loss_model.observe(row.features);
      }
    }
  }
  for (auto& arm : arms) result.arms.push_back(std::move(arm.out));
  return result;
}

Json run_case_risk(const StreamConfig& config) {
  config.validate();
  if (!config.csv_path.empty()) throw std::invalid_argument("risk case runs on the synthetic monitor stream");
  Json summary = run_header(config);
  Json replicas = Json::array();
  for (std::size_t r = 0; r < config.replicas; ++r) {
    const std::uint64_t seed = config.seed + r;
    const auto dir = replica_dir(config, r);
    Json rep;
    rep["seed"] = seed;
    for (const bool poisoned : {false, true}) {
      RiskRunOptions opts;
      opts.n = config.n;
      opts.alpha = config.alpha;
      opts.budget = config.budget;
      opts.eps_tol = config.eps_tol;
      opts.taylor_a = config.taylor_a;
      opts.arms = config.arms;
      opts.schedule = poisoned ? FlipSchedule(poison_flip_prob) : FlipSchedule(no_flip);
      opts.record_traces = true;
      const auto result = run_risk_stream(opts, seed);
      const std::string tag = poisoned ? "poisoned" : "clean";

      std::vector<std::string> names;
      std::vector<std::vector<double>> traces;
      Json arms = Json::object();
      for (const auto& arm : result.arms) {
        names.push_back(arm.name);
        traces.push_back(arm.log_trace);
        Json a;
        a["labels_used"] = arm.stream.labels_used;
        a["final_e_value"] = arm.stream.e_value();
        a["max_e_value"] = std::exp(arm.max_log_e);
        a["rejection_time"] = arm.rejection_time ? Json(*arm.rejection_time) : Json(nullptr);
        a["stream"] = Json(to_json(arm.stream));
        arms[arm.name] = a;
      }
      write_text(dir / ("trajectory_" + tag + ".csv"), trajectory_csv(names, traces));
      Json s;
      s["val_risk"] = result.val_risk;
      s["m0"] = result.m0;
      s["arms"] = arms;
      rep[tag] = s;
    }
    replicas.push_back(rep);
  }
  summary["replicas"] = replicas;
  write_json(std::filesystem::path(config.out_dir) / "summary.json", summary);
  return summary;
}

} // namespace ppe::harness
