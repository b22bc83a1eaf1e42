#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ppe/harness/cases.hpp"
#include "ppe/harness/config.hpp"
#include "ppe/harness/validation.hpp"

namespace {

using namespace ppe::harness;

struct RunFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> n;
  std::optional<double> alpha;
  std::optional<double> budget;
  std::optional<std::string> policy;
  std::optional<std::string> arms;
  std::optional<std::string> out;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config, "key=value configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "base seed");
  cmd->add_option("--n", f.n, "stream length");
  cmd->add_option("--alpha", f.alpha, "significance level");
  cmd->add_option("--budget", f.budget, "label budget pi_inf");
  cmd->add_option("--policy", f.policy, "collection policy")->check(CLI::IsMember({"constant", "active"}));
  cmd->add_option("--arms", f.arms, "comma separated arms");
  cmd->add_option("--out", f.out, "output directory");
}

StreamConfig resolve(CaseId id, const RunFlags& f) {
  StreamConfig c = f.config.empty() ? StreamConfig::defaults_for(id) : load_config(f.config, id);
  std::map<std::string, std::string> kv;
  if (f.seed) kv["seed"] = std::to_string(*f.seed);
  // A causal stream is measured in batches.
  if (f.n) kv[id == CaseId::causal ? "batches" : "n"] = std::to_string(*f.n);
  if (f.alpha) kv["alpha"] = format_double(*f.alpha);
  if (f.budget) kv["budget"] = format_double(*f.budget);
  if (f.policy) kv["policy"] = *f.policy;
  if (f.arms) kv["arms"] = *f.arms;
  if (f.out) kv["out"] = *f.out;
  c = apply_settings(c, kv);
  c.validate();
  return c;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prediction-powered e-values under a label budget"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, CaseId>> cases{{"mean", CaseId::mean},
                                                          {"risk", CaseId::risk},
                                                          {"changepoint", CaseId::changepoint},
                                                          {"causal", CaseId::causal}};
  const std::vector<std::string> blurbs{"confidence sequences for a Bernoulli mean",
                                        "anytime-valid risk monitoring on clean and poisoned streams",
                                        "change-point detection atop confidence sequences",
                                        "PC causal discovery with batched CI e-processes"};
  std::vector<RunFlags> flags(cases.size());
  std::vector<CLI::App*> cmds;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    cmds.push_back(app.add_subcommand(cases[i].first, blurbs[i]));
    add_run_flags(cmds.back(), flags[i]);
  }

  auto* validate = app.add_subcommand("validate", "run the Monte Carlo acceptance suite");
  std::vector<int> criteria;
  ValidationOptions vopt;
  validate->add_option("--criteria", criteria, "criterion ids (default: all)")->delimiter(',');
  validate->add_option("--seed", vopt.seed, "base seed");
  validate->add_option("--threads", vopt.threads, "worker threads (0 = hardware)");

  CLI11_PARSE(app, argc, argv);

  try {
    for (std::size_t i = 0; i < cases.size(); ++i) {
      if (!cmds[i]->parsed()) continue;
      const auto config = resolve(cases[i].second, flags[i]);
      const auto summary = run_case(config);
      std::cout << "wrote " << config.out_dir << " (config " << summary["config_hash"].get<std::string>() << ")\n";
      return 0;
    }
    if (validate->parsed()) {
      if (criteria.empty()) {
        for (int id = 1; id <= kCriterionCount; ++id) criteria.push_back(id);
      }
      bool all = true;
      for (int id : criteria) {
        const auto r = run_criterion(id, vopt);
        std::cout << format_result(r) << std::endl;
        all = all && r.passed;
      }
      return all ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
