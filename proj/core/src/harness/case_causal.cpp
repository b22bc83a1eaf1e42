#include <sstream>
#include <stdexcept>

#include "ppe/harness/cases.hpp"

namespace ppe::harness {

namespace {

causal::CiMode causal_mode(const std::string& name) {
  if (name == "labels_only") return causal::CiMode::labels_only;
  if (name == "ppi") return causal::CiMode::ppi;
  if (name == "full_data") return causal::CiMode::full_data;
  throw std::invalid_argument("unknown causal arm '" + name + "'");
}

std::string dot_text(const causal::Pdag& g, const std::string& name, const std::vector<bool>& costly) {
  std::ostringstream os;
  causal::write_dot(os, g, name, costly);
  return os.str();
}

} // namespace

const CausalArmOutcome& CausalRunResult::arm(const std::string& name) const {
  for (const auto& a : arms) {
    if (a.name == name) return a;
  }
  throw std::out_of_range("no arm named '" + name + "'");
}

CausalRunResult run_causal_seed(const CausalRunOptions& options, std::uint64_t seed) {
  CausalRunResult result;
  result.scm = causal::synth_scm(options.scm, seed);
  const auto stream = causal::make_ci_stream(result.scm, options.stream, seed);
  result.labels_used = stream.labels_used();
  const auto calibrator = CalibratorConfig::for_budget(options.stream.pi_inf);
  for (const auto& name : options.arms) {
    causal::StreamCiOracle oracle(stream, causal_mode(name), calibrator, options.alpha);
    auto pc = causal::pc_search(
        options.scm.nodes,
        [&](int a, int b, const std::vector<int>& c) { return oracle.independent(a, b, c); },
        options.max_cond);
    const auto score = causal::score_adjacencies(result.scm.dag, pc.graph);
    result.arms.push_back({name, std::move(pc), score});
  }
  return result;
}

Json run_case_causal(const StreamConfig& config) {
  config.validate();
  Json summary = run_header(config);
  Json replicas = Json::array();
  for (std::size_t r = 0; r < config.replicas; ++r) {
    const std::uint64_t seed = config.seed + r;
    CausalRunOptions opts;
    opts.scm.nodes = config.nodes;
    opts.scm.edge_prob = config.edge_prob;
    opts.scm.costly = config.costly;
    opts.stream.batches = config.batches;
    opts.stream.batch_size = config.batch_size;
    opts.stream.pi_inf = config.budget;
    opts.alpha = config.alpha;
    opts.max_cond = config.max_cond;
    opts.arms = config.arms;
    const auto result = run_causal_seed(opts, seed);

    const auto dir = replica_dir(config, r);
    const auto& costly = result.scm.dag.costly;
    write_text(dir / "graph_truth.dot", dot_text(causal::Pdag::from_dag(result.scm.dag), "truth", costly));
    Json rep;
    rep["seed"] = seed;
    rep["labels_used"] = result.labels_used;
    rep["batches"] = config.batches;
    Json truth = Json::array();
    for (const auto& [u, v] : result.scm.dag.edges) truth.push_back({u, v});
    rep["true_edges"] = truth;
    Json arms = Json::object();
    for (const auto& arm : result.arms) {
      write_text(dir / ("graph_" + arm.name + ".dot"), dot_text(arm.pc.graph, arm.name, costly));
      Json a;
      a["edges_found"] = arm.score.found_edges;
      a["true_positives"] = arm.score.hits;
      a["precision"] = arm.score.precision;
      a["recall"] = arm.score.recall;
      a["tests"] = arm.pc.tests;
      a["orientation_conflicts"] = arm.pc.conflicts;
      arms[arm.name] = a;
    }
    rep["arms"] = arms;
    write_json(dir / "report.json", rep);
    replicas.push_back(rep);
  }
  summary["replicas"] = replicas;
  write_json(std::filesystem::path(config.out_dir) / "summary.json", summary);
  return summary;
}

Json run_case(const StreamConfig& config) {
  switch (config.case_id) {
  case CaseId::mean: return run_case_mean(config);
  case CaseId::risk: return run_case_risk(config);
  case CaseId::changepoint: return run_case_changepoint(config);
  case CaseId::causal: return run_case_causal(config);
  }
  throw std::invalid_argument("unknown case");
}

} // namespace ppe::harness
