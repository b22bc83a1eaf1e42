#include "ppe/harness/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "ppe/rng.hpp"

namespace ppe::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += items[i];
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
    throw std::invalid_argument("config key '" + key + "': expected a number, got '" + v + "'");
  }
  return out;
}

template <class Int>
Int to_int(const std::string& key, const std::string& v) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
    throw std::invalid_argument("config key '" + key + "': expected an integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config key '" + key + "': expected a boolean, got '" + v + "'");
}

PolicyMode parse_policy(const std::string& v) {
  if (v == "constant") return PolicyMode::constant;
  if (v == "active") return PolicyMode::approx_optimal;
  throw std::invalid_argument("policy must be 'constant' or 'active', got '" + v + "'");
}

} // namespace

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw std::runtime_error("double formatting failed");
  return std::string(buf.data(), ptr);
}

CaseId parse_case(const std::string& name) {
  if (name == "mean") return CaseId::mean;
  if (name == "risk") return CaseId::risk;
  if (name == "changepoint") return CaseId::changepoint;
  if (name == "causal") return CaseId::causal;
  throw std::invalid_argument("unknown case '" + name + "'");
}

std::string case_name(CaseId id) {
  switch (id) {
  case CaseId::mean: return "mean";
  case CaseId::risk: return "risk";
  case CaseId::changepoint: return "changepoint";
  case CaseId::causal: return "causal";
  }
  return "mean";
}

std::string policy_name(PolicyMode mode) { return mode == PolicyMode::constant ? "constant" : "active"; }

StreamConfig StreamConfig::defaults_for(CaseId id) {
  StreamConfig c;
  c.case_id = id;
  switch (id) {
  case CaseId::mean:
    c.n = 5000;
    c.budget = 0.01;
    c.arms = {"labels_only", "ppi", "active", "imputation"};
    break;
  case CaseId::risk:
    c.n = 10000;
    c.budget = 0.005;
    c.arms = {"labels_only", "ppi", "active", "imputation"};
    break;
  case CaseId::changepoint:
    c.n = 150000;
    c.budget = 0.005;
    c.grid_size = 32;
    c.max_active = 6;
    c.grid_lo = 0.005;
    c.grid_hi = 0.995;
    c.arms = {"labels_only", "ppi"};
    break;
  case CaseId::causal:
    c.n = 20000;
    c.budget = 0.1;
    c.arms = {"labels_only", "ppi", "full_data"};
    break;
  }
  return c;
}

void StreamConfig::validate() const {
  const auto fail = [](const std::string& what) { throw std::invalid_argument("invalid config: " + what); };
  if (n == 0) fail("n must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) fail("alpha must lie in (0, 1]");
  if (!(budget > 0.0 && budget <= 1.0)) fail("budget must lie in (0, 1]");
  if (!(taylor_a > 0.0)) fail("taylor_a must be positive");
  if (replicas == 0) fail("replicas must be positive");
  if (arms.empty()) fail("at least one arm is required");
  if (!(theta > 0.0 && theta < 1.0)) fail("theta must lie in (0, 1)");
  if (grid_size < 2) fail("grid_size must be at least 2");
  if (!(grid_lo > 0.0 && grid_lo < grid_hi && grid_hi < 1.0)) fail("grid bounds must satisfy 0 < lo < hi < 1");
  if (predictor != "online" && predictor != "biased") fail("predictor must be 'online' or 'biased'");
  if (!(eps_tol >= 0.0)) fail("eps_tol must be nonnegative");
  if (max_active < 2) fail("max_active must be at least 2");
  if (nodes < 2 || costly < 0 || costly > nodes) fail("bad node/costly counts");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) fail("edge_prob must lie in [0, 1]");
  if (batches <= 0 || batch_size < 8) fail("bad batch settings");
  if (max_cond < 0 || max_cond > nodes - 2) fail("max_cond must lie in [0, nodes - 2]");
  if (!csv_path.empty() && csv_features.empty()) fail("csv_features is required with csv");

  static const std::vector<std::string> stream_arms{"labels_only", "ppi", "active", "imputation"};
  static const std::vector<std::string> cp_arms{"labels_only", "ppi"};
  static const std::vector<std::string> causal_arms{"labels_only", "ppi", "full_data"};
  const auto& allowed = case_id == CaseId::causal        ? causal_arms
                        : case_id == CaseId::changepoint ? cp_arms
                                                         : stream_arms;
  for (const auto& a : arms) {
    if (std::find(allowed.begin(), allowed.end(), a) == allowed.end()) {
      fail("arm '" + a + "' is not available for case " + case_name(case_id));
    }
  }
}

std::string StreamConfig::canonical_text() const {
  std::map<std::string, std::string> kv{
      {"case", case_name(case_id)},
      {"n", std::to_string(n)},
      {"alpha", format_double(alpha)},
      {"budget", format_double(budget)},
      {"policy", policy_name(policy)},
      {"taylor_a", format_double(taylor_a)},
      {"seed", std::to_string(seed)},
      {"arms", join(arms)},
      {"replicas", std::to_string(replicas)},
      {"csv", csv_path},
      {"csv_features", join(csv_features)},
      {"csv_label", csv_label},
      {"shuffle", shuffle ? "true" : "false"},
      {"theta", format_double(theta)},
      {"grid_size", std::to_string(grid_size)},
      {"grid_lo", format_double(grid_lo)},
      {"grid_hi", format_double(grid_hi)},
      {"predictor", predictor},
      {"predictor_bias", format_double(predictor_bias)},
      {"eps_tol", format_double(eps_tol)},
      {"max_active", std::to_string(max_active)},
      {"nodes", std::to_string(nodes)},
      {"edge_prob", format_double(edge_prob)},
      {"costly", std::to_string(costly)},
      {"batches", std::to_string(batches)},
      {"batch_size", std::to_string(batch_size)},
      {"max_cond", std::to_string(max_cond)},
  };
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

std::string StreamConfig::hash() const {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << fnv1a64(canonical_text());
  return os.str();
}

std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

StreamConfig apply_settings(StreamConfig c, const std::map<std::string, std::string>& kv) {
  for (const auto& [k, v] : kv) {
    if (k == "case") {
      if (parse_case(v) != c.case_id) throw std::invalid_argument("config case '" + v + "' does not match command");
    } else if (k == "n") c.n = to_int<std::uint64_t>(k, v);
    else if (k == "alpha") c.alpha = to_double(k, v);
    else if (k == "budget") c.budget = to_double(k, v);
    else if (k == "policy") c.policy = parse_policy(v);
    else if (k == "taylor_a") c.taylor_a = to_double(k, v);
    else if (k == "seed") c.seed = to_int<std::uint64_t>(k, v);
    else if (k == "out") c.out_dir = v;
    else if (k == "arms") c.arms = split_list(v);
    else if (k == "replicas") c.replicas = to_int<std::size_t>(k, v);
    else if (k == "csv") c.csv_path = v;
    else if (k == "csv_features") c.csv_features = split_list(v);
    else if (k == "csv_label") c.csv_label = v;
    else if (k == "shuffle") c.shuffle = to_bool(k, v);
    else if (k == "theta") c.theta = to_double(k, v);
    else if (k == "grid_size") c.grid_size = to_int<std::size_t>(k, v);
    else if (k == "grid_lo") c.grid_lo = to_double(k, v);
    else if (k == "grid_hi") c.grid_hi = to_double(k, v);
    else if (k == "predictor") c.predictor = v;
    else if (k == "predictor_bias") c.predictor_bias = to_double(k, v);
    else if (k == "eps_tol") c.eps_tol = to_double(k, v);
    else if (k == "max_active") c.max_active = to_int<std::size_t>(k, v);
    else if (k == "nodes") c.nodes = to_int<int>(k, v);
    else if (k == "edge_prob") c.edge_prob = to_double(k, v);
    else if (k == "costly") c.costly = to_int<int>(k, v);
    else if (k == "batches") c.batches = to_int<int>(k, v);
    else if (k == "batch_size") c.batch_size = to_int<long>(k, v);
    else if (k == "max_cond") c.max_cond = to_int<int>(k, v);
    else throw std::invalid_argument("unknown config key '" + k + "'");
  }
  return c;
}

StreamConfig load_config(const std::string& path, CaseId id) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config '" + path + "'");
  return apply_settings(StreamConfig::defaults_for(id), parse_key_values(in));
}

} // namespace ppe::harness
