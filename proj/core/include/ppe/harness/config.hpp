#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ppe/sampling.hpp"

namespace ppe::harness {

enum class CaseId { mean, risk, changepoint, causal };

// Fully resolved run configuration. Every field has a case-specific default
// and can be set from a key=value file or from CLI overrides.
struct StreamConfig {
  CaseId case_id{CaseId::mean};
  std::uint64_t n{5000};
  double alpha{0.05};
  double budget{0.01};
  PolicyMode policy{PolicyMode::constant};
  double taylor_a{1.5};
  std::uint64_t seed{0};
  std::string out_dir{"out"};
  std::vector<std::string> arms;
  std::size_t replicas{1};

  // Data source: synthetic unless csv_path is set.
  std::string csv_path;
  std::vector<std::string> csv_features;
  std::string csv_label{"y"};
  bool shuffle{false};

  // Mean case.
  double theta{0.3};
  std::size_t grid_size{512};
  double grid_lo{0.001};
  double grid_hi{0.999};
  std::string predictor{"online"};  // online | biased
  double predictor_bias{0.15};

  // Risk and change-point cases.
  double eps_tol{0.05};
  std::size_t max_active{6};

  // Causal case.
  int nodes{6};
  double edge_prob{0.4};
  int costly{3};
  int batches{200};
  long batch_size{100};
  int max_cond{4};

  static StreamConfig defaults_for(CaseId id);

  // Throws std::invalid_argument naming the first bad field.
  void validate() const;

  // Sorted key=value lines; the hash is taken over this text.
  std::string canonical_text() const;
  std::string hash() const;
};

CaseId parse_case(const std::string& name);
std::string case_name(CaseId id);
std::string policy_name(PolicyMode mode);

std::map<std::string, std::string> parse_key_values(std::istream& in);

// Applies key=value settings on top of `base`. Unknown keys are rejected.
StreamConfig apply_settings(StreamConfig base, const std::map<std::string, std::string>& kv);

StreamConfig load_config(const std::string& path, CaseId id);

std::string format_double(double v);

} // namespace ppe::harness
