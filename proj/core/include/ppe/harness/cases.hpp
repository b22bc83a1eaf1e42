#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ppe/betting.hpp"
#include "ppe/causal/ci_process.hpp"
#include "ppe/causal/pc.hpp"
#include "ppe/causal/scm.hpp"
#include "ppe/changepoint.hpp"
#include "ppe/confseq.hpp"
#include "ppe/harness/config.hpp"
#include "ppe/harness/data.hpp"
#include "ppe/harness/report.hpp"

namespace ppe::harness {

// ---- mean ----

struct MeanRunOptions {
  std::uint64_t n{5000};
  double alpha{0.05};
  std::vector<std::string> arms{"labels_only", "ppi", "active", "imputation"};
  std::string predictor{"online"};
  double predictor_bias{0.15};
  double taylor_a{1.5};
  std::optional<std::size_t> track;  // grid index whose coverage is tracked
  bool record_labels{false};
};

struct MeanArmOutcome {
  std::string name;
  PLandscape landscape;
  GridSet running;
  bool track_covered{true};           // tracked point inside the running set at every n
  std::vector<std::uint64_t> labels;  // cumulative labels per step when recorded
};

struct MeanRunResult {
  std::vector<MeanArmOutcome> arms;
  const MeanArmOutcome& arm(const std::string& name) const;
};

// Rows must carry p_true when predictor == "biased".
MeanRunResult run_mean_stream(const ThetaGrid& grid, const std::vector<LabeledRow>& rows,
                              const MeanRunOptions& options, std::uint64_t seed);

std::vector<LabeledRow> synthetic_mean_rows(const MeanStreamSpec& spec, std::uint64_t n,
                                            std::uint64_t seed);

Json run_case_mean(const StreamConfig& config);

// ---- risk ----

struct RiskRunOptions {
  std::uint64_t n{10000};
  double alpha{0.05};
  double budget{0.005};
  double eps_tol{0.05};
  double taylor_a{1.5};
  std::vector<std::string> arms{"labels_only", "ppi", "active", "imputation"};
  FlipSchedule schedule{poison_flip_prob};
  RiskWorld world{};
  MonitorSplit split{};
  bool record_traces{false};
};

struct RiskArmOutcome {
  std::string name;
  PpiStream stream;
  double max_log_e{0.0};
  std::optional<std::uint64_t> rejection_time;
  std::vector<double> log_trace;
};

struct RiskRunResult {
  double val_risk{0.0};
  double m0{0.0};
  std::vector<RiskArmOutcome> arms;
  const RiskArmOutcome& arm(const std::string& name) const;
};

RiskRunResult run_risk_stream(const RiskRunOptions& options, std::uint64_t seed);

Json run_case_risk(const StreamConfig& config);

// ---- change point ----

struct ChangePointRunOptions {
  std::uint64_t n{150000};
  double alpha{0.05};
  double budget{0.005};
  std::size_t grid_size{32};
  double grid_lo{0.005};
  double grid_hi{0.995};
  std::size_t max_active{6};
  std::vector<std::string> arms{"labels_only", "ppi"};
  FlipSchedule schedule{changepoint_flip_prob};
  double change_time{0.3};  // normalized time of the true change, if any
  RiskWorld world{};
  MonitorSplit split{};
  bool record_trace{false};
};

struct ChangePointArmOutcome {
  std::string name;
  bool detected{false};
  std::uint64_t detection_time{0};
  double declared_location{0.0};
  std::uint64_t labels_used{0};
};

struct ChangePointRunResult {
  double val_risk{0.0};
  std::vector<ChangePointArmOutcome> arms;
  std::vector<double> ema;                 // when recorded
  std::vector<std::uint64_t> collected_at;  // when recorded
  const ChangePointArmOutcome& arm(const std::string& name) const;
};

ChangePointRunResult run_changepoint_stream(const ChangePointRunOptions& options, std::uint64_t seed);

Json run_case_changepoint(const StreamConfig& config);

// ---- causal ----

struct CausalRunOptions {
  causal::ScmSpec scm{};
  causal::CiStreamConfig stream{};
  double alpha{0.05};
  int max_cond{4};
  std::vector<std::string> arms{"labels_only", "ppi", "full_data"};
};

struct CausalArmOutcome {
  std::string name;
  causal::PcResult pc;
  causal::AdjacencyScore score;
};

struct CausalRunResult {
  causal::LinearScm scm;
  std::size_t labels_used{0};
  std::vector<CausalArmOutcome> arms;
  const CausalArmOutcome& arm(const std::string& name) const;
};

CausalRunResult run_causal_seed(const CausalRunOptions& options, std::uint64_t seed);

Json run_case_causal(const StreamConfig& config);

Json run_case(const StreamConfig& config);

} // namespace ppe::harness
