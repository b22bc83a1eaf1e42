#pragma once

#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "ppe/calibrate.hpp"
#include "ppe/causal/scm.hpp"
#include "ppe/evalue.hpp"

namespace ppe::causal {

enum class CIDecision { undecided, dependent, independent };

// Hypothesis a _||_ b | cond with its batched e-process.
struct CITask {
  int a{0};
  int b{1};
  std::vector<int> cond;
  PpiStream stream;
  double max_log_e{0.0};
  CIDecision decision{CIDecision::undecided};
};

CITask make_task(int a, int b, std::vector<int> cond);

// One unit of data. `observed` holds every column and is present iff the
// batch was collected; `imputed` has costly columns replaced by predictions.
struct Batch {
  const Eigen::MatrixXd* observed{nullptr};
  const Eigen::MatrixXd* imputed{nullptr};
  bool collected{false};
  double pi{1.0};
};

// rescale(ptoe(clip_p(p)), eta).
double batch_e_component(double p, double eta);

// Advances the task by one batch and marks it dependent once E >= 1/alpha.
// Decided tasks are returned unchanged.
CITask ci_e_step(CITask task, const Batch& batch, const CalibratorConfig& calibrator, double alpha);

// Multi-output ridge regression of costly columns on cheap columns with a
// Gaussian residual model, so imputations reproduce the joint spread.
class RidgeImputer {
public:
  RidgeImputer(std::vector<int> cheap, std::vector<int> costly, double ridge = 1.0);

  void fit(const Eigen::MatrixXd& full);
  // Copy of `batch` with costly columns redrawn from the fitted model.
  Eigen::MatrixXd impute(const Eigen::MatrixXd& batch, CounterRng& rng) const;

  const Eigen::MatrixXd& coefficients() const { return coef_; }
  long rows_seen() const { return rows_; }

private:
  void refresh();

  std::vector<int> cheap_;
  std::vector<int> costly_;
  double ridge_;
  long rows_{0};
  Eigen::MatrixXd xtx_;
  Eigen::MatrixXd xty_;
  Eigen::MatrixXd yty_;
  Eigen::MatrixXd coef_;      // (1 + cheap) x costly, intercept first
  Eigen::MatrixXd chol_;      // lower factor of the residual covariance
};

enum class CiMode { ppi, labels_only, full_data };

struct CiStreamConfig {
  int batches{200};
  long batch_size{100};
  double pi_inf{0.1};
};

// Pre-drawn stream shared by every CI task: true batches, the shared
// collection coins and the imputations available before each batch.
struct CiStream {
  std::vector<Eigen::MatrixXd> truth;
  std::vector<Eigen::MatrixXd> imputed;
  std::vector<bool> collected;
  double pi{1.0};

  std::size_t size() const { return truth.size(); }
  std::size_t labels_used() const;
  Batch batch(std::size_t j, CiMode mode) const;
};

CiStream make_ci_stream(const LinearScm& scm, const CiStreamConfig& config, std::uint64_t seed);

// Runs the task over the whole horizon; undecided tasks become independent.
CITask run_ci_task(CITask task, const CiStream& stream, CiMode mode,
                   const CalibratorConfig& calibrator, double alpha);

// Caches decisions by (min(a,b), max(a,b), sorted cond).
class StreamCiOracle {
public:
  StreamCiOracle(const CiStream& stream, CiMode mode, CalibratorConfig calibrator, double alpha);

  bool independent(int a, int b, const std::vector<int>& cond);
  std::size_t tests_run() const { return cache_.size(); }

private:
  const CiStream& stream_;
  CiMode mode_;
  CalibratorConfig calibrator_;
  double alpha_;
  std::map<std::tuple<int, int, std::vector<int>>, bool> cache_;
};

} // namespace ppe::causal
