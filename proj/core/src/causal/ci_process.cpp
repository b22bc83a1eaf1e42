#include "ppe/causal/ci_process.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ppe/causal/fisher_z.hpp"

namespace ppe::causal {

CITask make_task(int a, int b, std::vector<int> cond) {
  if (a == b) throw std::invalid_argument("CI task needs distinct nodes");
  if (std::find(cond.begin(), cond.end(), a) != cond.end() ||
      std::find(cond.begin(), cond.end(), b) != cond.end()) {
    throw std::invalid_argument("conditioning set contains a tested node");
  }
  CITask task;
  task.a = a;
  task.b = b;
  task.cond = std::move(cond);
  return task;
}

double batch_e_component(double p, double eta) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p-value must lie in [0, 1]");
  return rescale(ptoe(clip_p(p)), eta);
}

CITask ci_e_step(CITask task, const Batch& batch, const CalibratorConfig& calibrator, double alpha) {
  if (task.decision != CIDecision::undecided) return task;
  if (batch.imputed == nullptr) throw std::invalid_argument("batch without imputed data");
  if (batch.collected && batch.observed == nullptr) {
    throw std::invalid_argument("collected batch is missing its costly columns");
  }
  const auto bounds = calibrator.rescaled_bounds();
  const auto component_of = [&](const Eigen::MatrixXd& data) {
    const double e = batch_e_component(fisher_z_pvalue(data, task.a, task.b, task.cond), calibrator.eta);
    return std::clamp(e, bounds.lower, bounds.upper);
  };
  const double e_mu = component_of(*batch.imputed);
  std::optional<double> e_y;
  if (batch.collected) e_y = component_of(*batch.observed);
  const double comp = ppi_component(e_mu, e_y, batch.collected, batch.pi, bounds);
  task.stream = advance(task.stream, comp, batch.collected);
  task.max_log_e = std::max(task.max_log_e, task.stream.log_e);
  if (task.max_log_e >= -std::log(alpha)) task.decision = CIDecision::dependent;
  return task;
}

RidgeImputer::RidgeImputer(std::vector<int> cheap, std::vector<int> costly, double ridge)
    : cheap_(std::move(cheap)), costly_(std::move(costly)), ridge_(ridge) {
  const auto p = static_cast<long>(cheap_.size()) + 1;
  const auto q = static_cast<long>(costly_.size());
  xtx_ = Eigen::MatrixXd::Zero(p, p);
  xty_ = Eigen::MatrixXd::Zero(p, q);
  yty_ = Eigen::MatrixXd::Zero(q, q);
  coef_ = Eigen::MatrixXd::Zero(p, q);
  chol_ = Eigen::MatrixXd::Identity(q, q);
}

void RidgeImputer::fit(const Eigen::MatrixXd& full) {
  const long p = static_cast<long>(cheap_.size()) + 1;
  const long q = static_cast<long>(costly_.size());
  Eigen::MatrixXd x(full.rows(), p);
  Eigen::MatrixXd y(full.rows(), q);
  x.col(0).setOnes();
  for (long j = 1; j < p; ++j) x.col(j) = full.col(cheap_[static_cast<std::size_t>(j - 1)]);
  for (long j = 0; j < q; ++j) y.col(j) = full.col(costly_[static_cast<std::size_t>(j)]);
  xtx_ += x.transpose() * x;
  xty_ += x.transpose() * y;
  yty_ += y.transpose() * y;
  rows_ += full.rows();
  refresh();
}

void RidgeImputer::refresh() {
  const long p = xtx_.rows();
  Eigen::MatrixXd reg = xtx_;
  for (long j = 1; j < p; ++j) reg(j, j) += ridge_;
  coef_ = reg.ldlt().solve(xty_);
  Eigen::MatrixXd resid = yty_ - xty_.transpose() * coef_ - coef_.transpose() * xty_ +
                          coef_.transpose() * xtx_ * coef_;
  resid /= static_cast<double>(std::max<long>(rows_ - p, 1));
  resid = 0.5 * (resid + resid.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(resid);
  if (llt.info() == Eigen::Success) {
    chol_ = llt.matrixL();
  } else {
    chol_ = resid.diagonal().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  }
}

Eigen::MatrixXd RidgeImputer::impute(const Eigen::MatrixXd& batch, CounterRng& rng) const {
  Eigen::MatrixXd out = batch;
  const long p = static_cast<long>(cheap_.size()) + 1;
  const long q = static_cast<long>(costly_.size());
  Eigen::VectorXd xrow(p);
  Eigen::VectorXd noise(q);
  for (long r = 0; r < out.rows(); ++r) {
    xrow(0) = 1.0;
    for (long j = 1; j < p; ++j) xrow(j) = batch(r, cheap_[static_cast<std::size_t>(j - 1)]);
    for (long j = 0; j < q; ++j) noise(j) = rng.normal();
    const Eigen::VectorXd y = coef_.transpose() * xrow + chol_ * noise;
    for (long j = 0; j < q; ++j) out(r, costly_[static_cast<std::size_t>(j)]) = y(j);
  }
  return out;
}

std::size_t CiStream::labels_used() const {
  return static_cast<std::size_t>(std::count(collected.begin(), collected.end(), true));
}

Batch CiStream::batch(std::size_t j, CiMode mode) const {
  Batch out;
  switch (mode) {
  case CiMode::ppi:
    out.imputed = &imputed[j];
    out.collected = collected[j];
    out.observed = collected[j] ? &truth[j] : nullptr;
    out.pi = pi;
    break;
  case CiMode::labels_only:
  case CiMode::full_data:
    out.imputed = &truth[j];
    out.observed = &truth[j];
    out.collected = true;
    out.pi = 1.0;
    break;
  }
  return out;
}

CiStream make_ci_stream(const LinearScm& scm, const CiStreamConfig& config, std::uint64_t seed) {
  if (config.batches <= 0 || config.batch_size < 8) throw std::invalid_argument("bad CI stream config");
  CiStream stream;
  stream.pi = std::min(1.0, config.pi_inf + kPolicyFloor);
  CounterRng data_rng(seed, "ci-data");
  CounterRng coin_rng(seed, "ci-coins");
  CounterRng impute_rng(seed, "ci-impute");
  RidgeImputer imputer(scm.dag.cheap_nodes(), scm.dag.costly_nodes());
  for (int j = 0; j < config.batches; ++j) {
    stream.truth.push_back(scm.sample(config.batch_size, data_rng));
    stream.imputed.push_back(imputer.impute(stream.truth.back(), impute_rng));
    const bool xi = draw_xi(stream.pi, coin_rng);
    stream.collected.push_back(xi);
    if (xi) imputer.fit(stream.truth.back());
  }
  return stream;
}

CITask run_ci_task(CITask task, const CiStream& stream, CiMode mode,
                   const CalibratorConfig& calibrator, double alpha) {
  if (-std::log(alpha) <= 0.0) task.decision = CIDecision::dependent;
  for (std::size_t j = 0; j < stream.size() && task.decision == CIDecision::undecided; ++j) {
    if (mode == CiMode::labels_only && !stream.collected[j]) continue;
    task = ci_e_step(std::move(task), stream.batch(j, mode), calibrator, alpha);
  }
  if (task.decision == CIDecision::undecided) task.decision = CIDecision::independent;
  return task;
}

StreamCiOracle::StreamCiOracle(const CiStream& stream, CiMode mode, CalibratorConfig calibrator,
                               double alpha)
    : stream_(stream), mode_(mode), calibrator_(calibrator), alpha_(alpha) {}

bool StreamCiOracle::independent(int a, int b, const std::vector<int>& cond) {
  std::vector<int> key_cond = cond;
  std::sort(key_cond.begin(), key_cond.end());
  auto key = std::make_tuple(std::min(a, b), std::max(a, b), key_cond);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  const auto task = run_ci_task(make_task(std::get<0>(key), std::get<1>(key), key_cond), stream_, mode_,
                                calibrator_, alpha_);
  const bool indep = task.decision == CIDecision::independent;
  cache_.emplace(std::move(key), indep);
  return indep;
}

} // namespace ppe::causal
