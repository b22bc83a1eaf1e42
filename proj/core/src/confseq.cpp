#include "ppe/confseq.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace ppe {

ThetaGrid::ThetaGrid(std::vector<double> points, double pi_inf)
    : points_(std::move(points)), pi_inf_(pi_inf) {
  if (points_.empty()) throw std::invalid_argument("theta grid must not be empty");
  if (!std::is_sorted(points_.begin(), points_.end())) {
    throw std::invalid_argument("theta grid must be sorted");
  }
  configs_.reserve(points_.size());
  for (double theta : points_) {
    const auto cfg = MeanBetConfig::from_budget(theta, pi_inf);
    configs_.push_back(cfg);
    truncated_.push_back(cfg.range());
    full_.push_back(MeanBetConfig::untruncated(theta).range());
    bounds_.push_back(cfg.bounds());
    policy_floor_ = std::max(policy_floor_, 1.0 - bounds_.back().lower / bounds_.back().upper);
  }
  policy_floor_ += kPolicyFloor;
}

ThetaGrid ThetaGrid::uniform(double lo, double hi, std::size_t count, double pi_inf) {
  if (count < 2 || !(lo < hi)) throw std::invalid_argument("bad uniform grid specification");
  std::vector<double> pts(count);
  const double h = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) pts[k] = lo + h * static_cast<double>(k);
  pts.back() = hi;
  return ThetaGrid(std::move(pts), pi_inf);
}

std::size_t ThetaGrid::nearest(double theta) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), theta);
  if (it == points_.end()) return points_.size() - 1;
  if (it == points_.begin()) return 0;
  auto prev = std::prev(it);
  return (theta - *prev <= *it - theta) ? static_cast<std::size_t>(prev - points_.begin())
                                        : static_cast<std::size_t>(it - points_.begin());
}

PLandscape::PLandscape(std::size_t grid_size, LandscapeArm arm)
    : arm_(arm), log_e_(grid_size, 0.0) {}

void PLandscape::update(const ThetaGrid& grid, const LandscapeStep& step, const GridSet* mask) {
  if (grid.size() != log_e_.size()) throw std::invalid_argument("grid size mismatch");
  if (mask != nullptr && mask->size() != log_e_.size()) throw std::invalid_argument("mask size mismatch");
  const auto live = [&](std::size_t k) { return mask == nullptr || (*mask)[k]; };
  if (step.collected && !step.label) throw std::invalid_argument("collected step without label");

  const auto pts = grid.points();
  const double nn = static_cast<double>(bets_.count);
  const double run_mean = bets_.running_mean;
  const double var = bets_.variance_with_prior();
  const auto bet_for = [&](std::size_t k, const BetRange& r) {
    const double theta = pts[k];
    const double diff = (theta + nn * run_mean) / (nn + 1.0) - theta;
    const double margin = kBetMarginRel * (r.hi - r.lo);
    return std::clamp(diff / (var + diff * diff), r.lo + margin, r.hi - margin);
  };

  switch (arm_) {
  case LandscapeArm::prediction_powered: {
    if (!(step.imputed >= 0.0 && step.imputed <= 1.0)) {
      throw std::invalid_argument("imputed outcome outside [0, 1]");
    }
    if (step.collected) {
      if (!(*step.label >= 0.0 && *step.label <= 1.0)) {
        throw std::invalid_argument("label outside [0, 1]");
      }
      if (!(step.pi <= 1.0 && step.pi >= grid.policy_floor() - kPolicyFloor)) {
        throw std::invalid_argument("collection probability below the grid's policy floor");
      }
    }
    for (std::size_t k = 0; k < log_e_.size(); ++k) {
      if (!live(k)) continue;
      const double theta = pts[k];
      const double lambda = bet_for(k, grid.truncated_range(k));
      const double d_mu = step.imputed - theta;
      if (!step.collected) {
        log_e_[k] += std::log1p(lambda * d_mu);
        continue;
      }
      // (e_y - (1 - pi) e_mu) / pi - 1, written so that a perfect predictor
      // reproduces the labeled increment to the last bit.
      const double d_y = *step.label - theta;
      const double inc = lambda * (d_y - (1.0 - step.pi) * d_mu) / step.pi;
      if (!(inc > -1.0)) throw std::domain_error("prediction-powered component hit zero");
      log_e_[k] += std::log1p(inc);
    }
    bets_.update(step.collected ? *step.label : step.imputed);
    break;
  }
  case LandscapeArm::labels_only:
    if (step.collected) {
      for (std::size_t k = 0; k < log_e_.size(); ++k) {
        if (!live(k)) continue;
        const double lambda = bet_for(k, grid.full_range(k));
        log_e_[k] += std::log1p(lambda * (*step.label - pts[k]));
      }
      bets_.update(*step.label);
    }
    break;
  case LandscapeArm::imputation: {
    const double z = step.collected ? *step.label : step.imputed;
    for (std::size_t k = 0; k < log_e_.size(); ++k) {
      if (!live(k)) continue;
      const double lambda = bet_for(k, grid.full_range(k));
      log_e_[k] += std::log1p(lambda * (z - pts[k]));
    }
    bets_.update(z);
    break;
  }
  }
  ++n_;
  if (step.collected) ++labels_used_;
}

GridSet invert(std::span<const double> log_e, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  const double threshold = -std::log(alpha);
  GridSet out(log_e.size());
  for (std::size_t k = 0; k < log_e.size(); ++k) out[k] = log_e[k] < threshold;
  return out;
}

GridSet invert(const PLandscape& landscape, double alpha) { return invert(landscape.log_e(), alpha); }

void intersect_in_place(GridSet& acc, const GridSet& next) {
  if (acc.size() != next.size()) throw std::invalid_argument("grid set size mismatch");
  for (std::size_t k = 0; k < acc.size(); ++k) acc[k] = acc[k] && next[k];
}

GridSet running_intersection(std::span<const GridSet> sets) {
  if (sets.empty()) return {};
  GridSet acc = sets.front();
  for (std::size_t i = 1; i < sets.size(); ++i) intersect_in_place(acc, sets[i]);
  return acc;
}

bool is_empty(const GridSet& set) { return std::none_of(set.begin(), set.end(), [](bool b) { return b; }); }

bool disjoint(const GridSet& a, const GridSet& b) {
  if (a.size() != b.size()) throw std::invalid_argument("grid set size mismatch");
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] && b[k]) return false;
  }
  return true;
}

void write_landscape_csv(std::ostream& out, const ThetaGrid& grid, const PLandscape& landscape) {
  out << "theta,e_value,p_landscape\n";
  const auto pts = grid.points();
  const auto log_e = landscape.log_e();
  out << std::setprecision(17);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double e = std::exp(log_e[k]);
    out << pts[k] << ',' << e << ',' << std::min(1.0, 1.0 / e) << '\n';
  }
}

} // namespace ppe
