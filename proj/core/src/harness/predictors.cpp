#include "ppe/harness/predictors.hpp"

#include <cmath>
#include <stdexcept>

#include "ppe/diagnostics.hpp"

namespace ppe::harness {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double logit(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("logit needs p in (0, 1)");
  return std::log(p / (1.0 - p));
}

DiscreteDistribution Predictor::predict_dist(std::span<const double> x) const {
  const double p = predict(x);
  return {{0.0, 1.0}, {1.0 - p, p}};
}

OnlineLogistic::OnlineLogistic(std::size_t dim, double step, double intercept)
    : step_(step), intercept_(intercept), weights_(dim, 0.0), mean_(dim, 0.0), m2_(dim, 0.0) {
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
}

namespace {

bool finite_row(std::span<const double> x) {
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

} // namespace

bool OnlineLogistic::observe(std::span<const double> x) {
  if (x.size() != weights_.size()) throw std::invalid_argument("feature dimension mismatch");
  if (!finite_row(x)) {
    warn(WarningKind::skipped_row, "non-finite features skipped");
    return false;
  }
  ++seen_;
  const auto n = static_cast<double>(seen_);
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double d = x[j] - mean_[j];
    mean_[j] += d / n;
    m2_[j] += d * (x[j] - mean_[j]);
  }
  return true;
}

double OnlineLogistic::standardized(std::span<const double> x, std::size_t j) const {
  if (seen_ < 2) return x[j] - mean_[j];
  const double var = m2_[j] / static_cast<double>(seen_ - 1);
  return var > 0.0 ? (x[j] - mean_[j]) / std::sqrt(var) : x[j] - mean_[j];
}

double OnlineLogistic::score(std::span<const double> x) const {
  double z = intercept_;
  for (std::size_t j = 0; j < weights_.size(); ++j) z += weights_[j] * standardized(x, j);
  return z;
}

bool OnlineLogistic::update(std::span<const double> x, double y) {
  if (!observe(x)) return false;
  if (!std::isfinite(y)) {
    warn(WarningKind::skipped_row, "non-finite outcome skipped");
    return false;
  }
  const double g = sigmoid(score(x)) - y;
  intercept_ -= step_ * g;
  for (std::size_t j = 0; j < weights_.size(); ++j) weights_[j] -= step_ * g * standardized(x, j);
  ++updates_;
  return true;
}

double OnlineLogistic::predict(std::span<const double> x) const {
  if (x.size() != weights_.size()) throw std::invalid_argument("feature dimension mismatch");
  if (!finite_row(x)) return sigmoid(intercept_);
  return sigmoid(score(x));
}

} // namespace ppe::harness
