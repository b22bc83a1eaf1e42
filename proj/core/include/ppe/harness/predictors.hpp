#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ppe/sampling.hpp"

namespace ppe::harness {

// Binary-outcome predictor interface. `update` must only ever see outcomes
// whose step has already been committed.
class Predictor {
public:
  virtual ~Predictor() = default;
  virtual bool update(std::span<const double> x, double y) = 0;
  virtual double predict(std::span<const double> x) const = 0;  // P(y = 1 | x)
  DiscreteDistribution predict_dist(std::span<const double> x) const;
};

// SGD logistic regression on features standardized by running moments.
class OnlineLogistic final : public Predictor {
public:
  explicit OnlineLogistic(std::size_t dim, double step = 0.1, double intercept = 0.0);

  // Feeds the running standardization without a gradient step. Returns
  // false (and warns) for non-finite rows.
  bool observe(std::span<const double> x);
  bool update(std::span<const double> x, double y) override;
  double predict(std::span<const double> x) const override;
  // Linear score (log-odds) of x.
  double score(std::span<const double> x) const;

  std::span<const double> weights() const { return weights_; }
  double intercept() const { return intercept_; }
  std::uint64_t updates() const { return updates_; }

private:
  double standardized(std::span<const double> x, std::size_t j) const;

  double step_;
  double intercept_;
  std::vector<double> weights_;
  std::vector<double> mean_;
  std::vector<double> m2_;
  std::uint64_t seen_{0};
  std::uint64_t updates_{0};
};

double sigmoid(double z);
double logit(double p);

} // namespace ppe::harness
