#pragma once

#include <span>

#include <Eigen/Dense>

namespace ppe::causal {

struct FisherZResult {
  double r{0.0};
  double z{0.0};
  double statistic{0.0};
  double p{1.0};
  bool singular{false};
};

// p-value of a partial-correlation magnitude r from n rows given k
// conditioning variables.
FisherZResult fisher_z_from_r(double r, long n, long k);

// Partial correlation of columns a and b of `data` given `cond`, obtained by
// inverting the correlation matrix of the involved columns. A singular
// matrix yields p = 1 and a warning. Requires rows >= |cond| + 4.
FisherZResult fisher_z_test(const Eigen::MatrixXd& data, int a, int b, std::span<const int> cond);

double fisher_z_pvalue(const Eigen::MatrixXd& data, int a, int b, std::span<const int> cond);

} // namespace ppe::causal
