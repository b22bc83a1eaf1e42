#include "ppe/causal/fisher_z.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ppe/diagnostics.hpp"

namespace ppe::causal {

namespace {

constexpr double kPivotThreshold = 1e-10;
constexpr double kMaxAbsR = 1.0 - 1e-15;

} // namespace

FisherZResult fisher_z_from_r(double r, long n, long k) {
  if (n - k - 3 <= 0) throw std::invalid_argument("not enough rows for the Fisher z test");
  FisherZResult out;
  out.r = std::clamp(r, -kMaxAbsR, kMaxAbsR);
  out.z = std::atanh(out.r);
  out.statistic = std::sqrt(static_cast<double>(n - k - 3)) * std::abs(out.z);
  out.p = std::erfc(out.statistic / std::sqrt(2.0));
  return out;
}

FisherZResult fisher_z_test(const Eigen::MatrixXd& data, int a, int b, std::span<const int> cond) {
  const long rows = data.rows();
  const long k = static_cast<long>(cond.size());
  if (rows < k + 4) throw std::invalid_argument("batch has fewer than |C| + 4 rows");
  if (a == b) throw std::invalid_argument("Fisher z test needs two distinct columns");

  const long m = k + 2;
  Eigen::MatrixXd sub(rows, m);
  sub.col(0) = data.col(a);
  sub.col(1) = data.col(b);
  for (long j = 0; j < k; ++j) {
    const int c = cond[static_cast<std::size_t>(j)];
    if (c == a || c == b) throw std::invalid_argument("conditioning set contains a tested column");
    sub.col(j + 2) = data.col(c);
  }

  const Eigen::RowVectorXd mean = sub.colwise().mean();
  sub.rowwise() -= mean;
  const Eigen::MatrixXd cov = (sub.transpose() * sub) / static_cast<double>(rows - 1);
  const Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();

  const auto singular = [&]() {
    warn(WarningKind::singular_correlation,
         "singular correlation matrix for columns " + std::to_string(a) + "," + std::to_string(b));
    FisherZResult out;
    out.singular = true;
    return out;
  };
  if ((sd.array() <= 0.0).any() || !sd.allFinite()) return singular();

  const Eigen::MatrixXd corr = sd.asDiagonal().inverse() * cov * sd.asDiagonal().inverse();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(corr);
  lu.setThreshold(kPivotThreshold);
  if (!lu.isInvertible()) return singular();

  const Eigen::MatrixXd prec = lu.inverse();
  const double denom = prec(0, 0) * prec(1, 1);
  if (!(denom > 0.0) || !std::isfinite(denom)) return singular();
  const double r = -prec(0, 1) / std::sqrt(denom);
  if (!std::isfinite(r) || std::abs(r) >= 1.0) return singular();
  return fisher_z_from_r(r, rows, k);
}

double fisher_z_pvalue(const Eigen::MatrixXd& data, int a, int b, std::span<const int> cond) {
  return fisher_z_test(data, a, b, cond).p;
}

} // namespace ppe::causal
