#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ppe::harness {

struct CriterionResult {
  int id{0};
  std::string name;
  bool passed{false};
  std::string detail;
  double seconds{0.0};
};

struct ValidationOptions {
  unsigned threads{0};  // 0 picks the hardware concurrency
  std::uint64_t seed{20240601};
};

inline constexpr int kCriterionCount = 12;

std::string criterion_name(int id);
CriterionResult run_criterion(int id, const ValidationOptions& options);
std::vector<CriterionResult> run_validation(const std::vector<int>& ids, const ValidationOptions& options);

// "[PASS] 01 name: detail (1.23 s)".
std::string format_result(const CriterionResult& result);

} // namespace ppe::harness
