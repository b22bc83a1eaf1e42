#pragma once

#include <cstdint>
#include <string_view>

namespace ppe {

// Process-wide warning sink. Every call is counted; only the first few
// messages of each kind reach stderr so Monte Carlo loops stay quiet.
enum class WarningKind : int {
  component_clamped = 0,
  policy_degenerate,
  eta_clamped,
  singular_correlation,
  orientation_conflict,
  skipped_row,
  kCount
};

void warn(WarningKind kind, std::string_view message);
std::uint64_t warning_count(WarningKind kind);
void reset_warnings();
void set_warning_echo(bool enabled);

} // namespace ppe
