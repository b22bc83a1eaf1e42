#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ppe/confseq.hpp"

namespace ppe {

struct ChangePointConfig {
  double alpha{0.05};
  std::size_t max_active{6};
  LandscapeArm arm{LandscapeArm::prediction_powered};

  // Level used by each start's confidence sequence.
  double per_start_alpha() const { return alpha / static_cast<double>(max_active); }
};

// A confidence sequence started at `start` (1-based step index).
struct ChangePointStart {
  std::uint64_t start{1};
  PLandscape landscape;
  GridSet running;
};

struct ChangePointState {
  std::uint64_t t{0};
  std::vector<ChangePointStart> starts;  // ordered oldest first
  bool detected{false};
  std::uint64_t detection_time{0};
  double declared_location{0.0};
  std::uint64_t witness_first{0};
  std::uint64_t witness_second{0};
};

// Position (within `starts`, sorted ascending) of the start to drop so that
// the remaining lags stay as close to geometric as possible. The oldest and
// the newest starts are never dropped.
std::size_t thinning_victim(const std::vector<std::uint64_t>& starts, std::uint64_t now);

// Active starts after n steps when one start is opened per step and thinned
// back to max_active.
std::vector<std::uint64_t> cp_start_schedule(std::uint64_t n, std::size_t max_active);

// Opens a start at the new step, thins, advances every start with the shared
// datum and fires when two running sets are disjoint. Frozen after firing.
ChangePointState cp_step(ChangePointState state, const ThetaGrid& grid, const LandscapeStep& datum,
                         const ChangePointConfig& config);

} // namespace ppe
