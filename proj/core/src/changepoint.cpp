#include "ppe/changepoint.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ppe {

std::size_t thinning_victim(const std::vector<std::uint64_t>& starts, std::uint64_t now) {
  if (starts.size() < 3) throw std::invalid_argument("thinning needs at least three starts");
  const auto log_lag = [&](std::size_t j) {
    return std::log(static_cast<double>(now - starts[j] + 1));
  };
  std::size_t victim = 1;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j + 1 < starts.size(); ++j) {
    const double gap = log_lag(j - 1) - log_lag(j + 1);
    if (gap <= best) {
      best = gap;
      victim = j;
    }
  }
  return victim;
}

std::vector<std::uint64_t> cp_start_schedule(std::uint64_t n, std::size_t max_active) {
  if (max_active < 2) throw std::invalid_argument("max_active must be at least 2");
  std::vector<std::uint64_t> starts;
  for (std::uint64_t t = 1; t <= n; ++t) {
    starts.push_back(t);
    if (starts.size() > max_active) {
      starts.erase(starts.begin() + static_cast<std::ptrdiff_t>(thinning_victim(starts, t)));
    }
  }
  return starts;
}

ChangePointState cp_step(ChangePointState state, const ThetaGrid& grid, const LandscapeStep& datum,
                         const ChangePointConfig& config) {
  if (state.detected) return state;
  if (config.max_active < 2) throw std::invalid_argument("max_active must be at least 2");

  ++state.t;
  state.starts.push_back({state.t, PLandscape(grid.size(), config.arm), GridSet(grid.size(), true)});
  if (state.starts.size() > config.max_active) {
    std::vector<std::uint64_t> idx;
    idx.reserve(state.starts.size());
    for (const auto& s : state.starts) idx.push_back(s.start);
    state.starts.erase(state.starts.begin() +
                       static_cast<std::ptrdiff_t>(thinning_victim(idx, state.t)));
  }

  const double level = config.per_start_alpha();
  for (auto& s : state.starts) {
    s.landscape.update(grid, datum, &s.running);
    const double threshold = -std::log(level);
    const auto log_e = s.landscape.log_e();
    for (std::size_t k = 0; k < s.running.size(); ++k) {
      if (s.running[k] && log_e[k] >= threshold) s.running[k] = false;
    }
  }

  // Closest disjoint pair wins.
  std::uint64_t best_gap = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t i = 0; i < state.starts.size(); ++i) {
    for (std::size_t j = i + 1; j < state.starts.size(); ++j) {
      const auto& a = state.starts[i];
      const auto& b = state.starts[j];
      const std::uint64_t gap = b.start - a.start;
      if (gap < best_gap && disjoint(a.running, b.running)) {
        best_gap = gap;
        state.witness_first = a.start;
        state.witness_second = b.start;
      }
    }
  }
  if (best_gap != std::numeric_limits<std::uint64_t>::max()) {
    state.detected = true;
    state.detection_time = state.t;
    state.declared_location =
        0.5 * (static_cast<double>(state.witness_first) + static_cast<double>(state.witness_second));
  }
  return state;
}

} // namespace ppe
