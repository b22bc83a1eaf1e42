#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "ppe/betting.hpp"
#include "ppe/evalue.hpp"

namespace ppe {

// Theta-indexed family of bounded-mean nulls. Each point carries its own
// truncation c(theta) solved for the common budget, so the policy floor is
// uniform across the grid.
class ThetaGrid {
public:
  static constexpr std::size_t kDefaultSize = 512;
  static constexpr double kDefaultLo = 0.001;
  static constexpr double kDefaultHi = 0.999;

  ThetaGrid(std::vector<double> points, double pi_inf);
  static ThetaGrid uniform(double lo, double hi, std::size_t count, double pi_inf);

  std::size_t size() const { return points_.size(); }
  std::span<const double> points() const { return points_; }
  double pi_inf() const { return pi_inf_; }
  const MeanBetConfig& config(std::size_t k) const { return configs_[k]; }

  // Truncated bet range per theta (prediction-powered arms).
  const BetRange& truncated_range(std::size_t k) const { return truncated_[k]; }
  // Full (-1/(1-theta), 1/theta) range for arms that never debias.
  const BetRange& full_range(std::size_t k) const { return full_[k]; }
  const ComponentBounds& bounds(std::size_t k) const { return bounds_[k]; }

  // max over the grid of (1 - a/b) + kPolicyFloor.
  double policy_floor() const { return policy_floor_; }

  std::size_t nearest(double theta) const;

private:
  std::vector<double> points_;
  double pi_inf_;
  std::vector<MeanBetConfig> configs_;
  std::vector<BetRange> truncated_;
  std::vector<BetRange> full_;
  std::vector<ComponentBounds> bounds_;
  double policy_floor_{0.0};
};

using GridSet = std::vector<bool>;

enum class LandscapeArm {
  prediction_powered,  // debiased components with truncated bets
  labels_only,         // only collected outcomes, untruncated bets
  imputation,          // prediction in place of missing outcomes, no debiasing
};

// One datum as seen by every theta entry: a single shared coin.
struct LandscapeStep {
  double imputed{0.0};
  std::optional<double> label;
  bool collected{false};
  double pi{1.0};
};

// Per-theta e-process states advanced in lockstep.
class PLandscape {
public:
  PLandscape(std::size_t grid_size, LandscapeArm arm);

  // Throws std::invalid_argument when a collected step carries no label.
  // With `mask`, entries outside it are left untouched; callers use this for
  // points already excluded from a running intersection.
  void update(const ThetaGrid& grid, const LandscapeStep& step, const GridSet* mask = nullptr);

  std::span<const double> log_e() const { return log_e_; }
  std::uint64_t n() const { return n_; }
  std::uint64_t labels_used() const { return labels_used_; }
  LandscapeArm arm() const { return arm_; }
  const BetState& bets() const { return bets_; }

private:
  LandscapeArm arm_;
  std::vector<double> log_e_;
  std::uint64_t n_{0};
  std::uint64_t labels_used_{0};
  BetState bets_;
};

// {theta : E(theta) < 1/alpha}.
GridSet invert(std::span<const double> log_e, double alpha);
GridSet invert(const PLandscape& landscape, double alpha);

GridSet running_intersection(std::span<const GridSet> sets);
void intersect_in_place(GridSet& acc, const GridSet& next);
bool is_empty(const GridSet& set);
bool disjoint(const GridSet& a, const GridSet& b);

// Columns theta,e_value,p_landscape with p = min(1, 1/e).
void write_landscape_csv(std::ostream& out, const ThetaGrid& grid, const PLandscape& landscape);

} // namespace ppe
