#pragma once

#include "ppe/evalue.hpp"

namespace ppe {

inline constexpr double kPValueFloor = 1e-7;

struct CalibratorConfig {
  double p_floor{kPValueFloor};
  double eta{1.0};
  double e_min{0.5};
  double e_max{0.0};

  // e_min/e_max from the calibrator, eta from the label budget.
  static CalibratorConfig for_budget(double pi_inf);

  ComponentBounds rescaled_bounds() const;
};

// PToE calibrator (1 - p + p log p) / (p log^2 p), extended by 1/2 at p = 1.
double ptoe(double p);

double clip_p(double p);

// eta (e - 1) + 1.
double rescale(double e, double eta);

// eta making 1 - rescale(e_min) / rescale(e_max) equal pi_inf, capped at 1.
double solve_eta_for_budget(double e_min, double e_max, double pi_inf);

} // namespace ppe
