#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ppe/rng.hpp"

namespace ppe {

// Margin added on top of 1 - a/b so that the collected branch of the
// prediction-powered component stays strictly positive.
inline constexpr double kPolicyFloor = 1e-9;

// Certified range [lower, upper] of a component, 0 < lower <= upper.
struct ComponentBounds {
  double lower{1.0};
  double upper{1.0};
};

// A predictable e-value component: y -> e(y) together with its bounds.
struct ComponentSpec {
  std::function<double(double)> eval;
  ComponentBounds bounds;
};

struct Observation {
  std::vector<double> x;
  std::optional<double> y;  // present iff collected
  bool collected{false};
  double pi{1.0};
};

// Running state of one prediction-powered e-process. The product is kept in
// log space; streams are values and can be copied between threads freely.
struct PpiStream {
  double log_e{0.0};
  std::uint64_t n{0};
  std::uint64_t labels_used{0};
  std::uint64_t clamp_warnings{0};
  CounterRng rng{};

  double e_value() const;
};

void validate_bounds(const ComponentBounds& bounds);

// 1 - a/b: the smallest collection probability that keeps the collected
// branch nonnegative.
double min_collection_prob(double a, double b);

// e_mu when nothing was collected, otherwise (e_y - (1 - pi) e_mu) / pi.
// Throws std::invalid_argument on bound or propensity violations.
double ppi_component(double e_mu, std::optional<double> e_y, bool collected, double pi,
                     const ComponentBounds& bounds);

// Evaluates spec.eval(value) and clamps into the certified bounds. Clamps
// larger than 1e-9 relative increment `clamp_warnings`.
double evaluate_component(const ComponentSpec& spec, double value, std::uint64_t& clamp_warnings);

// Multiplies the stream by a precomputed component. Throws std::domain_error
// when the component is not strictly positive.
PpiStream advance(PpiStream stream, double component, bool collected);

PpiStream step(PpiStream stream, const Observation& obs, const ComponentSpec& spec,
               double predictor_value);

// Bernoulli(pi) draw from the stream's generator.
bool draw_xi(double pi, CounterRng& rng);

inline constexpr int kStreamRecordVersion = 1;

nlohmann::json to_json(const PpiStream& stream);
PpiStream stream_from_json(const nlohmann::json& record);

} // namespace ppe
