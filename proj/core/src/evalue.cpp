#include "ppe/evalue.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "ppe/diagnostics.hpp"

namespace ppe {

namespace {
constexpr double kClampReportRel = 1e-9;
constexpr double kPropensitySlack = 1e-12;

bool within(double v, const ComponentBounds& b) {
  return v >= b.lower && v <= b.upper;
}
} // namespace

double PpiStream::e_value() const { return std::exp(log_e); }

void validate_bounds(const ComponentBounds& bounds) {
  if (!(bounds.lower > 0.0) || !(bounds.lower <= bounds.upper) || !std::isfinite(bounds.upper)) {
    throw std::invalid_argument("component bounds must satisfy 0 < a <= b, got a=" +
                                std::to_string(bounds.lower) + " b=" + std::to_string(bounds.upper));
  }
}

double min_collection_prob(double a, double b) {
  validate_bounds({a, b});
  return 1.0 - a / b;
}

double ppi_component(double e_mu, std::optional<double> e_y, bool collected, double pi,
                     const ComponentBounds& bounds) {
  validate_bounds(bounds);
  if (!within(e_mu, bounds)) {
    throw std::invalid_argument("imputed component " + std::to_string(e_mu) + " outside bounds");
  }
  if (!(pi > 0.0) || pi > 1.0) {
    throw std::invalid_argument("collection probability must lie in (0, 1]");
  }
  if (pi < 1.0 - bounds.lower / bounds.upper - kPropensitySlack) {
    throw std::invalid_argument("collection probability " + std::to_string(pi) +
                                " below 1 - a/b for these bounds");
  }
  if (!collected) return e_mu;
  if (!e_y) throw std::invalid_argument("collected step without a labeled component");
  if (!within(*e_y, bounds)) {
    throw std::invalid_argument("labeled component " + std::to_string(*e_y) + " outside bounds");
  }
  // Exact value is >= (a - (1 - pi) b) / pi >= 0; the max only absorbs rounding.
  return std::max(0.0, (*e_y - (1.0 - pi) * e_mu) / pi);
}

double evaluate_component(const ComponentSpec& spec, double value, std::uint64_t& clamp_warnings) {
  const double raw = spec.eval(value);
  const auto& b = spec.bounds;
  if (std::isnan(raw)) throw std::domain_error("component evaluated to NaN");
  if (within(raw, b)) return raw;
  const double edge = raw < b.lower ? b.lower : b.upper;
  if (std::abs(raw - edge) > kClampReportRel * std::abs(edge)) {
    ++clamp_warnings;
    warn(WarningKind::component_clamped, "component value clamped into certified bounds");
  }
  return edge;
}

PpiStream advance(PpiStream stream, double component, bool collected) {
  if (!(component > 0.0) || !std::isfinite(component)) {
    throw std::domain_error("prediction-powered component is not strictly positive: " +
                            std::to_string(component));
  }
  stream.log_e += std::log(component);
  ++stream.n;
  if (collected) ++stream.labels_used;
  return stream;
}

PpiStream step(PpiStream stream, const Observation& obs, const ComponentSpec& spec,
               double predictor_value) {
  if (obs.collected && !obs.y) throw std::invalid_argument("collected observation without y");
  const double e_mu = evaluate_component(spec, predictor_value, stream.clamp_warnings);
  std::optional<double> e_y;
  if (obs.collected) e_y = evaluate_component(spec, *obs.y, stream.clamp_warnings);
  const double comp = ppi_component(e_mu, e_y, obs.collected, obs.pi, spec.bounds);
  return advance(std::move(stream), comp, obs.collected);
}

bool draw_xi(double pi, CounterRng& rng) {
  if (!(pi >= 0.0 && pi <= 1.0)) throw std::invalid_argument("pi must lie in [0, 1]");
  return rng.uniform() < pi;
}

nlohmann::json to_json(const PpiStream& stream) {
  return {
      {"version", kStreamRecordVersion},
      {"log_e", stream.log_e},
      {"n", stream.n},
      {"labels_used", stream.labels_used},
      {"clamp_warnings", stream.clamp_warnings},
      {"rng_key", stream.rng.key()},
      {"rng_counter", stream.rng.counter()},
  };
}

PpiStream stream_from_json(const nlohmann::json& record) {
  const int version = record.at("version").get<int>();
  if (version != kStreamRecordVersion) {
    throw std::invalid_argument("unsupported stream record version " + std::to_string(version));
  }
  PpiStream s;
  s.log_e = record.at("log_e").get<double>();
  s.n = record.at("n").get<std::uint64_t>();
  s.labels_used = record.at("labels_used").get<std::uint64_t>();
  s.clamp_warnings = record.value("clamp_warnings", std::uint64_t{0});
  s.rng = CounterRng::from_state(record.at("rng_key").get<std::uint64_t>(),
                                 record.at("rng_counter").get<std::uint64_t>());
  return s;
}

} // namespace ppe
