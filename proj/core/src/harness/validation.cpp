#include "ppe/harness/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ppe/betting.hpp"
#include "ppe/calibrate.hpp"
#include "ppe/causal/ci_process.hpp"
#include "ppe/causal/scm.hpp"
#include "ppe/confseq.hpp"
#include "ppe/diagnostics.hpp"
#include "ppe/evalue.hpp"
#include "ppe/harness/cases.hpp"
#include "ppe/harness/parallel.hpp"

namespace ppe::harness {

namespace {

constexpr double kAlpha = 0.05;

double binomial_limit(double p, std::size_t reps) {
  return p + 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
  return buf;
}

double uniform_in(CounterRng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

// 1. E[e_ppi] = E[e(y)] by enumeration over (y, xi).
CriterionResult unbiasedness(const ValidationOptions& opt) {
  CounterRng rng(opt.seed, "c1");
  double worst = 0.0;
  double worst_identity = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double theta = uniform_in(rng, 0.02, 0.98);
    const double budget = uniform_in(rng, 0.001, 1.0);
    const auto cfg = MeanBetConfig::from_budget(theta, budget);
    const auto range = cfg.range();
    const auto bounds = cfg.bounds();
    const double lambda = uniform_in(rng, range.lo, range.hi);
    const double pi = uniform_in(rng, std::min(1.0, min_collection_prob(bounds.lower, bounds.upper) + kPolicyFloor), 1.0);
    const double e_mu = 1.0 + lambda * (rng.uniform() - theta);

    const int support = 2 + static_cast<int>(rng() % 5);
    std::vector<double> ys(static_cast<std::size_t>(support));
    std::vector<double> ps(static_cast<std::size_t>(support));
    double total = 0.0;
    for (int j = 0; j < support; ++j) {
      ys[static_cast<std::size_t>(j)] = j < 2 ? static_cast<double>(j) : rng.uniform();
      ps[static_cast<std::size_t>(j)] = rng.uniform() + 1e-3;
      total += ps[static_cast<std::size_t>(j)];
    }
    double lhs = 0.0;
    double rhs = 0.0;
    for (int j = 0; j < support; ++j) {
      const double p = ps[static_cast<std::size_t>(j)] / total;
      const double e_y = 1.0 + lambda * (ys[static_cast<std::size_t>(j)] - theta);
      const double collected = ppi_component(e_mu, e_y, true, pi, bounds);
      const double skipped = ppi_component(e_mu, std::nullopt, false, pi, bounds);
      const double mix = pi * collected + (1.0 - pi) * skipped;
      worst_identity = std::max(worst_identity, std::abs(mix - e_y));
      lhs += p * mix;
      rhs += p * e_y;
    }
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  const bool ok = worst <= 1e-12 && worst_identity <= 1e-12;
  return {1, "", ok, fmt("max |E[e_ppi]-E[e]| = %.3g, max per-outcome gap = %.3g (tol 1e-12, 1000 configs)", worst, worst_identity)};
}

// 2. Anytime type-I error of the bounded-mean test at the true mean.
CriterionResult type_one(const ValidationOptions& opt) {
  constexpr std::size_t reps = 2000;
  const double theta = 0.3;
  const ThetaGrid grid(std::vector<double>{theta}, 0.01);
  MeanRunOptions mopt;
  mopt.n = 1000;
  mopt.alpha = kAlpha;
  mopt.arms = {"ppi"};
  mopt.track = 0;
  const auto rejected = parallel_map(reps, opt.threads, [&](std::size_t r) {
    const std::uint64_t seed = opt.seed * 7919 + r;
    const auto rows = synthetic_mean_rows({theta, 2, 1.0}, mopt.n, seed);
    return run_mean_stream(grid, rows, mopt, seed).arms.front().track_covered ? 0 : 1;
  });
  const double rate = static_cast<double>(std::count(rejected.begin(), rejected.end(), 1)) / reps;
  const double limit = binomial_limit(kAlpha, reps);
  return {2, "", rate <= limit, fmt("rejection rate %.4f (limit %.4f, 2000 replicas, n=1000, budget 1%%)", rate, limit)};
}

// 3. Simultaneous coverage of the prediction-powered confidence sequence.
CriterionResult coverage(const ValidationOptions& opt) {
  constexpr std::size_t reps = 2000;
  const ThetaGrid grid = ThetaGrid::uniform(ThetaGrid::kDefaultLo, ThetaGrid::kDefaultHi, ThetaGrid::kDefaultSize, 0.01);
  const std::size_t k = grid.nearest(0.3);
  const double theta = grid.points()[k];
  MeanRunOptions mopt;
  mopt.n = 1000;
  mopt.alpha = kAlpha;
  mopt.arms = {"ppi"};
  mopt.track = k;
  const auto covered = parallel_map(reps, opt.threads, [&](std::size_t r) {
    const std::uint64_t seed = opt.seed * 104729 + r;
    const auto rows = synthetic_mean_rows({theta, 2, 1.0}, mopt.n, seed);
    return run_mean_stream(grid, rows, mopt, seed).arms.front().track_covered ? 1 : 0;
  });
  const double rate = static_cast<double>(std::count(covered.begin(), covered.end(), 1)) / reps;
  return {3, "", rate >= 0.935, fmt("coverage %.4f over n<=1000 (need >= 0.935, 2000 replicas, 512-point grid)", rate)};
}

// 4. Nonnegativity of the prediction-powered component.
CriterionResult nonnegativity(const ValidationOptions& opt) {
  CounterRng rng(opt.seed, "c4");
  std::size_t violations = 0;
  double smallest = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 100000; ++k) {
    const double a = uniform_in(rng, 1e-6, 1.0);
    const double b = a + uniform_in(rng, 0.0, 10.0);
    const ComponentBounds bounds{a, b};
    const double floor = min_collection_prob(a, b);
    const bool edge = (rng() % 10) == 0;
    const double pi = edge ? std::max(floor, 1e-300) : uniform_in(rng, floor, 1.0);
    if (!(pi > 0.0)) continue;
    const double e_mu = edge ? b : uniform_in(rng, a, b);
    const double e_y = edge ? a : uniform_in(rng, a, b);
    const bool xi = rng.uniform() < 0.5;
    const double v = ppi_component(e_mu, xi ? std::optional<double>(e_y) : std::nullopt, xi, pi, bounds);
    smallest = std::min(smallest, v);
    if (!(v >= 0.0)) ++violations;
  }
  return {4, "", violations == 0, fmt("%.0f violations in 1e5 draws, smallest component %.3g", static_cast<double>(violations), smallest)};
}

// 5. Empirical log-growth against the conditional two-term decomposition.
CriterionResult growth(const ValidationOptions& opt) {
  constexpr int steps = 10000;
  const double theta = 0.3;
  const double pi = 0.25;
  const auto cfg = MeanBetConfig::from_budget(theta, pi);
  const auto bounds = cfg.bounds();
  const double lambda = 0.8 * cfg.range().hi;
  const MeanStreamSpec spec{0.45, 2, 1.0};
  CounterRng data(opt.seed, "c5-data");
  CounterRng coins(opt.seed, "c5-coins");
  double sum_diff = 0.0;
  double sum_diff2 = 0.0;
  double sum_log = 0.0;
  double sum_term = 0.0;
  for (int i = 0; i < steps; ++i) {
    const auto row = draw_mean_row(spec, data);
    const double mu = std::clamp(row.p_true - 0.1, 0.0, 1.0);
    const double e_mu = mean_component(mu, theta, lambda);
    const double e_y = mean_component(row.y, theta, lambda);
    const bool xi = coins.uniform() < pi;
    const double comp = ppi_component(e_mu, xi ? std::optional<double>(e_y) : std::nullopt, xi, pi, bounds);
    const double d = std::log(comp);
    const double t = (1.0 - pi) * std::log(e_mu) + pi * std::log(e_mu + (e_y - e_mu) / pi);
    sum_log += d;
    sum_term += t;
    sum_diff += d - t;
    sum_diff2 += (d - t) * (d - t);
  }
  const double mean_diff = sum_diff / steps;
  const double var = (sum_diff2 - steps * mean_diff * mean_diff) / (steps - 1);
  const double se = std::sqrt(var / steps);
  const bool ok = std::abs(mean_diff) <= 3.0 * se;
  return {5, "", ok,
          fmt("mean log e_ppi %.6f vs decomposition %.6f, |gap| %.3g <= 3 SE = %.3g", sum_log / steps, sum_term / steps,
              std::abs(mean_diff), 3.0 * se)};
}

// 6. PToE integrates to at most one; closed-form spot values.
CriterionResult calibrator(const ValidationOptions&) {
  // Substituting p = exp(-s): integral = int_0^inf ptoe(e^-s) e^-s ds, tail
  // beyond S bounded by int_S^inf ds / s^2 = 1 / S.
  constexpr double cut = 700.0;
  const auto integrand = [](double s) {
    if (s <= 0.0) return 0.5;
    const double p = std::exp(-s);
    return ptoe(p) * p;
  };
  double error = 0.0;
  const double body = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, cut, 25, 1e-12, &error);
  const double total = body + error + 1.0 / cut;
  const double at_inv_e = std::abs(ptoe(std::exp(-1.0)) - (std::exp(1.0) - 2.0));
  const double at_one = std::abs(ptoe(1.0) - 0.5);
  const double near_one = std::abs(ptoe(1.0 - 1e-9) - 0.5);
  const bool ok = total <= 1.0 + 1e-3 && at_inv_e <= 1e-12 && at_one <= 1e-9 && near_one <= 1e-9;
  return {6, "", ok,
          fmt("integral bound %.8f (<= 1.001), |ptoe(1/e)-(e-2)| %.2g, |ptoe(1)-0.5| %.2g, |ptoe(1-1e-9)-0.5| %.2g", total,
              at_inv_e, at_one, near_one)};
}

// 7. Budget equations hold with equality after back-substitution.
CriterionResult budget_tightness(const ValidationOptions& opt) {
  CounterRng rng(opt.seed, "c7");
  double worst_mean = 0.0;
  double worst_risk = 0.0;
  double worst_eta = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double budget = uniform_in(rng, 1e-4, 1.0);
    const double theta = uniform_in(rng, 0.01, 0.99);
    const double c = solve_c_mean(theta, budget);
    const double spread = std::max(theta / (1.0 - theta), (1.0 - theta) / theta);
    worst_mean = std::max(worst_mean, std::abs(1.0 - (1.0 - c) / (1.0 + c * spread) - budget));

    const double m0 = uniform_in(rng, 0.01, 1.5);
    const double cr = solve_c_risk(m0, budget);
    const double spread_r = std::max(1.0 / m0 - 1.0, 0.0);
    worst_risk = std::max(worst_risk, std::abs(1.0 - (1.0 - cr) / (1.0 + cr * spread_r) - budget));

    const double e_max = k % 2 == 0 ? ptoe(kPValueFloor) : uniform_in(rng, 2.0, 1e5);
    const double eta_budget = uniform_in(rng, 1e-4, 0.5);
    const double eta = solve_eta_for_budget(0.5, e_max, eta_budget);
    const double lo = eta * (0.5 - 1.0) + 1.0;
    const double hi = eta * (e_max - 1.0) + 1.0;
    worst_eta = std::max(worst_eta, std::abs(1.0 - lo / hi - eta_budget));
  }
  const bool ok = worst_mean <= 1e-12 && worst_risk <= 1e-12 && worst_eta <= 1e-12;
  return {7, "", ok, fmt("max residuals: mean %.2g, risk %.2g, eta %.2g (tol 1e-12, 1000 configs)", worst_mean, worst_risk, worst_eta)};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// 8. Prediction-powered rejections come earlier on a poisoned stream.
CriterionResult power_ordering(const ValidationOptions& opt) {
  constexpr std::size_t reps = 200;
  RiskRunOptions ropt;
  ropt.n = 10000;
  ropt.alpha = kAlpha;
  ropt.budget = 0.01;
  ropt.arms = {"labels_only", "ppi"};
  ropt.schedule = poison_flip_prob;
  const auto times = parallel_map(reps, opt.threads, [&](std::size_t r) {
    const auto res = run_risk_stream(ropt, opt.seed * 31 + r);
    const auto t = [](const RiskArmOutcome& a) {
      return a.rejection_time ? static_cast<double>(*a.rejection_time) : std::numeric_limits<double>::infinity();
    };
    return std::pair<double, double>{t(res.arm("ppi")), t(res.arm("labels_only"))};
  });
  std::vector<double> ppi;
  std::vector<double> labels;
  for (const auto& [a, b] : times) {
    ppi.push_back(a);
    labels.push_back(b);
  }
  const double mp = median(ppi);
  const double ml = median(labels);
  return {8, "", mp < ml, fmt("median rejection time: ppi %.0f, labels-only %.0f (200 replicas, n=1e4, budget 1%%)", mp, ml)};
}

// 9. A biased imputer miscovers; the debiased sequence keeps coverage.
CriterionResult imputation_failure(const ValidationOptions& opt) {
  constexpr std::size_t reps = 500;
  const ThetaGrid grid = ThetaGrid::uniform(ThetaGrid::kDefaultLo, ThetaGrid::kDefaultHi, ThetaGrid::kDefaultSize, 0.01);
  const std::size_t k = grid.nearest(0.3);
  const double theta = grid.points()[k];
  MeanRunOptions mopt;
  mopt.n = 5000;
  mopt.alpha = kAlpha;
  mopt.arms = {"imputation", "ppi"};
  mopt.predictor = "biased";
  mopt.predictor_bias = 0.15;
  mopt.track = k;
  const auto outcome = parallel_map(reps, opt.threads, [&](std::size_t r) {
    const std::uint64_t seed = opt.seed * 613 + r;
    const auto rows = synthetic_mean_rows({theta, 2, 1.0}, mopt.n, seed);
    const auto res = run_mean_stream(grid, rows, mopt, seed);
    return std::pair<int, int>{res.arm("imputation").running[k] ? 0 : 1, res.arm("ppi").running[k] ? 1 : 0};
  });
  double miss = 0.0;
  double cover = 0.0;
  for (const auto& [m, c] : outcome) {
    miss += m;
    cover += c;
  }
  miss /= reps;
  cover /= reps;
  return {9, "", miss >= 0.5 && cover >= 0.935,
          fmt("imputation miscoverage %.4f (need >= 0.5), ppi coverage %.4f (need >= 0.935) at n=5000", miss, cover)};
}

// 10. Change-point false alarms and detections.
CriterionResult changepoint(const ValidationOptions& opt) {
  constexpr std::size_t reps = 500;
  ChangePointRunOptions base;
  base.alpha = kAlpha;
  base.budget = 0.005;
  base.arms = {"ppi"};

  auto null_opts = base;
  null_opts.schedule = no_flip;
  const auto alarms = parallel_map(reps, opt.threads, [&](std::size_t r) {
    return run_changepoint_stream(null_opts, opt.seed * 977 + r).arm("ppi").detected ? 1 : 0;
  });
  const double change = base.change_time * static_cast<double>(base.n);
  const auto hits = parallel_map(reps, opt.threads, [&](std::size_t r) {
    const auto a = run_changepoint_stream(base, opt.seed * 983 + r).arm("ppi");
    const bool after = a.detected && static_cast<double>(a.detection_time) > change;
    const bool located = after && std::abs(a.declared_location - change) <= 0.15 * static_cast<double>(base.n);
    return std::pair<int, int>{after ? 1 : 0, located ? 1 : 0};
  });
  const double fa = static_cast<double>(std::count(alarms.begin(), alarms.end(), 1)) / reps;
  double det = 0.0;
  double loc = 0.0;
  for (const auto& [a, l] : hits) {
    det += a;
    loc += l;
  }
  det /= reps;
  loc /= reps;
  const double limit = binomial_limit(kAlpha, reps);
  return {10, "", fa <= limit && det >= 0.8,
          fmt("false alarms %.4f (limit %.4f), detections after change %.4f (need >= 0.8), located within 15%% %.4f", fa,
              limit, det, loc)};
}

bool involves_costly(const causal::Dag& dag, int a, int b, const std::vector<int>& c) {
  const auto costly = [&](int v) { return dag.costly[static_cast<std::size_t>(v)]; };
  return costly(a) || costly(b) || std::any_of(c.begin(), c.end(), costly);
}

// 11. Causal discovery: recall ordering and level-0 false edges.
CriterionResult causal_discovery(const ValidationOptions& opt) {
  constexpr std::size_t seeds = 50;
  causal::CiStreamConfig stream_cfg{200, 100, 0.1};
  CausalRunOptions copt;
  copt.stream = stream_cfg;
  copt.alpha = kAlpha;
  copt.arms = {"labels_only", "ppi", "full_data"};
  struct SeedOutcome {
    double ppi_recall{0.0};
    double labels_recall{0.0};
    double full_recall{0.0};
    int null_pairs{0};
    int null_rejections{0};
  };
  const auto out = parallel_map(seeds, opt.threads, [&](std::size_t s) {
    const std::uint64_t seed = opt.seed * 17 + s;
    const auto res = run_causal_seed(copt, seed);
    SeedOutcome o{res.arm("ppi").score.recall, res.arm("labels_only").score.recall, res.arm("full_data").score.recall, 0, 0};
    const auto stream = causal::make_ci_stream(res.scm, stream_cfg, seed);
    const auto cal = CalibratorConfig::for_budget(stream_cfg.pi_inf);
    for (int a = 0; a < res.scm.dag.nodes; ++a) {
      for (int b = a + 1; b < res.scm.dag.nodes; ++b) {
        if (!causal::d_separated(res.scm.dag, a, b, {})) continue;
        ++o.null_pairs;
        const auto task = causal::run_ci_task(causal::make_task(a, b, {}), stream, causal::CiMode::ppi, cal, kAlpha);
        if (task.decision == causal::CIDecision::dependent) ++o.null_rejections;
      }
    }
    return o;
  });
  int ordered = 0;
  int pairs = 0;
  int rejections = 0;
  double ppi_mean = 0.0;
  double labels_mean = 0.0;
  double full_mean = 0.0;
  for (const auto& o : out) {
    if (o.ppi_recall >= o.labels_recall) ++ordered;
    pairs += o.null_pairs;
    rejections += o.null_rejections;
    ppi_mean += o.ppi_recall / seeds;
    labels_mean += o.labels_recall / seeds;
    full_mean += o.full_recall / seeds;
  }
  const double rate = pairs ? static_cast<double>(rejections) / pairs : 0.0;
  const double limit = pairs ? binomial_limit(kAlpha, static_cast<std::size_t>(pairs)) : 1.0;
  const bool ok = ordered == static_cast<int>(seeds) && rate <= limit;
  std::ostringstream os;
  os << "ppi recall >= labels-only on " << ordered << "/" << seeds << " seeds; mean recall ppi "
     << fmt("%.3f, labels-only %.3f, full %.3f; ", ppi_mean, labels_mean, full_mean) << "null-pair false edges "
     << rejections << "/" << pairs << fmt(" = %.4f (limit %.4f)", rate, limit);
  return {11, "", ok, os.str()};
}

// 12. Batched CI e-process rejection rate on true nulls.
CriterionResult ci_calibration(const ValidationOptions& opt) {
  constexpr std::size_t reps = 400;
  const causal::CiStreamConfig stream_cfg{200, 100, 0.1};
  const auto cal = CalibratorConfig::for_budget(stream_cfg.pi_inf);
  const auto rejected = parallel_map(reps, opt.threads, [&](std::size_t r) {
    std::uint64_t seed = opt.seed * 7 + r;
    CounterRng pick(seed, "c12-pick");
    for (int attempt = 0;; ++attempt) {
      const auto scm = causal::synth_scm({}, seed + 1000003ULL * static_cast<std::uint64_t>(attempt));
      std::vector<std::tuple<int, int, std::vector<int>>> nulls;
      std::vector<std::tuple<int, int, std::vector<int>>> costly_nulls;
      const int d = scm.dag.nodes;
      for (int a = 0; a < d; ++a) {
        for (int b = a + 1; b < d; ++b) {
          std::vector<int> rest;
          for (int v = 0; v < d; ++v) {
            if (v != a && v != b) rest.push_back(v);
          }
          const auto consider = [&](std::vector<int> c) {
            if (!causal::d_separated(scm.dag, a, b, c)) return;
            (involves_costly(scm.dag, a, b, c) ? costly_nulls : nulls).emplace_back(a, b, c);
          };
          consider({});
          for (std::size_t i = 0; i < rest.size(); ++i) {
            consider({rest[i]});
            for (std::size_t j = i + 1; j < rest.size(); ++j) consider({rest[i], rest[j]});
          }
        }
      }
      const auto& pool = costly_nulls.empty() ? nulls : costly_nulls;
      if (pool.empty()) continue;
      const auto& [a, b, c] = pool[pick() % pool.size()];
      const auto stream = causal::make_ci_stream(scm, stream_cfg, seed + 1000003ULL * static_cast<std::uint64_t>(attempt));
      const auto task = causal::run_ci_task(causal::make_task(a, b, c), stream, causal::CiMode::ppi, cal, kAlpha);
      return task.decision == causal::CIDecision::dependent ? 1 : 0;
    }
  });
  const double rate = static_cast<double>(std::count(rejected.begin(), rejected.end(), 1)) / reps;
  const double limit = binomial_limit(kAlpha, reps);
  return {12, "", rate <= limit, fmt("rejection rate %.4f on true nulls (limit %.4f, 400 replicas x 200 batches)", rate, limit)};
}

} // namespace

std::string criterion_name(int id) {
  switch (id) {
  case 1: return "unbiasedness identity";
  case 2: return "type-I control";
  case 3: return "confidence sequence coverage";
  case 4: return "component nonnegativity";
  case 5: return "growth decomposition";
  case 6: return "calibrator validity";
  case 7: return "budget tightness";
  case 8: return "power ordering";
  case 9: return "imputation failure";
  case 10: return "change-point detection";
  case 11: return "causal discovery";
  case 12: return "CI-test calibration";
  default: throw std::out_of_range("unknown criterion " + std::to_string(id));
  }
}

CriterionResult run_criterion(int id, const ValidationOptions& options) {
  ValidationOptions opt = options;
  if (opt.threads == 0) opt.threads = default_threads();
  const bool echo = true;
  set_warning_echo(false);
  const auto start = std::chrono::steady_clock::now();
  CriterionResult res;
  switch (id) {
  case 1: res = unbiasedness(opt); break;
  case 2: res = type_one(opt); break;
  case 3: res = coverage(opt); break;
  case 4: res = nonnegativity(opt); break;
  case 5: res = growth(opt); break;
  case 6: res = calibrator(opt); break;
  case 7: res = budget_tightness(opt); break;
  case 8: res = power_ordering(opt); break;
  case 9: res = imputation_failure(opt); break;
  case 10: res = changepoint(opt); break;
  case 11: res = causal_discovery(opt); break;
  case 12: res = ci_calibration(opt); break;
  default: throw std::out_of_range("unknown criterion " + std::to_string(id));
  }
  set_warning_echo(echo);
  res.id = id;
  res.name = criterion_name(id);
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

std::vector<CriterionResult> run_validation(const std::vector<int>& ids, const ValidationOptions& options) {
  std::vector<CriterionResult> out;
  for (int id : ids) out.push_back(run_criterion(id, options));
  return out;
}

std::string format_result(const CriterionResult& r) {
  char head[64];
  std::snprintf(head, sizeof head, "[%s] %02d ", r.passed ? "PASS" : "FAIL", r.id);
  char tail[64];
  std::snprintf(tail, sizeof tail, " (%.2f s)", r.seconds);
  return std::string(head) + r.name + ": " + r.detail + tail;
}

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

} // namespace ppe::harness
