// Copyright 2026 The skillpdf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "skillpdf/density.hpp"
#include "skillpdf/error.hpp"
#include "skillpdf/kernel.hpp"
#include "skillpdf/model.hpp"
#include "skillpdf/quadrature.hpp"
#include "skillpdf/random.hpp"
#include "skillpdf/rank_centrality.hpp"

namespace skillpdf {

namespace detail {

inline void require_same_length(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidArgument("risk arguments differ in length");
  if (a.empty()) throw InvalidArgument("risk of empty vectors");
}

}  // namespace detail

/// max_i |a_i - b_i| / max_i b_i.
inline double relative_linf_risk(std::span<const double> estimate,
                                 std::span<const double> truth) {
  detail::require_same_length(estimate, truth);
  const double scale = *std::max_element(truth.begin(), truth.end());
  if (!(scale > 0.0)) throw InvalidArgument("reference vector has no positive entry");
  double worst = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i)
    worst = std::max(worst, std::abs(estimate[i] - truth[i]));
  return worst / scale;
}

inline double l1_risk(std::span<const double> estimate, std::span<const double> truth) {
  detail::require_same_length(estimate, truth);
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) sum += std::abs(estimate[i] - truth[i]);
  return sum;
}

/// ||a - b||_2 / ||b||_2.
inline double relative_l2_risk(std::span<const double> estimate,
                               std::span<const double> truth) {
  detail::require_same_length(estimate, truth);
  double diff = 0.0;
  double norm = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    diff += (estimate[i] - truth[i]) * (estimate[i] - truth[i]);
    norm += truth[i] * truth[i];
  }
  if (!(norm > 0.0)) throw InvalidArgument("reference vector is zero");
  return std::sqrt(diff / norm);
}

/// int (f - g)^2 over [lo, hi] by the trapezoid rule on `points` nodes.
/// When the truth exposes its support (lower()/upper()), the range is split
/// there and each piece is sampled with one-sided limits, so the jumps of a
/// discontinuous truth cost O(dx^2) instead of O(dx).
template <class F, class G>
double integrated_squared_error(const F& estimate, const G& truth,
                                double lo = kSupportLo, double hi = kSupportHi,
                                std::size_t points = kQuadraturePoints) {
  const auto sq = [&](double x) {
    const double d = estimate(x) - truth(x);
    return d * d;
  };
  std::vector<double> cuts{lo};
  if constexpr (requires { truth.lower(); truth.upper(); }) {
    for (double c : {truth.lower(), truth.upper()})
      if (c > cuts.back() && c < hi) cuts.push_back(c);
  }
  cuts.push_back(hi);
  if (cuts.size() == 2) return trapezoid(sq, lo, hi, points);

  double total = 0.0;
  for (std::size_t piece = 0; piece + 1 < cuts.size(); ++piece) {
    const double a = cuts[piece];
    const double b = cuts[piece + 1];
    const auto nodes = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::llround(static_cast<double>(points) * (b - a) / (hi - lo))));
    const double dx = (b - a) / static_cast<double>(nodes - 1);
    double sum = 0.5 * (sq(std::nextafter(a, b)) + sq(std::nextafter(b, a)));
    for (std::size_t i = 1; i + 1 < nodes; ++i) sum += sq(a + static_cast<double>(i) * dx);
    total += sum * dx;
  }
  return total;
}

enum class BandwidthRule { Theoretical, Practical };

inline const char* to_string(BandwidthRule rule) {
  return rule == BandwidthRule::Theoretical ? "theoretical" : "practical";
}

/// Everything one simulated trial needs besides its seed.
struct TrialConfig {
  DensityFamily family = DensityFamily::Uniform;
  DensityClassSpec spec{};
  FamilyParams params{};
  std::size_t n = 100;
  double p = 1.0;
  std::uint32_t k = 10;
  BandwidthRule bandwidth = BandwidthRule::Theoretical;
  double gamma = 1.0;
  double eta = 1.0;
  std::string kernel = "epanechnikov";
  bool truncate = false;
  // Replaces the sampled skills when set (size must equal n).
  std::optional<std::vector<double>> fixed_skills;
  std::optional<double> power_tolerance;
  std::size_t max_iterations = kDefaultMaxIterations;

  void validate() const {
    spec.validate();
    if (n < 2) throw InvalidArgument("n must be at least 2");
    if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("p must lie in (0,1]");
    if (k < 1) throw InvalidArgument("k must be at least 1");
    if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
    if (!(eta > 0.0)) throw InvalidArgument("eta must be positive");
    if (fixed_skills && fixed_skills->size() != n)
      throw InvalidArgument("fixed skills must have n entries");
    if (power_tolerance && !(*power_tolerance > 0.0))
      throw InvalidArgument("power iteration tolerance must be positive");
    if (max_iterations < 1) throw InvalidArgument("need at least one iteration");
    (void)kernel_from_name(kernel);
  }
};

struct TrialResult {
  std::size_t n = 0;
  double p = 0.0;
  std::uint32_t k = 0;
  std::uint64_t seed = 0;
  double rel_linf_risk = 0.0;
  double l1_risk = 0.0;
  double rel_l2_risk = 0.0;
  double ise = 0.0;
  double skill_sup_error = 0.0;
  bool converged = false;
  std::size_t retries = 0;
  std::size_t iterations = 0;
  double bandwidth = 0.0;
};

// Intermediate artefacts of one trial, kept for inspection and export.
struct PipelineRun {
  SkillVector truth;
  ObservationMatrix observations;
  RankCentralityResult estimate;
  DensityEstimate density;
  TrialResult result;
};

inline constexpr std::size_t kMaxGraphRetries = 5;

inline double bandwidth_for(const TrialConfig& config) {
  if (config.bandwidth == BandwidthRule::Practical) {
    return practical_bandwidth(static_cast<double>(config.n));
  }
  return theoretical_bandwidth(static_cast<double>(config.n), config.p, config.k,
                               config.spec.delta, config.eta, config.gamma);
}

/// Runs the whole simulation: skills, graph, games, rank centrality, kernel
/// density estimate, and risks against the ground truth. Disconnected
/// graphs are redrawn from derived seeds up to kMaxGraphRetries times.
inline PipelineRun run_pipeline(const TrialConfig& config, std::uint64_t seed) {
  config.validate();
  const TestDensity truth_density = make_test_density(config.spec, config.family, config.params);
  SkillVector truth = config.fixed_skills
                          ? SkillVector(*config.fixed_skills, config.spec.delta)
                          : sample_skills(truth_density, config.n, child_seed(seed, {0}));

  std::size_t attempt = 0;
  std::optional<ComparisonGraph> graph;
  for (;; ++attempt) {
    graph.emplace(sample_graph(config.n, config.p, child_seed(seed, {1, attempt})));
    const auto connectivity = check_connected(*graph);
    if (connectivity.connected) break;
    if (attempt == kMaxGraphRetries) throw DisconnectedGraphError(connectivity.components);
  }
  ObservationMatrix observations =
      simulate_games(truth, std::move(*graph), config.k, child_seed(seed, {2, attempt}));

  RankCentralityResult estimate =
      rank_centrality(observations, config.p, config.power_tolerance, config.max_iterations);

  const double h = bandwidth_for(config);
  DensityEstimate density = kde(estimate.skills.values, h, kernel_from_name(config.kernel));
  if (config.truncate) density = truncate_nonneg(density);

  const ProbVector pi = canonical_pi(truth);
  const auto pi_hat = estimate.stationary.pi_hat.entries();
  TrialResult result;
  result.n = config.n;
  result.p = config.p;
  result.k = config.k;
  result.seed = seed;
  result.rel_linf_risk = relative_linf_risk(pi_hat, pi.entries());
  result.l1_risk = l1_risk(pi_hat, pi.entries());
  result.rel_l2_risk = relative_l2_risk(pi_hat, pi.entries());
  result.ise = integrated_squared_error(density, truth_density);
  double sup = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i)
    sup = std::max(sup, std::abs(estimate.skills.values[i] - truth[i]));
  result.skill_sup_error = sup;
  result.converged = estimate.stationary.converged;
  result.retries = attempt;
  result.iterations = estimate.stationary.iterations;
  result.bandwidth = h;

  return PipelineRun{std::move(truth), std::move(observations), std::move(estimate),
                     std::move(density), result};
}

inline TrialResult run_trial(const TrialConfig& config, std::uint64_t seed) {
  return run_pipeline(config, seed).result;
}

enum class RiskType { RelLinf, L1, RelL2, Ise, SkillSup };

inline constexpr std::array<RiskType, 5> kRiskTypes{
    RiskType::RelLinf, RiskType::L1, RiskType::RelL2, RiskType::Ise, RiskType::SkillSup};

inline const char* to_string(RiskType type) {
  switch (type) {
    case RiskType::RelLinf: return "rel_linf";
    case RiskType::L1: return "l1";
    case RiskType::RelL2: return "rel_l2";
    case RiskType::Ise: return "ise";
    case RiskType::SkillSup: return "skill_sup";
  }
  return "unknown";
}

inline double risk_value(const TrialResult& r, RiskType type) {
  switch (type) {
    case RiskType::RelLinf: return r.rel_linf_risk;
    case RiskType::L1: return r.l1_risk;
    case RiskType::RelL2: return r.rel_l2_risk;
    case RiskType::Ise: return r.ise;
    case RiskType::SkillSup: return r.skill_sup_error;
  }
  return 0.0;
}

enum class Aggregate { Mean, Median };

struct GridPoint {
  std::size_t n = 0;
  double value = 0.0;  // mean or median over successful trials
  double std_error = 0.0;
  std::size_t trials = 0;  // successful
};

struct RiskSeries {
  RiskType type;
  std::vector<GridPoint> points;
  // Slope of log(value) against log(n); NaN when fewer than two usable points.
  double exponent = std::numeric_limits<double>::quiet_NaN();
};

struct GridStatus {
  std::size_t n = 0;
  std::size_t succeeded = 0;
  std::size_t failed = 0;
  std::size_t nonconverged = 0;
  bool flagged = false;  // no successful trial
};

struct RiskReport {
  std::vector<std::size_t> grid;
  std::size_t trials_per_point = 0;
  std::uint64_t base_seed = 0;
  Aggregate aggregate = Aggregate::Mean;
  std::optional<TrialConfig> config;
  std::vector<GridStatus> status;
  std::vector<RiskSeries> series;
  std::vector<std::vector<TrialResult>> trials;  // successful trials per grid point

  const RiskSeries& series_for(RiskType type) const {
    for (const auto& s : series)
      if (s.type == type) return s;
    throw InvalidArgument("risk type missing from report");
  }
};

/// Ordinary least-squares slope of ys against xs.
inline double ols_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw InvalidArgument("slope fit needs two or more points");
  const double m = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("slope fit needs distinct abscissae");
  return sxy / sxx;
}

struct SweepOptions {
  Aggregate aggregate = Aggregate::Mean;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Runs `trial(n, seed)` for every grid point and trial index with seeds
/// child_seed(base_seed, {grid_index, trial_index}), then folds results in
/// index order. Trials throwing skillpdf::Error count as failures.
template <class TrialFn>
RiskReport run_sweep_with(std::span<const std::size_t> grid, std::size_t trials_per_point,
                          std::uint64_t base_seed, TrialFn&& trial,
                          const SweepOptions& options = {}) {
  if (grid.size() < 3) throw InvalidArgument("rate fitting needs at least three grid points");
  if (trials_per_point < 1) throw InvalidArgument("need at least one trial per grid point");

  const std::size_t jobs = grid.size() * trials_per_point;
  std::vector<std::optional<TrialResult>> slots(jobs);
  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mutex;

  auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      const std::size_t g = job / trials_per_point;
      const std::size_t t = job % trials_per_point;
      try {
        slots[job] = trial(grid[g], child_seed(base_seed, {g, t}));
      } catch (const Error&) {
        // recorded as a failed trial
      } catch (...) {
        std::lock_guard lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
      }
    }
  };

  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (fatal) std::rethrow_exception(fatal);

  RiskReport report;
  report.grid.assign(grid.begin(), grid.end());
  report.trials_per_point = trials_per_point;
  report.base_seed = base_seed;
  report.aggregate = options.aggregate;
  report.trials.resize(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    GridStatus status;
    status.n = grid[g];
    for (std::size_t t = 0; t < trials_per_point; ++t) {
      const auto& slot = slots[g * trials_per_point + t];
      if (!slot) {
        ++status.failed;
        continue;
      }
      ++status.succeeded;
      if (!slot->converged) ++status.nonconverged;
      report.trials[g].push_back(*slot);
    }
    status.flagged = status.succeeded == 0;
    report.status.push_back(status);
  }

  for (RiskType type : kRiskTypes) {
    RiskSeries series{type, {}, std::numeric_limits<double>::quiet_NaN()};
    std::vector<double> log_n;
    std::vector<double> log_value;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      GridPoint point;
      point.n = grid[g];
      std::vector<double> values;
      for (const auto& r : report.trials[g]) values.push_back(risk_value(r, type));
      point.trials = values.size();
      if (!values.empty()) {
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        point.std_error = values.size() > 1
                           ? std::sqrt(var / static_cast<double>(values.size() - 1)) /
                                 std::sqrt(static_cast<double>(values.size()))
                           : 0.0;
        if (options.aggregate == Aggregate::Median) {
          std::sort(values.begin(), values.end());
          const std::size_t mid = values.size() / 2;
          point.value = values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
        } else {
          point.value = mean;
        }
        if (point.value > 0.0) {
          log_n.push_back(std::log(static_cast<double>(point.n)));
          log_value.push_back(std::log(point.value));
        }
      }
      series.points.push_back(point);
    }
    if (log_n.size() >= 2) series.exponent = ols_slope(log_n, log_value);
    report.series.push_back(std::move(series));
  }
  return report;
}

/// Sweep of run_trial over `grid` with everything but n fixed by `config`.
inline RiskReport run_sweep(std::span<const std::size_t> grid, std::size_t trials_per_point,
                            const TrialConfig& config, std::uint64_t base_seed,
                            const SweepOptions& options = {}) {
  config.validate();
  auto trial = [&config](std::size_t n, std::uint64_t seed) {
    TrialConfig local = config;
    local.n = n;
    return run_trial(local, seed);
  };
  RiskReport report = run_sweep_with(grid, trials_per_point, base_seed, trial, options);
  report.config = config;
  return report;
}

}  // namespace skillpdf
