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

// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "../process.hpp"
#include "skillpdf/skillpdf.hpp"

namespace {

using namespace skillpdf;
namespace fs = std::filesystem;

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  const char* id;
  const char* title;
  double budget_seconds;
  std::function<Verdict()> check;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Verdict oracle_exactness() {
  const TestDensity f = make_test_density(DensityClassSpec{}, DensityFamily::Uniform);
  double worst_stationary = 0.0;
  double worst_linear = 0.0;
  double worst_balance = 0.0;
  for (std::size_t n : {2, 10, 50}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const SkillVector skills = sample_skills(f, n, child_seed(0xac1, {n, seed}));
      const TransitionMatrix d = oracle_transition(skills);
      const ProbVector pi = canonical_pi(skills);
      const StationaryResult st = power_iterate(d, 1e-15, kDefaultMaxIterations);
      const auto dense = oracle::stationary_dense(d.to_rows());
      for (std::size_t i = 0; i < n; ++i) {
        worst_stationary = std::max(worst_stationary, std::abs(st.pi_hat[i] - pi[i]));
        worst_linear = std::max(worst_linear, std::abs(dense[i] - pi[i]));
        for (std::size_t j = 0; j < n; ++j)
          worst_balance = std::max(worst_balance, std::abs(pi[i] * d(i, j) - pi[j] * d(j, i)));
      }
    }
  }
  return {worst_stationary <= 1e-10 && worst_linear <= 1e-10 && worst_balance <= 1e-14,
          "stationary=" + fmt("%.2e", worst_stationary) + " linear_solve=" + fmt("%.2e", worst_linear) +
              " balance=" + fmt("%.2e", worst_balance)};
}

Verdict kernel_moments() {
  double worst = 0.0;
  for (int s : {0, 1, 2, 3, 5}) {
    const Kernel k = kernel_of_order(s);
    for (int i = 0; i <= s; ++i) {
      const double m =
          oracle::simpson([&](double x) { return std::pow(x, i) * k(x); }, -1.0, 1.0, 10000);
      worst = std::max(worst, std::abs(m - (i == 0 ? 1.0 : 0.0)));
    }
  }
  const Kernel e = epanechnikov();
  const bool exact = e(0.0) == 0.75 && e(1.0) == 0.0 && e(-1.0) == 0.0;
  const double mass = oracle::simpson([&](double x) { return e(x); }, -1.0, 1.0, 10000);
  const double first = oracle::simpson([&](double x) { return x * e(x); }, -1.0, 1.0, 10000);
  worst = std::max({worst, std::abs(mass - 1.0), std::abs(first)});
  return {worst <= 1e-8 && exact,
          "max_moment_error=" + fmt("%.2e", worst) + " epanechnikov_exact=" + (exact ? "yes" : "no")};
}

Verdict row_stochasticity() {
  const TestDensity f = make_test_density(DensityClassSpec{}, DensityFamily::Uniform);
  int ok = 0;
  constexpr int kTrials = 1000;
  for (int t = 0; t < kTrials; ++t) {
    const std::uint64_t seed = child_seed(0xac3, {static_cast<std::uint64_t>(t)});
    const SkillVector skills = sample_skills(f, 100, child_seed(seed, {0}));
    const ObservationMatrix obs =
        simulate_games(skills, sample_graph(100, 0.5, child_seed(seed, {1})), 1, child_seed(seed, {2}));
    try {
      (void)build_transition(obs, 0.5);
      ++ok;
    } catch (const RowStochasticityError&) {
    }
  }
  return {ok >= 990, "succeeded=" + std::to_string(ok) + "/" + std::to_string(kTrials)};
}

// Shared by the two skill-rate criteria.
const RiskReport& skill_rate_sweep() {
  static const RiskReport report = [] {
    TrialConfig config;
    config.family = DensityFamily::Uniform;
    config.p = 1.0;
    config.k = 10;
    return run_sweep(std::vector<std::size_t>{100, 400, 1600}, 50, config, 0xac4);
  }();
  return report;
}

std::string series_text(const RiskSeries& s) {
  std::string out = "means=";
  for (std::size_t i = 0; i < s.points.size(); ++i)
    out += (i ? "," : "") + fmt("%.4g", s.points[i].value);
  return out + " exponent=" + fmt("%.4f", s.exponent);
}

bool strictly_decreasing(const RiskSeries& s) {
  for (std::size_t i = 1; i < s.points.size(); ++i)
    if (!(s.points[i].value < s.points[i - 1].value)) return false;
  return true;
}

bool complete(const RiskReport& r) {
  for (const auto& st : r.status)
    if (st.failed || st.nonconverged) return false;
  return true;
}

Verdict relative_linf_rate() {
  const RiskReport& r = skill_rate_sweep();
  const RiskSeries& s = r.series_for(RiskType::RelLinf);
  const bool ok = complete(r) && strictly_decreasing(s) && s.exponent >= -0.8 && s.exponent <= -0.3;
  return {ok, series_text(s) + " band=[-0.8,-0.3]"};
}

Verdict l1_rate() {
  const RiskReport& r = skill_rate_sweep();
  const RiskSeries& s = r.series_for(RiskType::L1);
  return {complete(r) && s.exponent >= -0.8 && s.exponent <= -0.3, series_text(s) + " band=[-0.8,-0.3]"};
}

Verdict ise_rate() {
  TrialConfig config;
  config.family = DensityFamily::Uniform;
  config.p = 1.0;
  config.k = 10;
  config.bandwidth = BandwidthRule::Theoretical;
  config.gamma = 1.0;
  config.eta = 1.0;
  const RiskReport r = run_sweep(std::vector<std::size_t>{250, 1000, 4000}, 30, config, 0xac6);
  const RiskSeries& s = r.series_for(RiskType::Ise);
  const bool ok = complete(r) && strictly_decreasing(s) && s.exponent >= -0.85 && s.exponent <= -0.25;
  return {ok, series_text(s) + " band=[-0.85,-0.25]"};
}

Verdict kde_on_true_samples() {
  const TestDensity f = make_test_density(DensityClassSpec{}, DensityFamily::Uniform);
  const SkillVector s = sample_skills(f, 10000, 0xac7);
  const DensityEstimate d = kde(s.values(), 0.03, epanechnikov());
  const double ise = integrated_squared_error(d, f);
  const std::vector<double> pts(s.values().begin(), s.values().end());
  const double reference = oracle::trapezoid(
      [&](double x) {
        const double diff = d(x) - oracle::uniform_density(0.5, 1.0, x);
        return diff * diff;
      },
      kSupportLo, kSupportHi, 300001);
  return {ise <= 0.05 && reference <= 0.05,
          "ise=" + fmt("%.5f", ise) + " refined=" + fmt("%.5f", reference) + " tolerance=0.05"};
}

Verdict entropy_score() {
  const TestDensity f = make_test_density(DensityClassSpec{}, DensityFamily::Uniform);
  const double exact = grid_negative_entropy(f);
  const bool grid_ok = std::abs(exact - std::log(2.0)) <= 1e-4;

  TrialConfig config;
  config.n = 10000;
  config.p = 1.0;
  config.k = 20;
  config.bandwidth = BandwidthRule::Practical;
  const PipelineRun run = run_pipeline(config, 0xac8);
  const auto& alpha = run.estimate.skills.values;
  const double resub = negative_entropy(run.density, alpha, EntropyMethod::Resubstitution).value;
  const bool resub_ok = std::abs(resub - 0.693) <= 0.15;
  return {grid_ok && resub_ok, "grid=" + fmt("%.6f", exact) + " (log2=" + fmt("%.6f", std::log(2.0)) +
                                   ") resubstitution=" + fmt("%.4f", resub) + " target=0.693+-0.15"};
}

Verdict laplace_exactness() {
  std::istringstream single("player_a,player_b,outcome\nx,y,A\n");
  const ObservationMatrix one = laplace_smooth(aggregate(parse_matches(single)));
  const WinRecord xy = one.record(1, 0);
  std::istringstream split("player_a,player_b,outcome\nx,y,A\ny,x,A\n");
  const ObservationMatrix two = laplace_smooth(aggregate(parse_matches(split)));
  const WinRecord even = two.record(0, 1);
  const bool ok = xy.wins == 21 && xy.games == 22 && one.win_fraction(1, 0) == 21.0 / 22.0 &&
                  even.wins * 2 == even.games && two.win_fraction(0, 1) == 0.5 &&
                  two.win_fraction(1, 0) == 0.5;
  return {ok, "single=" + std::to_string(xy.wins) + "/" + std::to_string(xy.games) +
                  " split=" + std::to_string(even.wins) + "/" + std::to_string(even.games)};
}

Verdict determinism() {
  const fs::path root = cli_test::scratch("acceptance_determinism");
  cli_test::write_text(root / "matches.csv",
                       "player_a,player_b,outcome,weight\n"
                       "ann,bob,A,2\nbob,cyd,A,1\ncyd,dee,B,1\ndee,ann,B,3\nann,cyd,D,1\n"
                       "bob,dee,B,1\ncyd,ann,A,1\nbob,ann,A,1\n");
  const std::vector<std::vector<std::string>> commands{
      {"estimate", "--matches", (root / "matches.csv").string(), "--format", "json"},
      {"estimate", "--matches", (root / "matches.csv").string(), "--bandwidth", "theoretical"},
      {"simulate", "--n", "300", "--p", "0.4", "--k", "5", "--density", "bump", "--seed", "11"},
      {"simulate", "--n", "120", "--density", "tent", "--truncate", "on", "--kernel", "order:2"},
      {"benchmark", "--grid", "30,60,120", "--trials", "4", "--k", "4", "--seed", "3", "--threads", "2"},
      {"oracle-check", "--n", "40", "--seed", "5"}};
  std::size_t compared = 0;
  std::string mismatch;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    std::vector<std::string> outputs[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = root / ("c" + std::to_string(c) + "_" + std::to_string(rep));
      fs::create_directories(dir);
      auto args = commands[c];
      if (args[0] != "oracle-check") args.insert(args.end(), {"--out", (dir / "run").string()});
      const auto r = cli_test::run(args, dir);
      if (r.code != 0) return {false, args[0] + " exited " + std::to_string(r.code) + ": " + r.err};
      outputs[rep].push_back(r.out);
      for (const char* suffix : {".density.csv", ".density.json", ".skills.csv", ".observations.json",
                                 ".trial.json", ".report.json", ".report.csv"}) {
        const fs::path file = dir / (std::string("run") + suffix);
        outputs[rep].push_back(fs::exists(file) ? cli_test::slurp(file) : std::string("<absent>"));
      }
    }
    for (std::size_t k = 0; k < outputs[0].size(); ++k) {
      if (outputs[0][k] != "<absent>") ++compared;
      if (outputs[0][k] != outputs[1][k] && mismatch.empty())
        mismatch = commands[c][0] + " output #" + std::to_string(k);
    }
  }
  fs::remove_all(root);
  return {mismatch.empty(), "artifacts_compared=" + std::to_string(compared) +
                                (mismatch.empty() ? "" : " first_mismatch=" + mismatch)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"AC1", "oracle chain stationary law and detailed balance", 1.0, oracle_exactness},
      {"AC2", "kernel moments", 1.0, kernel_moments},
      {"AC3", "empirical chain row-stochastic", 30.0, row_stochasticity},
      {"AC4", "relative l-infinity rate", 600.0, relative_linf_rate},
      {"AC5", "l1 rate", 600.0, l1_rate},
      {"AC6", "integrated squared error rate", 1200.0, ise_rate},
      {"AC7", "kde on true samples", 5.0, kde_on_true_samples},
      {"AC8", "entropy score", 30.0, entropy_score},
      {"AC9", "laplace smoothing exact fractions", 1.0, laplace_exactness},
      {"AC10", "byte-identical reruns of every subcommand", 60.0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds <= c.budget_seconds;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("%s %s: %s | %s | %.2fs (budget %.0fs)%s\n", c.id, pass ? "PASS" : "FAIL", c.title,
                o.detail.c_str(), seconds, c.budget_seconds, in_time ? "" : " over budget");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
