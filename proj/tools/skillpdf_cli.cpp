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

// Command-line front end: estimate, simulate, benchmark, oracle-check.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "skillpdf/io.hpp"
#include "skillpdf/skillpdf.hpp"

namespace {

using namespace skillpdf;

// Exit codes.
constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitParse = 2;
constexpr int kExitEstimation = 3;
constexpr int kExitConvergence = 4;
constexpr int kExitUsage = 64;

struct Options {
  std::string matches;
  std::string out = "skillpdf";
  std::string format = "csv";
  std::size_t n = 100;
  double p = 1.0;
  std::uint32_t k = 10;
  std::size_t trials = 50;
  std::uint64_t seed = 1;
  double gamma = 1.0;
  double eta = 1.0;
  std::string kernel = "epanechnikov";
  std::string bandwidth;
  std::string truncate = "off";
  std::string density = "uniform";
  double delta = 0.5;
  std::string grid = "100,400,1600";
  unsigned threads = 0;
  std::string aggregate = "mean";
  std::uint32_t multiplier = 20;
  std::uint32_t pseudo_wins = 1;
  std::size_t max_iterations = kDefaultMaxIterations;
  std::optional<double> inject_exponent;
  bool perturb = false;
};

void fail(const std::string& kind, const std::string& detail) {
  std::cerr << "skillpdf: error=" << kind << ' ' << detail << '\n';
}

void print_kv(const std::string& key, double value) {
  std::cout << key << '=' << format_double(value) << '\n';
}

DensityFamily parse_family(const std::string& name) {
  if (name == "uniform") return DensityFamily::Uniform;
  if (name == "bump") return DensityFamily::RaisedCosineBump;
  return DensityFamily::PiecewiseLinear;
}

std::vector<std::size_t> parse_grid(const std::string& text) {
  std::vector<std::size_t> grid;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("bad grid entry '" + item + "'");
    }
    if (used != item.size() || v < 2) throw InvalidArgument("bad grid entry '" + item + "'");
    grid.push_back(static_cast<std::size_t>(v));
  }
  if (grid.size() < 3) throw InvalidArgument("--grid needs at least three sizes");
  return grid;
}

TrialConfig simulation_config(const Options& o) {
  TrialConfig c;
  c.family = parse_family(o.density);
  c.spec.delta = o.delta;
  c.n = o.n;
  c.p = o.p;
  c.k = o.k;
  c.bandwidth = o.bandwidth == "practical" ? BandwidthRule::Practical : BandwidthRule::Theoretical;
  c.gamma = o.gamma;
  c.eta = o.eta;
  c.kernel = o.kernel;
  c.truncate = o.truncate == "on";
  c.max_iterations = o.max_iterations;
  c.validate();
  // Fails early when the family cannot live in the class.
  (void)make_test_density(c.spec, c.family, c.params);
  return c;
}

std::string density_text(const DensityEstimate& d, const std::string& format) {
  std::ostringstream out;
  if (format == "json") {
    out << density_json(d).dump(2) << '\n';
  } else {
    write_density_csv(out, d);
  }
  return out.str();
}

std::string path_for(const Options& o, const std::string& suffix) { return o.out + suffix; }

int run_estimate(const Options& o) {
  std::ifstream in(o.matches);
  if (!in) {
    fail("io", "message=\"cannot open " + o.matches + "\"");
    return kExitParse;
  }
  std::vector<MatchRecord> records;
  try {
    records = parse_matches(in);
  } catch (const ParseError& e) {
    fail("parse", "line=" + std::to_string(e.line()) + " message=\"" + e.what() + "\"");
    return kExitParse;
  }

  const PairwiseCounts counts = aggregate(records);
  std::optional<ObservationMatrix> obs;
  std::optional<RankCentralityResult> rc;
  try {
    obs.emplace(laplace_smooth(counts, o.multiplier, o.pseudo_wins));
    rc.emplace(rank_centrality(*obs, 1.0, std::nullopt, o.max_iterations));
  } catch (const InsufficientDataError& e) {
    fail("insufficient_data", std::string("message=\"") + e.what() + "\"");
    return kExitEstimation;
  } catch (const DisconnectedGraphError& e) {
    fail("disconnected", "components=" + std::to_string(e.components()));
    return kExitEstimation;
  } catch (const RowStochasticityError& e) {
    fail("row_stochasticity", "row=" + std::to_string(e.row()) + " deficit=" + format_double(e.deficit()));
    return kExitEstimation;
  }
  if (!rc->stationary.converged) {
    fail("convergence", "iterations=" + std::to_string(rc->stationary.iterations) +
                            " residual=" + format_double(rc->stationary.residual));
    return kExitConvergence;
  }

  const std::size_t n = obs->n();
  const double k = median_games_per_edge(*obs);
  const double h = o.bandwidth == "theoretical"
                       ? theoretical_bandwidth(static_cast<double>(n), 1.0, k, o.delta, o.eta, o.gamma)
                       : practical_bandwidth(static_cast<double>(n));
  const auto& alpha = rc->skills.values;
  const DensityEstimate raw = kde(alpha, h, kernel_from_name(o.kernel));
  const DensityEstimate cut = truncate_nonneg(raw);

  std::size_t top = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (alpha[i] > alpha[top]) top = i;

  std::cout << "players=" << n << '\n';
  std::cout << "observed_pairs=" << obs->edge_count() << '\n';
  print_kv("median_games", k);
  print_kv("bandwidth", h);
  std::cout << "iterations=" << rc->stationary.iterations << '\n';
  print_kv("residual", rc->stationary.residual);
  print_kv("entropy.resubstitution.raw", resubstitution_negative_entropy(raw, alpha));
  print_kv("entropy.resubstitution.truncated", resubstitution_negative_entropy(cut, alpha));
  print_kv("entropy.grid.raw", grid_negative_entropy(raw, /*renormalize=*/false));
  print_kv("entropy.grid.truncated", negative_entropy(cut, alpha, EntropyMethod::GridQuadrature).value);
  std::cout << "top_player=" << counts.players[top] << '\n';

  const DensityEstimate& exported = o.truncate == "on" ? cut : raw;
  write_file_atomic(path_for(o, ".density." + o.format), density_text(exported, o.format));
  std::ostringstream skills;
  skills << "player,skill\n";
  for (std::size_t i = 0; i < n; ++i) skills << counts.players[i] << ',' << format_double(alpha[i]) << '\n';
  write_file_atomic(path_for(o, ".skills.csv"), skills.str());
  write_file_atomic(path_for(o, ".observations.json"),
                    observations_json(*obs, counts.players).dump(2) + "\n");
  return kExitOk;
}

int run_simulate(const Options& o) {
  const TrialConfig config = simulation_config(o);
  std::optional<PipelineRun> run;
  try {
    run.emplace(run_pipeline(config, o.seed));
  } catch (const DisconnectedGraphError& e) {
    fail("disconnected", "components=" + std::to_string(e.components()));
    return kExitEstimation;
  } catch (const RowStochasticityError& e) {
    fail("row_stochasticity", "row=" + std::to_string(e.row()) + " deficit=" + format_double(e.deficit()));
    return kExitEstimation;
  }
  const TrialResult& r = run->result;
  Json trial{{"config", config_json(config)}, {"result", trial_json(r)}};
  write_file_atomic(path_for(o, ".trial.json"), trial.dump(2) + "\n");
  write_file_atomic(path_for(o, ".observations.json"), observations_json(run->observations).dump(2) + "\n");
  write_file_atomic(path_for(o, ".density." + o.format), density_text(run->density, o.format));

  print_kv("rel_linf_risk", r.rel_linf_risk);
  print_kv("l1_risk", r.l1_risk);
  print_kv("rel_l2_risk", r.rel_l2_risk);
  print_kv("ise", r.ise);
  print_kv("skill_sup_error", r.skill_sup_error);
  print_kv("bandwidth", r.bandwidth);
  std::cout << "converged=" << (r.converged ? "true" : "false") << '\n';
  if (!r.converged) {
    fail("convergence", "iterations=" + std::to_string(r.iterations));
    return kExitConvergence;
  }
  return kExitOk;
}

int run_benchmark(const Options& o) {
  const std::vector<std::size_t> grid = parse_grid(o.grid);
  SweepOptions sweep;
  sweep.threads = o.threads;
  sweep.aggregate = o.aggregate == "median" ? Aggregate::Median : Aggregate::Mean;

  RiskReport report;
  if (o.inject_exponent) {
    // Synthetic trials whose every risk equals n^exponent.
    const double exponent = *o.inject_exponent;
    auto synthetic = [exponent](std::size_t n, std::uint64_t seed) {
      TrialResult r;
      r.n = n;
      r.seed = seed;
      r.converged = true;
      const double v = std::pow(static_cast<double>(n), exponent);
      r.rel_linf_risk = r.l1_risk = r.rel_l2_risk = r.ise = r.skill_sup_error = v;
      return r;
    };
    report = run_sweep_with(grid, o.trials, o.seed, synthetic, sweep);
  } else {
    report = run_sweep(grid, o.trials, simulation_config(o), o.seed, sweep);
  }

  write_file_atomic(path_for(o, ".report.json"), report_json(report).dump(2) + "\n");
  std::ostringstream csv;
  write_report_csv(csv, report);
  write_file_atomic(path_for(o, ".report.csv"), csv.str());

  bool every_risk_usable = true;
  for (const auto& series : report.series) {
    std::cout << "exponent." << to_string(series.type) << '='
              << (std::isfinite(series.exponent) ? format_double(series.exponent) : "nan") << '\n';
    bool any = false;
    for (const auto& p : series.points) any = any || p.trials > 0;
    every_risk_usable = every_risk_usable && any;
  }
  for (const auto& s : report.status) {
    if (s.failed || s.nonconverged) {
      std::cout << "flag.n" << s.n << "=failed:" << s.failed << ",nonconverged:" << s.nonconverged << '\n';
    }
  }
  if (!every_risk_usable) {
    fail("no_successful_trials", "grid=" + o.grid);
    return kExitEstimation;
  }
  return kExitOk;
}

int run_oracle_check(const Options& o) {
  DensityClassSpec spec;
  spec.delta = o.delta;
  const TestDensity uniform = make_test_density(spec, DensityFamily::Uniform);
  const SkillVector skills = sample_skills(uniform, o.n, o.seed);
  TransitionMatrix D = oracle_transition(skills);
  if (o.perturb) {
    auto rows = D.to_rows();
    rows[0][1] += 1e-3;
    rows[0][0] -= 1e-3;
    D = TransitionMatrix::from_rows(rows, TransitionKind::Oracle);
  }
  const ProbVector pi = canonical_pi(skills);
  const StationaryResult stationary = power_iterate(D, 1e-15, kDefaultMaxIterations);

  double worst_stationary = 0.0;
  std::size_t worst_i = 0;
  for (std::size_t i = 0; i < o.n; ++i) {
    const double err = std::abs(stationary.pi_hat[i] - pi[i]);
    if (err > worst_stationary) {
      worst_stationary = err;
      worst_i = i;
    }
  }
  double worst_balance = 0.0;
  std::size_t bi = 0;
  std::size_t bj = 0;
  for (std::size_t i = 0; i < o.n; ++i) {
    for (std::size_t j = i + 1; j < o.n; ++j) {
      const double err = std::abs(pi[i] * D(i, j) - pi[j] * D(j, i));
      if (err > worst_balance) {
        worst_balance = err;
        bi = i;
        bj = j;
      }
    }
  }
  const bool stationary_ok = worst_stationary <= 1e-10 && stationary.converged;
  const bool balance_ok = worst_balance <= 1e-14;
  std::cout << "n=" << o.n << '\n';
  std::cout << "seed=" << o.seed << '\n';
  std::cout << "iterations=" << stationary.iterations << '\n';
  print_kv("stationary_max_error", worst_stationary);
  std::cout << "stationary_worst_index=" << worst_i << '\n';
  std::cout << "stationary=" << (stationary_ok ? "pass" : "fail") << '\n';
  print_kv("detailed_balance_max_error", worst_balance);
  std::cout << "detailed_balance_worst_pair=" << bi << ',' << bj << '\n';
  std::cout << "detailed_balance=" << (balance_ok ? "pass" : "fail") << '\n';
  if (!stationary_ok || !balance_ok) {
    fail("oracle_violation", "stationary_index=" + std::to_string(worst_i) + " balance_pair=" +
                                 std::to_string(bi) + "," + std::to_string(bj));
    return kExitViolation;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Skill-density estimation from pairwise win/loss data"};
  app.require_subcommand(1);
  Options o;

  const std::vector<std::string> formats{"csv", "json"};
  const std::vector<std::string> switches{"on", "off"};
  const std::vector<std::string> rules{"practical", "theoretical"};
  const std::vector<std::string> families{"uniform", "bump", "tent"};

  // Empty until parsed; the default rule depends on the subcommand.
  auto add_density_flags = [&](CLI::App* cmd, const std::string& default_rule) {
    cmd->add_option("--bandwidth", o.bandwidth, "Bandwidth rule")
        ->check(CLI::IsMember(rules))
        ->default_str(default_rule);
    cmd->add_option("--gamma", o.gamma, "Constant of the theoretical bandwidth")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--eta", o.eta, "Hoelder order used by the theoretical bandwidth")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--kernel", o.kernel, "epanechnikov or order:S (S <= 12)")->capture_default_str();
    cmd->add_option("--truncate", o.truncate, "Clip negative density values in the exported grid")
        ->check(CLI::IsMember(switches))
        ->capture_default_str();
    cmd->add_option("--format", o.format, "Density grid format")
        ->check(CLI::IsMember(formats))
        ->capture_default_str();
    cmd->add_option("--out", o.out, "Output path prefix")->capture_default_str();
    cmd->add_option("--delta", o.delta, "Lower bound of the skill support")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--max-iterations", o.max_iterations, "Power iteration cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };
  auto add_simulation_flags = [&](CLI::App* cmd) {
    cmd->add_option("--p", o.p, "Edge probability of the comparison graph")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--k", o.k, "Games per observed pair")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--density", o.density, "Skill density family")
        ->check(CLI::IsMember(families))
        ->capture_default_str();
    cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  };

  auto* estimate = app.add_subcommand("estimate", "Estimate the skill density of a tournament");
  estimate->add_option("--matches", o.matches, "CSV with player_a,player_b,outcome[,weight]")->required();
  estimate->add_option("--multiplier", o.multiplier, "Laplace smoothing: copies per decisive game")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  estimate->add_option("--pseudo-wins", o.pseudo_wins, "Laplace smoothing: extra wins per player and pair")
      ->capture_default_str();
  add_density_flags(estimate, "practical");

  auto* simulate = app.add_subcommand("simulate", "Run the pipeline on synthetic BTL data");
  simulate->add_option("--n", o.n, "Number of players")->check(CLI::Range(2, 100000))->capture_default_str();
  add_simulation_flags(simulate);
  add_density_flags(simulate, "theoretical");

  auto* benchmark = app.add_subcommand("benchmark", "Monte Carlo risk sweep with log-log rate fits");
  benchmark->add_option("--grid", o.grid, "Comma-separated player counts")->capture_default_str();
  benchmark->add_option("--trials", o.trials, "Trials per grid point")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  benchmark->add_option("--threads", o.threads, "Worker threads (0: all cores)")->capture_default_str();
  benchmark->add_option("--aggregate", o.aggregate, "Per-point statistic")
      ->check(CLI::IsMember({"mean", "median"}))
      ->capture_default_str();
  benchmark->add_option("--inject-exponent", o.inject_exponent,
                        "Test hook: replace trials by synthetic risks n^X");
  add_simulation_flags(benchmark);
  add_density_flags(benchmark, "theoretical");

  auto* oracle = app.add_subcommand("oracle-check", "Check the exact BTL chain against its closed-form stationary law");
  oracle->add_option("--n", o.n, "Number of players")->check(CLI::Range(2, 200))->capture_default_str();
  oracle->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  oracle->add_option("--delta", o.delta, "Lower bound of the skill support")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  oracle->add_flag("--perturb", o.perturb, "Test hook: perturb one entry of the chain");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (o.bandwidth.empty()) o.bandwidth = *estimate ? "practical" : "theoretical";

  try {
    if (o.delta <= 0.0 || o.delta >= 1.0) throw InvalidArgument("--delta must lie in (0,1)");
    if (o.p <= 0.0) throw InvalidArgument("--p must lie in (0,1]");
    (void)kernel_from_name(o.kernel);
    if (*estimate) return run_estimate(o);
    if (*simulate) return run_simulate(o);
    if (*benchmark) return run_benchmark(o);
    return run_oracle_check(o);
  } catch (const InvalidArgument& e) {
    fail("invalid_argument", std::string("message=\"") + e.what() + "\"");
    return kExitUsage;
  } catch (const std::exception& e) {
    fail("internal", std::string("message=\"") + e.what() + "\"");
    return kExitUsage;
  }
}
