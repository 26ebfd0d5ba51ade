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

// Simulates one tournament, recovers the skills and prints the density.

#include <cstdio>

#include "skillpdf/skillpdf.hpp"

int main() {
  using namespace skillpdf;

  DensityClassSpec spec;  // skills live on [0.5, 1]
  const TestDensity truth = make_test_density(spec, DensityFamily::RaisedCosineBump);

  constexpr std::size_t n = 500;
  const SkillVector skills = sample_skills(truth, n, /*seed=*/7);
  const ComparisonGraph graph = sample_graph(n, /*p=*/0.5, /*seed=*/8);
  const ObservationMatrix games = simulate_games(skills, graph, /*k=*/20, /*seed=*/9);

  const RankCentralityResult rc = rank_centrality(games, 0.5);
  const double h = practical_bandwidth(static_cast<double>(n));
  const DensityEstimate estimate = truncate_nonneg(kde(rc.skills.values, h, epanechnikov()));

  std::printf("power iterations: %zu\n", rc.stationary.iterations);
  std::printf("bandwidth: %.4f\n", h);
  std::printf("%6s %10s %10s\n", "x", "estimate", "truth");
  for (int i = 0; i <= 12; ++i) {
    const double x = 0.4 + 0.05 * i;
    std::printf("%6.2f %10.4f %10.4f\n", x, estimate(x), truth(x));
  }
  std::printf("negative entropy (resubstitution): %.4f\n",
              resubstitution_negative_entropy(estimate, rc.skills.values));
}
