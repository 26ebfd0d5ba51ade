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

// How much of the integrated squared error comes from the support edges?
// Estimates the density of *true* uniform skills with the theoretical
// bandwidth and compares the ISE with the closed-form edge term
//   2 jumps * height^2 * h * 2 * int_0^1 (1 - F_K(u))^2 du.

#include <cmath>
#include <cstdio>
#include <vector>

#include "skillpdf/skillpdf.hpp"

int main() {
  using namespace skillpdf;

  const TestDensity truth = make_test_density(DensityClassSpec{}, DensityFamily::Uniform);
  const Kernel kernel = epanechnikov();
  const double height = truth(0.75);

  double tail = 0.0;  // int_0^1 (1 - F_K(u))^2 du by the midpoint rule
  constexpr int kCells = 100000;
  for (int i = 0; i < kCells; ++i) {
    const double rest = kernel.integral((i + 0.5) / kCells, 1.0);
    tail += rest * rest / kCells;
  }

  std::vector<double> log_n;
  std::vector<double> log_ise;
  std::printf("%8s %8s %12s %12s\n", "n", "h", "ise", "edge_term");
  for (std::size_t n : {250, 1000, 4000, 16000, 64000}) {
    const double h = theoretical_bandwidth(static_cast<double>(n), 1.0, 10.0, 0.5, 1.0);
    double ise = 0.0;
    constexpr int kTrials = 20;
    for (int t = 0; t < kTrials; ++t) {
      const SkillVector skills = sample_skills(truth, n, child_seed(2026, {n, static_cast<std::uint64_t>(t)}));
      ise += integrated_squared_error(kde(skills.values(), h, kernel), truth) / kTrials;
    }
    std::printf("%8zu %8.4f %12.5f %12.5f\n", n, h, ise, 2.0 * height * height * h * 2.0 * tail);
    log_n.push_back(std::log(static_cast<double>(n)));
    log_ise.push_back(std::log(ise));
  }
  std::printf("log-log slope, first three sizes: %.4f\n",
              ols_slope(std::span(log_n).first(3), std::span(log_ise).first(3)));
  std::printf("log-log slope, all sizes:         %.4f\n", ols_slope(log_n, log_ise));
}
