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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "skillpdf/quadrature.hpp"
#include "skillpdf/model.hpp"

namespace skillpdf {
namespace {

TEST(DensityClass, UniformIsTwoOnUpperHalf) {
  const TestDensity f = make_test_density(DensityClassSpec{}, DensityFamily::Uniform);
  EXPECT_EQ(f(0.5), 2.0);
  EXPECT_EQ(f(0.75), 2.0);
  EXPECT_EQ(f(1.0), 2.0);
  EXPECT_EQ(f(0.49), 0.0);
  EXPECT_EQ(f(1.01), 0.0);
  EXPECT_NEAR(trapezoid(f, 0.5, 1.0), 1.0, 1e-8);
}

TEST(DensityClass, FamiliesIntegrateToOne) {
  for (auto family : {DensityFamily::Uniform, DensityFamily::RaisedCosineBump,
                      DensityFamily::PiecewiseLinear}) {
    DensityClassSpec spec;
    spec.delta = 0.3;
    const TestDensity f = make_test_density(spec, family);
    EXPECT_NEAR(oracle::simpson([&](double x) { return f(x); }, 0.3, 1.0, 20000), 1.0, 1e-6)
        << to_string(family);
    EXPECT_NEAR(f.cdf(1.0), 1.0, 1e-12);
    EXPECT_EQ(f.cdf(0.3), 0.0);
  }
}

TEST(DensityClass, BumpVanishesAtLowerEdgeAndStaysAboveFloorAtTop) {
  DensityClassSpec spec;
  spec.delta = 0.2;
  FamilyParams params;
  params.center = 0.6;
  const TestDensity f = make_test_density(spec, DensityFamily::RaisedCosineBump, params);
  EXPECT_NEAR(f(0.2), 0.0, 1e-15);
  EXPECT_GE(f(1.0), spec.b);
}

TEST(DensityClass, RejectsInfeasibleFloor) {
  DensityClassSpec spec;
  spec.delta = 0.5;
  spec.b = 2.5;  // b (1 - delta) > 1
  EXPECT_THROW(make_test_density(spec, DensityFamily::Uniform), InvalidArgument);
}

TEST(DensityClass, RejectsSmoothnessAboveFamily) {
  DensityClassSpec spec;
  spec.eta = 1.5;
  EXPECT_THROW(make_test_density(spec, DensityFamily::PiecewiseLinear), InvalidArgument);
}

TEST(DensityClass, QuantileInvertsCdf) {
  for (auto family : {DensityFamily::Uniform, DensityFamily::RaisedCosineBump,
                      DensityFamily::PiecewiseLinear}) {
    const TestDensity f = make_test_density(DensityClassSpec{}, family);
    for (double u : {0.01, 0.2, 0.5, 0.77, 0.99}) {
      EXPECT_NEAR(f.cdf(f.quantile(u)), u, 1e-12) << to_string(family);
    }
  }
}

TEST(SampleSkills, UniformMean) {
  const TestDensity f = make_test_density(DensityClassSpec{}, DensityFamily::Uniform);
  const SkillVector s = sample_skills(f, 100000, 1);
  const double mean = std::accumulate(s.values().begin(), s.values().end(), 0.0) / s.size();
  EXPECT_NEAR(mean, 0.75, 0.005);
}

TEST(SampleSkills, Deterministic) {
  const TestDensity f = make_test_density(DensityClassSpec{}, DensityFamily::Uniform);
  const SkillVector a = sample_skills(f, 3, 7);
  const SkillVector b = sample_skills(f, 3, 7);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(a[i], b[i]);
}

TEST(SampleSkills, KolmogorovSmirnovAgainstTrueCdf) {
  const TestDensity uniform = make_test_density(DensityClassSpec{}, DensityFamily::Uniform);
  const SkillVector s = sample_skills(uniform, 100000, 2);
  const std::vector<double> xs(s.values().begin(), s.values().end());
  EXPECT_LT(oracle::ks_statistic(xs, [](double x) { return std::clamp(2.0 * (x - 0.5), 0.0, 1.0); }),
            0.01);

  // The non-uniform families go through their quantile functions.
  const TestDensity tent = make_test_density(DensityClassSpec{}, DensityFamily::PiecewiseLinear);
  const SkillVector t = sample_skills(tent, 100000, 3);
  const std::vector<double> ts(t.values().begin(), t.values().end());
  auto tent_cdf = [&](double x) {
    return oracle::simpson([&](double y) { return tent(y); }, 0.5, std::clamp(x, 0.5, 1.0), 200);
  };
  EXPECT_LT(oracle::ks_statistic(ts, tent_cdf), 0.01);
}

TEST(SkillVector, RejectsOutOfRange) {
  EXPECT_THROW(SkillVector({0.4, 1.0}, 0.5), InvalidArgument);
  EXPECT_THROW(SkillVector({0.6, 1.1}, 0.5), InvalidArgument);
  EXPECT_THROW(SkillVector({0.6}, 0.5), InvalidArgument);
}

TEST(SampleGraph, CompleteWhenPIsOne) {
  const ComparisonGraph g = sample_graph(5, 1.0, 123);
  EXPECT_EQ(g.edge_count(), 10u);
}

TEST(SampleGraph, EdgeCountMoments) {
  const double mean = 4950 * 0.3;
  const double sigma = std::sqrt(4950 * 0.3 * 0.7);
  double total = 0.0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) total += sample_graph(100, 0.3, seed).edge_count();
  // The mean of 1000 draws has sd sigma / sqrt(1000).
  EXPECT_NEAR(total / 1000.0, mean, 3.0 * sigma);
  EXPECT_NEAR(total / 1000.0, mean, 4.0 * sigma / std::sqrt(1000.0));
}

TEST(SampleGraph, PairFrequency) {
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 10000; ++seed) hits += sample_graph(2, 0.5, seed).edge_count();
  EXPECT_NEAR(hits / 10000.0, 0.5, 0.02);
}

TEST(ComparisonGraph, NormalizesAndRejectsDuplicates) {
  const ComparisonGraph g(3, {{2, 0}, {1, 0}}, 1.0);
  EXPECT_EQ(g.edges()[0], (Edge{0, 1}));
  EXPECT_EQ(g.edges()[1], (Edge{0, 2}));
  EXPECT_TRUE(g.find(2, 0).has_value());
  EXPECT_FALSE(g.find(1, 2).has_value());
  EXPECT_THROW(ComparisonGraph(3, {{0, 1}, {1, 0}}), InvalidArgument);
  EXPECT_THROW(ComparisonGraph(3, {{0, 0}}), InvalidArgument);
  EXPECT_THROW(ComparisonGraph(3, {{0, 3}}), InvalidArgument);
}

TEST(SimulateGames, EqualSkillsGiveEvenFractions) {
  const SkillVector skills(std::vector<double>(200, 0.8), 0.5);
  const ComparisonGraph g = sample_graph(200, 0.5, 4);
  ASSERT_GT(g.edge_count(), 9000u);
  const ObservationMatrix obs = simulate_games(skills, g, 5, 11);
  double sum = 0.0;
  for (std::size_t e = 0; e < obs.edge_count(); ++e) sum += obs.win_fraction(e);
  EXPECT_NEAR(sum / obs.edge_count(), 0.5, 0.02);
}

TEST(SimulateGames, SingleGameIsAntisymmetric) {
  const SkillVector skills({1.0, 1.0}, 0.5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ObservationMatrix obs = simulate_games(skills, ComparisonGraph(2, {{0, 1}}), 1, seed);
    const double z01 = obs.win_fraction(0, 1);
    EXPECT_TRUE(z01 == 0.0 || z01 == 1.0);
    EXPECT_EQ(z01 + obs.win_fraction(1, 0), 1.0);
  }
}

TEST(SimulateGames, StrongerPlayerWinsTwoThirds) {
  const SkillVector skills({0.5, 1.0}, 0.5);
  const ObservationMatrix obs = simulate_games(skills, ComparisonGraph(2, {{0, 1}}), 100000, 5);
  // Binomial(1e5, 2/3): sd 0.0015.
  EXPECT_NEAR(obs.win_fraction(0, 1), 2.0 / 3.0, 0.01);
}

TEST(SimulateGames, NonEdgesAreZero) {
  const SkillVector skills({0.6, 0.7, 0.9}, 0.5);
  const ObservationMatrix obs = simulate_games(skills, ComparisonGraph(3, {{0, 1}}), 3, 1);
  EXPECT_EQ(obs.win_fraction(0, 2), 0.0);
  EXPECT_EQ(obs.win_fraction(2, 1), 0.0);
  EXPECT_EQ(obs.win_fraction(1, 1), 0.0);
}

TEST(CanonicalPi, Examples) {
  const ProbVector a = canonical_pi(SkillVector({0.5, 0.5}, 0.5));
  EXPECT_EQ(a[0], 0.5);
  EXPECT_EQ(a[1], 0.5);
  const ProbVector b = canonical_pi(SkillVector({0.5, 1.0, 0.5}, 0.5));
  EXPECT_DOUBLE_EQ(b[0], 0.25);
  EXPECT_DOUBLE_EQ(b[1], 0.5);
  EXPECT_DOUBLE_EQ(b[2], 0.25);
}

TEST(CanonicalPi, PreservesArgmax) {
  const TestDensity f = make_test_density(DensityClassSpec{}, DensityFamily::RaisedCosineBump);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SkillVector s = sample_skills(f, 30, seed);
    const ProbVector pi = canonical_pi(s);
    const auto in = std::max_element(s.values().begin(), s.values().end()) - s.values().begin();
    const auto out = std::max_element(pi.entries().begin(), pi.entries().end()) - pi.entries().begin();
    EXPECT_EQ(in, out);
  }
}

TEST(ProbVector, Validation) {
  EXPECT_THROW(ProbVector({0.5, 0.4}), InvalidArgument);
  EXPECT_THROW(ProbVector({1.5, -0.5}), InvalidArgument);
  EXPECT_NO_THROW(ProbVector({0.1, 0.2, 0.7}));
  const ProbVector v = ProbVector::normalized({1.0, 3.0});
  EXPECT_DOUBLE_EQ(v[1], 0.75);
}

}  // namespace
}  // namespace skillpdf
