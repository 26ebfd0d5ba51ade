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
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "skillpdf/error.hpp"
#include "skillpdf/random.hpp"

namespace skillpdf {

// Parameters of the density class the skill prior is assumed to belong to.
// Densities are supported in [delta, 1], bounded by B, bounded below by b
// on [1 - epsilon, 1] and eta-Hoelder with constant L1.
struct DensityClassSpec {
  double delta = 0.5;
  double epsilon = 0.25;
  double b = 0.5;
  double eta = 1.0;
  double L1 = 100.0;
  double B = 10.0;

  void validate() const {
    if (!(delta > 0.0 && delta < 1.0))
      throw InvalidArgument("delta must lie in (0,1)");
    if (!(epsilon > 0.0 && epsilon < 1.0))
      throw InvalidArgument("epsilon must lie in (0,1)");
    if (!(b > 0.0)) throw InvalidArgument("b must be positive");
    if (!(B >= b)) throw InvalidArgument("B must be at least b");
    if (!(eta > 0.0)) throw InvalidArgument("eta must be positive");
    if (!(L1 > 0.0)) throw InvalidArgument("L1 must be positive");
  }
};

enum class DensityFamily { Uniform, RaisedCosineBump, PiecewiseLinear };

inline const char* to_string(DensityFamily family) {
  switch (family) {
    case DensityFamily::Uniform: return "uniform";
    case DensityFamily::RaisedCosineBump: return "bump";
    case DensityFamily::PiecewiseLinear: return "tent";
  }
  return "unknown";
}

// Shape parameters of the concrete families. Unset optionals default to the
// midpoint of [delta, 1].
struct FamilyParams {
  // RaisedCosineBump: a raised-cosine bump centred at `center` with
  // half-width center - delta, mixed with weight `bump_weight` into a linear
  // ramp that rises from 0 at delta.
  std::optional<double> center;
  double bump_weight = 0.5;
  // PiecewiseLinear: 0 at delta, peak at `apex`, tail_ratio * peak at 1.
  std::optional<double> apex;
  double tail_ratio = 0.5;
};

/// A member of the skill density class with a closed-form density and CDF
/// and an inverse-CDF sampler. Build with make_test_density().
class TestDensity {
 public:
  double operator()(double x) const { return pdf(x); }

  double pdf(double x) const {
    const double d = spec_.delta;
    if (x < d || x > 1.0) return 0.0;
    switch (family_) {
      case DensityFamily::Uniform:
        return 1.0 / (1.0 - d);
      case DensityFamily::RaisedCosineBump: {
        const double u = x - center_;
        double bump = 0.0;
        if (std::abs(u) <= radius_) {
          bump = (1.0 + std::cos(std::numbers::pi * u / radius_)) /
                 (2.0 * radius_);
        }
        const double ramp = 2.0 * (x - d) / ((1.0 - d) * (1.0 - d));
        return weight_ * bump + (1.0 - weight_) * ramp;
      }
      case DensityFamily::PiecewiseLinear:
        if (x <= apex_) return height_ * (x - d) / (apex_ - d);
        return height_ *
               (1.0 - (1.0 - tail_) * (x - apex_) / (1.0 - apex_));
    }
    return 0.0;
  }

  double cdf(double x) const {
    const double d = spec_.delta;
    if (x <= d) return 0.0;
    if (x >= 1.0) return 1.0;
    switch (family_) {
      case DensityFamily::Uniform:
        return (x - d) / (1.0 - d);
      case DensityFamily::RaisedCosineBump: {
        const double u = std::clamp(x - center_, -radius_, radius_);
        const double bump =
            (u + radius_) / (2.0 * radius_) +
            std::sin(std::numbers::pi * u / radius_) / (2.0 * std::numbers::pi);
        const double t = (x - d) / (1.0 - d);
        return weight_ * bump + (1.0 - weight_) * t * t;
      }
      case DensityFamily::PiecewiseLinear: {
        if (x <= apex_) {
          return height_ * (x - d) * (x - d) / (2.0 * (apex_ - d));
        }
        const double t = x - apex_;
        return left_mass_ + height_ * (t - (1.0 - tail_) * t * t /
                                               (2.0 * (1.0 - apex_)));
      }
    }
    return 0.0;
  }

  // Inverse CDF on [0, 1]. Closed form where the CDF inverts algebraically,
  // fixed-count bisection on the closed-form CDF otherwise.
  double quantile(double u) const {
    const double d = spec_.delta;
    u = std::clamp(u, 0.0, 1.0);
    switch (family_) {
      case DensityFamily::Uniform:
        return d + u * (1.0 - d);
      case DensityFamily::RaisedCosineBump: {
        double lo = d;
        double hi = 1.0;
        for (int iter = 0; iter < 64; ++iter) {
          const double mid = 0.5 * (lo + hi);
          if (cdf(mid) < u) {
            lo = mid;
          } else {
            hi = mid;
          }
        }
        return 0.5 * (lo + hi);
      }
      case DensityFamily::PiecewiseLinear: {
        if (u <= left_mass_) {
          return d + std::sqrt(2.0 * u * (apex_ - d) / height_);
        }
        // Solve height*(t - a t^2) = u - left_mass for the root in [0, 1-apex].
        const double r = u - left_mass_;
        const double a = height_ * (1.0 - tail_) / (2.0 * (1.0 - apex_));
        const double disc = std::max(0.0, height_ * height_ - 4.0 * a * r);
        const double t = 2.0 * r / (height_ + std::sqrt(disc));
        return std::min(1.0, apex_ + t);
      }
    }
    return d;
  }

  double sample(CounterRng& rng) const { return quantile(rng.uniform()); }

  DensityFamily family() const noexcept { return family_; }
  const DensityClassSpec& spec() const noexcept { return spec_; }
  double lower() const noexcept { return spec_.delta; }
  double upper() const noexcept { return 1.0; }

  // Largest Hoelder order the family satisfies on [delta, 1].
  double smoothness() const noexcept {
    switch (family_) {
      case DensityFamily::Uniform: return std::numeric_limits<double>::infinity();
      case DensityFamily::RaisedCosineBump: return 2.0;
      case DensityFamily::PiecewiseLinear: return 1.0;
    }
    return 0.0;
  }

 private:
  friend TestDensity make_test_density(const DensityClassSpec&, DensityFamily,
                                       const FamilyParams&);

  TestDensity(DensityClassSpec spec, DensityFamily family)
      : spec_(spec), family_(family) {}

  DensityClassSpec spec_;
  DensityFamily family_;
  // RaisedCosineBump
  double center_ = 0.0;
  double radius_ = 0.0;
  double weight_ = 0.0;
  // PiecewiseLinear
  double apex_ = 0.0;
  double tail_ = 0.0;
  double height_ = 0.0;
  double left_mass_ = 0.0;
};

namespace detail {

// max |f(x) - f(y)| / |x - y|^exponent over pairs of a uniform grid.
template <class F>
double holder_quotient(F&& f, double lo, double hi, double exponent,
                       std::size_t points = 201) {
  std::vector<double> xs(points);
  std::vector<double> fs(points);
  for (std::size_t i = 0; i < points; ++i) {
    xs[i] = lo + (hi - lo) * static_cast<double>(i) /
                     static_cast<double>(points - 1);
    fs[i] = f(xs[i]);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    for (std::size_t j = i + 1; j < points; ++j) {
      worst = std::max(worst, std::abs(fs[i] - fs[j]) /
                                  std::pow(xs[j] - xs[i], exponent));
    }
  }
  return worst;
}

}  // namespace detail

/// Builds a density of the requested family inside the class described by
/// `spec`. Throws InvalidArgument with a diagnostic when the family cannot
/// satisfy the class bounds.
inline TestDensity make_test_density(const DensityClassSpec& spec,
                                     DensityFamily family,
                                     const FamilyParams& params = {}) {
  spec.validate();
  const double d = spec.delta;
  TestDensity density(spec, family);

  switch (family) {
    case DensityFamily::Uniform:
      if (spec.b * (1.0 - d) > 1.0) {
        throw InvalidArgument(
            "infeasible class: b*(1-delta) > 1, no density on [delta,1] can "
            "stay above b");
      }
      break;
    case DensityFamily::RaisedCosineBump: {
      const double c = params.center.value_or(0.5 * (1.0 + d));
      if (!(c > d && c <= 0.5 * (1.0 + d))) {
        throw InvalidArgument(
            "bump center must lie in (delta, (1+delta)/2] so the bump fits "
            "inside [delta,1]");
      }
      if (!(params.bump_weight >= 0.0 && params.bump_weight < 1.0)) {
        throw InvalidArgument("bump_weight must lie in [0,1)");
      }
      density.center_ = c;
      density.radius_ = c - d;
      density.weight_ = params.bump_weight;
      break;
    }
    case DensityFamily::PiecewiseLinear: {
      const double apex = params.apex.value_or(0.5 * (1.0 + d));
      if (!(apex > d && apex < 1.0)) {
        throw InvalidArgument("tent apex must lie in (delta,1)");
      }
      if (!(params.tail_ratio > 0.0)) {
        throw InvalidArgument("tent tail_ratio must be positive");
      }
      density.apex_ = apex;
      density.tail_ = params.tail_ratio;
      density.height_ =
          1.0 / (0.5 * (apex - d) + 0.5 * (1.0 - apex) * (1.0 + params.tail_ratio));
      density.left_mass_ = 0.5 * density.height_ * (apex - d);
      break;
    }
  }

  if (spec.eta > density.smoothness()) {
    throw InvalidArgument(std::string("family '") + to_string(family) +
                          "' is not smooth enough for the requested eta");
  }

  constexpr std::size_t kCheckPoints = 1001;
  double peak = 0.0;
  for (std::size_t i = 0; i < kCheckPoints; ++i) {
    const double x =
        d + (1.0 - d) * static_cast<double>(i) / (kCheckPoints - 1);
    peak = std::max(peak, density.pdf(x));
  }
  if (family == DensityFamily::PiecewiseLinear) {
    peak = std::max(peak, density.pdf(density.apex_));
  }
  if (peak > spec.B) {
    throw InvalidArgument("density peak " + std::to_string(peak) +
                          " exceeds the class bound B");
  }
  const double floor_lo = 1.0 - spec.epsilon;
  double floor = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kCheckPoints; ++i) {
    const double x =
        floor_lo + spec.epsilon * static_cast<double>(i) / (kCheckPoints - 1);
    floor = std::min(floor, density.pdf(x));
  }
  if (floor < spec.b) {
    throw InvalidArgument("density falls to " + std::to_string(floor) +
                          " below b on [1-epsilon,1]");
  }

  // Hoelder check on [delta,1]: on f itself for eta <= 1, on f' for
  // 1 < eta <= 2.
  double quotient = 0.0;
  if (spec.eta <= 1.0) {
    quotient = detail::holder_quotient(density, d, 1.0, spec.eta);
  } else if (std::isfinite(density.smoothness())) {
    constexpr double kStep = 1e-6;
    auto derivative = [&](double x) {
      const double lo = std::max(d, x - kStep);
      const double hi = std::min(1.0, x + kStep);
      return (density.pdf(hi) - density.pdf(lo)) / (hi - lo);
    };
    quotient = detail::holder_quotient(derivative, d, 1.0, spec.eta - 1.0);
  }
  if (quotient > spec.L1) {
    throw InvalidArgument("Hoelder quotient " + std::to_string(quotient) +
                          " exceeds L1");
  }
  return density;
}

/// Latent skills alpha_1..alpha_n, each in [delta, 1].
class SkillVector {
 public:
  SkillVector(std::vector<double> values, double delta)
      : values_(std::move(values)), delta_(delta) {
    if (values_.size() < 2) throw InvalidArgument("need at least two skills");
    if (!(delta_ > 0.0 && delta_ <= 1.0))
      throw InvalidArgument("skill lower bound must lie in (0,1]");
    for (double v : values_) {
      if (!(v >= delta_ && v <= 1.0)) {
        throw InvalidArgument("skill " + std::to_string(v) +
                              " outside [delta,1]");
      }
    }
  }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  double delta() const noexcept { return delta_; }

 private:
  std::vector<double> values_;
  double delta_;
};

// Unordered pair {i, j}, stored with i < j.
struct Edge {
  std::uint32_t i;
  std::uint32_t j;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected simple graph on players 0..n-1 recording which pairs met.
class ComparisonGraph {
 public:
  ComparisonGraph(std::size_t n, std::vector<Edge> edges, double p = 1.0)
      : n_(n), edges_(std::move(edges)), p_(p) {
    if (n_ < 2) throw InvalidArgument("graph needs at least two players");
    if (n_ > std::numeric_limits<std::uint32_t>::max())
      throw InvalidArgument("too many players");
    if (!(p_ > 0.0 && p_ <= 1.0)) throw InvalidArgument("p must lie in (0,1]");
    for (Edge& e : edges_) {
      if (e.i == e.j) throw InvalidArgument("self-loop in comparison graph");
      if (e.i > e.j) std::swap(e.i, e.j);
      if (e.j >= n_) throw InvalidArgument("edge endpoint out of range");
    }
    if (!std::is_sorted(edges_.begin(), edges_.end())) {
      std::sort(edges_.begin(), edges_.end());
    }
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
      throw InvalidArgument("pair listed twice in comparison graph");
    }
  }

  std::size_t n() const noexcept { return n_; }
  double p() const noexcept { return p_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  // Index of edge {i, j} in edges(), if present.
  std::optional<std::size_t> find(std::size_t i, std::size_t j) const {
    if (i == j || i >= n_ || j >= n_) return std::nullopt;
    if (i > j) std::swap(i, j);
    const Edge key{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)};
    auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
    if (it == edges_.end() || *it != key) return std::nullopt;
    return static_cast<std::size_t>(it - edges_.begin());
  }

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  double p_;
};

// Exact win record num/den.
struct WinRecord {
  std::uint32_t wins;
  std::uint32_t games;

  double fraction() const noexcept {
    return games == 0 ? 0.0
                      : static_cast<double>(wins) / static_cast<double>(games);
  }
};

/// Per-pair game outcomes on the edges of a comparison graph. For edge
/// {i, j} with i < j, `wins[e]` counts games j won against i out of
/// `games[e]`. Z(i,j) = wins/games and Z(j,i) = 1 - Z(i,j); non-edges and
/// the diagonal are zero.
class ObservationMatrix {
 public:
  ObservationMatrix(ComparisonGraph graph, std::vector<std::uint32_t> wins,
                    std::vector<std::uint32_t> games)
      : graph_(std::move(graph)), wins_(std::move(wins)), games_(std::move(games)) {
    if (wins_.size() != graph_.edge_count() || games_.size() != wins_.size()) {
      throw InvalidArgument("one win record per edge required");
    }
    for (std::size_t e = 0; e < wins_.size(); ++e) {
      if (games_[e] == 0) throw InvalidArgument("edge with zero games");
      if (wins_[e] > games_[e]) throw InvalidArgument("more wins than games");
    }
  }

  const ComparisonGraph& graph() const noexcept { return graph_; }
  std::size_t n() const noexcept { return graph_.n(); }
  std::size_t edge_count() const noexcept { return graph_.edge_count(); }
  std::span<const std::uint32_t> wins() const noexcept { return wins_; }
  std::span<const std::uint32_t> games() const noexcept { return games_; }

  // Z(i,j) for the stored orientation i < j of edge e.
  double win_fraction(std::size_t e) const {
    return static_cast<double>(wins_[e]) / static_cast<double>(games_[e]);
  }

  // Fraction of games j won against i, exactly, or {0,0} when i and j
  // never met.
  WinRecord record(std::size_t i, std::size_t j) const {
    const auto e = graph_.find(i, j);
    if (!e) return {0, 0};
    if (i < j) return {wins_[*e], games_[*e]};
    return {games_[*e] - wins_[*e], games_[*e]};
  }

  double win_fraction(std::size_t i, std::size_t j) const {
    return record(i, j).fraction();
  }

 private:
  ComparisonGraph graph_;
  std::vector<std::uint32_t> wins_;
  std::vector<std::uint32_t> games_;
};

/// Non-negative vector summing to one.
class ProbVector {
 public:
  static constexpr double kSumTolerance = 1e-12;

  explicit ProbVector(std::vector<double> entries)
      : entries_(std::move(entries)) {
    if (entries_.empty()) throw InvalidArgument("empty probability vector");
    for (double v : entries_) {
      if (!(v >= 0.0)) throw InvalidArgument("negative probability entry");
    }
    if (std::abs(accurate_sum(entries_) - 1.0) > kSumTolerance) {
      throw InvalidArgument("probability vector does not sum to one");
    }
  }

  // Scales non-negative weights onto the simplex.
  static ProbVector normalized(std::vector<double> weights) {
    const double total = accurate_sum(weights);
    if (!(total > 0.0)) throw InvalidArgument("weights sum to zero");
    for (double& w : weights) w /= total;
    return ProbVector(std::move(weights));
  }

  std::size_t size() const noexcept { return entries_.size(); }
  double operator[](std::size_t i) const { return entries_[i]; }
  std::span<const double> entries() const noexcept { return entries_; }

  // Neumaier-compensated sum.
  static double accurate_sum(std::span<const double> xs) {
    double sum = 0.0;
    double carry = 0.0;
    for (double x : xs) {
      const double t = sum + x;
      if (std::abs(sum) >= std::abs(x)) {
        carry += (sum - t) + x;
      } else {
        carry += (x - t) + sum;
      }
      sum = t;
    }
    return sum + carry;
  }

 private:
  std::vector<double> entries_;
};

/// n i.i.d. draws from `density`, a pure function of the seed.
inline SkillVector sample_skills(const TestDensity& density, std::size_t n,
                                 std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("need at least two players");
  CounterRng rng(child_seed(seed, {0x5ce11}));
  std::vector<double> values(n);
  for (double& v : values) v = density.sample(rng);
  return SkillVector(std::move(values), density.lower());
}

/// Erdos-Renyi graph: each pair is kept independently with probability p.
inline ComparisonGraph sample_graph(std::size_t n, double p,
                                    std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("need at least two players");
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("p must lie in (0,1]");
  CounterRng rng(child_seed(seed, {0x6a4a}));
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(pairs * p + 4.0 * std::sqrt(pairs) + 16));
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      if (p >= 1.0 || rng.uniform() < p) edges.push_back({i, j});
    }
  }
  return ComparisonGraph(n, std::move(edges), p);
}

namespace detail {

inline std::uint32_t binomial(CounterRng& rng, std::uint32_t k, double q) {
  if (k <= 64) {
    std::uint32_t hits = 0;
    for (std::uint32_t m = 0; m < k; ++m) hits += rng.uniform() < q ? 1 : 0;
    return hits;
  }
  std::binomial_distribution<std::uint32_t> draw(k, q);
  return draw(rng);
}

}  // namespace detail

/// Plays k BTL games on every edge: j beats i with probability
/// alpha_j / (alpha_i + alpha_j).
inline ObservationMatrix simulate_games(const SkillVector& skills,
                                        ComparisonGraph graph, std::uint32_t k,
                                        std::uint64_t seed) {
  if (graph.n() != skills.size())
    throw InvalidArgument("graph and skill vector sizes differ");
  if (k < 1) throw InvalidArgument("k must be at least 1");
  CounterRng rng(child_seed(seed, {0x9a3e5}));
  std::vector<std::uint32_t> wins;
  wins.reserve(graph.edge_count());
  for (const Edge& e : graph.edges()) {
    const double ai = skills[e.i];
    const double aj = skills[e.j];
    wins.push_back(detail::binomial(rng, k, aj / (ai + aj)));
  }
  std::vector<std::uint32_t> games(wins.size(), k);
  return ObservationMatrix(std::move(graph), std::move(wins), std::move(games));
}

/// pi(i) = alpha_i / sum_j alpha_j.
inline ProbVector canonical_pi(const SkillVector& skills) {
  return ProbVector::normalized(
      std::vector<double>(skills.values().begin(), skills.values().end()));
}

}  // namespace skillpdf
