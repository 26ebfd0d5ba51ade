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
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "skillpdf/error.hpp"
#include "skillpdf/kernel.hpp"
#include "skillpdf/quadrature.hpp"

namespace skillpdf {

/// Bandwidth balancing the kernel bias against the skill-estimation error:
///   h = gamma * max{delta^{-1/(eta+1)} (pk)^{-1/(2eta+2)}, 1} * (log n / n)^{1/(2eta+2)}
/// clamped to at most 1. `n` is real-valued so the formula can be probed
/// between integers.
inline double theoretical_bandwidth(double n, double p, double k, double delta,
                                    double eta, double gamma = 1.0) {
  if (!(n >= 2.0)) throw InvalidArgument("bandwidth needs n >= 2");
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("p must lie in (0,1]");
  if (!(k > 0.0)) throw InvalidArgument("k must be positive");
  if (!(delta > 0.0 && delta <= 1.0)) throw InvalidArgument("delta must lie in (0,1]");
  if (!(eta > 0.0)) throw InvalidArgument("eta must be positive");
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
  const double rate = 1.0 / (2.0 * eta + 2.0);
  const double inflation =
      std::max(std::pow(delta, -1.0 / (eta + 1.0)) * std::pow(p * k, -rate), 1.0);
  const double h = gamma * inflation * std::pow(std::log(n) / n, rate);
  return std::min(h, 1.0);
}

/// h = 0.3 n^{-1/4}.
inline double practical_bandwidth(double n) {
  if (!(n >= 1.0)) throw InvalidArgument("bandwidth needs n >= 1");
  return 0.3 * std::pow(n, -0.25);
}

inline constexpr std::size_t kExportGridPoints = 1024;

/// Parzen-Rosenblatt estimate (1/nh) sum_i K((x_i - x)/h), evaluated as an
/// exact sum over the points within one bandwidth of x.
class DensityEstimate {
 public:
  DensityEstimate(std::vector<double> points, double h, Kernel kernel,
                  bool truncated = false)
      : points_(std::move(points)), h_(h), kernel_(std::move(kernel)), truncated_(truncated) {
    if (points_.empty()) throw InvalidArgument("density estimate needs points");
    if (!(h_ > 0.0 && h_ <= 1.0)) throw InvalidArgument("bandwidth must lie in (0,1]");
    for (double x : points_)
      if (!std::isfinite(x)) throw InvalidArgument("non-finite point");
    std::sort(points_.begin(), points_.end());
  }

  double operator()(double x) const {
    const double v = raw(x);
    return truncated_ ? std::max(v, 0.0) : v;
  }

  // Untruncated value.
  double raw(double x) const {
    const auto first = std::lower_bound(points_.begin(), points_.end(), x - h_);
    const auto last = std::upper_bound(first, points_.end(), x + h_);
    double sum = 0.0;
    for (auto it = first; it != last; ++it) sum += kernel_((*it - x) / h_);
    return sum / (static_cast<double>(points_.size()) * h_);
  }

  // Exact integral of the untruncated estimate.
  double mass() const { return kernel_.integral(-1.0, 1.0); }

  std::pair<double, double> support() const {
    return {points_.front() - h_, points_.back() + h_};
  }

  std::span<const double> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  double bandwidth() const noexcept { return h_; }
  const Kernel& kernel() const noexcept { return kernel_; }
  bool truncated() const noexcept { return truncated_; }

 private:
  std::vector<double> points_;
  double h_;
  Kernel kernel_;
  bool truncated_;
};

inline DensityEstimate kde(std::span<const double> points, double h,
                           const Kernel& kernel) {
  return DensityEstimate(std::vector<double>(points.begin(), points.end()), h, kernel);
}

/// max{estimate, 0}.
inline DensityEstimate truncate_nonneg(const DensityEstimate& d) {
  return DensityEstimate(std::vector<double>(d.points().begin(), d.points().end()),
                         d.bandwidth(), d.kernel(), /*truncated=*/true);
}

enum class EntropyMethod { Resubstitution, GridQuadrature };

inline const char* to_string(EntropyMethod method) {
  return method == EntropyMethod::Resubstitution ? "resubstitution" : "grid";
}

struct EntropyScore {
  double value;  // nats
  EntropyMethod method;
};

// Floor applied to density values before taking logs.
inline constexpr double kDensityFloor = 1e-12;
// Grid for entropy quadrature over [-1, 2]; finer than kQuadraturePoints so
// that jump discontinuities of exact test densities cost < 1e-4.
inline constexpr std::size_t kEntropyGridPoints = 100001;

/// (1/n) sum_i log f(x_i) with f clamped below at kDensityFloor.
template <class F>
double resubstitution_negative_entropy(const F& f, std::span<const double> points) {
  if (points.empty()) throw InvalidArgument("no resubstitution points");
  double sum = 0.0;
  bool any_positive = false;
  for (double x : points) {
    const double v = f(x);
    if (v >= kDensityFloor) any_positive = true;
    sum += std::log(std::max(v, kDensityFloor));
  }
  if (!any_positive) {
    throw DegenerateEstimateError("density vanishes at every resubstitution point");
  }
  return sum / static_cast<double>(points.size());
}

/// int f log f over [lo, hi] by the trapezoid rule. With `renormalize` the
/// negative part is cut off and f rescaled to unit mass first; without it,
/// negative values are skipped and the mass is left as is.
template <class F>
double grid_negative_entropy(const F& f, bool renormalize = true,
                             double lo = kSupportLo, double hi = kSupportHi,
                             std::size_t points = kEntropyGridPoints) {
  const auto xs = linspace(lo, hi, points);
  std::vector<double> values(points);
  for (std::size_t i = 0; i < points; ++i) values[i] = std::max(f(xs[i]), 0.0);
  double scale = 1.0;
  if (renormalize) {
    const double mass = trapezoid(values, lo, hi);
    if (!(mass > 0.0)) throw DegenerateEstimateError("density has no positive mass");
    scale = 1.0 / mass;
  }
  for (double& v : values) {
    v *= scale;
    v = v > 0.0 ? v * std::log(std::max(v, kDensityFloor)) : 0.0;
  }
  return trapezoid(values, lo, hi);
}

/// Negative differential entropy of an estimate. Resubstitution averages
/// log d over `eval_points` (the estimate's own points); GridQuadrature
/// integrates the truncated, renormalised estimate.
inline EntropyScore negative_entropy(const DensityEstimate& d,
                                     std::span<const double> eval_points,
                                     EntropyMethod method) {
  if (method == EntropyMethod::Resubstitution) {
    return {resubstitution_negative_entropy(d, eval_points), method};
  }
  const DensityEstimate cut = d.truncated() ? d : truncate_nonneg(d);
  return {grid_negative_entropy(cut, /*renormalize=*/true), method};
}

}  // namespace skillpdf
