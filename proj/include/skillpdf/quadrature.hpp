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

#include <concepts>
#include <cstddef>
#include <span>
#include <vector>

#include "skillpdf/error.hpp"

namespace skillpdf {

// Support of any estimate built from points in [0,1] with bandwidth <= 1.
inline constexpr double kSupportLo = -1.0;
inline constexpr double kSupportHi = 2.0;
inline constexpr std::size_t kQuadraturePoints = 10000;

// `count` equally spaced points from lo to hi inclusive. Endpoints are exact.
inline std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count < 2) throw InvalidArgument("linspace needs at least two points");
  std::vector<double> xs(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    xs[i] = lo + step * static_cast<double>(i);
  }
  xs.back() = hi;
  return xs;
}

// Composite trapezoid rule over equally spaced samples.
inline double trapezoid(std::span<const double> values, double lo, double hi) {
  if (values.size() < 2) throw InvalidArgument("trapezoid needs two samples");
  const double step = (hi - lo) / static_cast<double>(values.size() - 1);
  double sum = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) sum += values[i];
  return sum * step;
}

template <std::invocable<double> F>
double trapezoid(F&& f, double lo, double hi,
                 std::size_t points = kQuadraturePoints) {
  std::vector<double> values;
  values.reserve(points);
  for (double x : linspace(lo, hi, points)) values.push_back(f(x));
  return trapezoid(values, lo, hi);
}

// Composite Simpson rule with `intervals` (rounded up to even) subintervals.
template <std::invocable<double> F>
double simpson(F&& f, double lo, double hi,
               std::size_t intervals = kQuadraturePoints) {
  if (intervals < 2) intervals = 2;
  if (intervals % 2 != 0) ++intervals;
  const auto xs = linspace(lo, hi, intervals + 1);
  double sum = f(xs.front()) + f(xs.back());
  for (std::size_t i = 1; i < intervals; ++i) {
    sum += (i % 2 == 1 ? 4.0 : 2.0) * f(xs[i]);
  }
  return sum * (hi - lo) / (3.0 * static_cast<double>(intervals));
}

}  // namespace skillpdf
