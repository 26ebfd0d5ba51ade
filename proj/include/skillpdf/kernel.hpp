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
#include <string>
#include <utility>
#include <vector>

#include "skillpdf/error.hpp"
#include "skillpdf/quadrature.hpp"

namespace skillpdf {

/// A kernel supported on [-1, 1] that is a polynomial there. `order` is the
/// number of vanishing moments (int x^i K = 0 for 1 <= i <= order).
class Kernel {
 public:
  Kernel(std::string name, int order, std::vector<double> coefficients,
         double lipschitz)
      : name_(std::move(name)),
        order_(order),
        coefficients_(std::move(coefficients)),
        lipschitz_(lipschitz) {
    if (coefficients_.empty()) throw InvalidArgument("kernel without coefficients");
  }

  double operator()(double x) const {
    if (x < -1.0 || x > 1.0) return 0.0;
    double acc = 0.0;
    for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
      acc = acc * x + *it;
    }
    return acc;
  }

  double derivative(double x) const {
    if (x < -1.0 || x > 1.0) return 0.0;
    double acc = 0.0;
    for (std::size_t m = coefficients_.size() - 1; m >= 1; --m) {
      acc = acc * x + static_cast<double>(m) * coefficients_[m];
    }
    return acc;
  }

  // Exact integral of K over [a, b].
  double integral(double a, double b) const {
    a = std::clamp(a, -1.0, 1.0);
    b = std::clamp(b, -1.0, 1.0);
    return antiderivative(b) - antiderivative(a);
  }

  const std::string& name() const noexcept { return name_; }
  int order() const noexcept { return order_; }
  double lipschitz() const noexcept { return lipschitz_; }
  const std::vector<double>& coefficients() const noexcept { return coefficients_; }

 private:
  double antiderivative(double x) const {
    double acc = 0.0;
    for (std::size_t m = coefficients_.size(); m-- > 0;) {
      acc = acc * x + coefficients_[m] / static_cast<double>(m + 1);
    }
    return acc * x;
  }

  std::string name_;
  int order_;
  std::vector<double> coefficients_;
  double lipschitz_;
};

/// K(x) = 3/4 (1 - x^2) on [-1, 1]; order 1, Lipschitz constant 3/2.
inline Kernel epanechnikov() {
  return Kernel("epanechnikov", 1, {0.75, 0.0, -0.75}, 1.5);
}

inline constexpr int kMaxKernelOrder = 12;

/// Kernel of order s from orthonormal Legendre polynomials:
/// K(x) = sum_{m=0}^{s} phi_m(0) phi_m(x) on [-1, 1].
inline Kernel kernel_of_order(int s) {
  if (s < 0) throw InvalidArgument("kernel order must be non-negative");
  if (s > kMaxKernelOrder) {
    throw InvalidArgument("kernel order above " + std::to_string(kMaxKernelOrder) +
                          " is numerically ill-conditioned");
  }
  // Monomial coefficients of P_m via (m+1) P_{m+1} = (2m+1) x P_m - m P_{m-1},
  // together with the values P_m(0).
  std::vector<double> prev{1.0};        // P_0
  std::vector<double> curr{0.0, 1.0};   // P_1
  double prev0 = 1.0;
  double curr0 = 0.0;
  std::vector<double> kernel(static_cast<std::size_t>(s) + 1, 0.0);
  kernel[0] = 0.5;  // (2*0+1)/2 * P_0(0) * P_0(x)
  for (int m = 1; m <= s; ++m) {
    if (m > 1) {
      std::vector<double> next(static_cast<std::size_t>(m) + 1, 0.0);
      const double a = (2.0 * (m - 1) + 1.0) / m;
      const double b = (m - 1.0) / m;
      for (std::size_t c = 0; c < curr.size(); ++c) next[c + 1] += a * curr[c];
      for (std::size_t c = 0; c < prev.size(); ++c) next[c] -= b * prev[c];
      const double next0 = -b * prev0;
      prev = std::move(curr);
      curr = std::move(next);
      prev0 = curr0;
      curr0 = next0;
    }
    const double weight = (2.0 * m + 1.0) / 2.0 * curr0;
    if (weight == 0.0) continue;
    for (std::size_t c = 0; c < curr.size(); ++c) kernel[c] += weight * curr[c];
  }

  Kernel probe("order:" + std::to_string(s), s, kernel, 0.0);
  double lipschitz = 0.0;
  for (double x : linspace(-1.0, 1.0, kQuadraturePoints)) {
    lipschitz = std::max(lipschitz, std::abs(probe.derivative(x)));
  }
  return Kernel(probe.name(), s, std::move(kernel), lipschitz);
}

// Parses "epanechnikov" or "order:S".
inline Kernel kernel_from_name(const std::string& name) {
  if (name == "epanechnikov") return epanechnikov();
  const std::string prefix = "order:";
  if (name.rfind(prefix, 0) == 0) {
    const std::string digits = name.substr(prefix.size());
    if (digits.empty() || digits.size() > 3 ||
        !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw InvalidArgument("bad kernel order in '" + name + "'");
    }
    return kernel_of_order(std::stoi(digits));
  }
  throw InvalidArgument("unknown kernel '" + name + "'");
}

}  // namespace skillpdf
