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
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "skillpdf/error.hpp"
#include "skillpdf/model.hpp"

namespace skillpdf {

enum class TransitionKind { Empirical, Oracle, General };

inline constexpr double kRowSumTolerance = 1e-12;

/// Row-stochastic n x n matrix. Stored densely up to kDenseLimit players and
/// as CSR off-diagonals plus a diagonal beyond that.
class TransitionMatrix {
 public:
  static constexpr std::size_t kDenseLimit = 10000;

  // Validates non-negativity and unit row sums.
  static TransitionMatrix from_rows(const std::vector<std::vector<double>>& rows,
                                    TransitionKind kind = TransitionKind::General) {
    const std::size_t n = rows.size();
    if (n == 0) throw InvalidArgument("empty transition matrix");
    if (n > kDenseLimit) throw InvalidArgument("from_rows is dense-only");
    TransitionMatrix m(n, kind, /*dense=*/true);
    for (std::size_t i = 0; i < n; ++i) {
      if (rows[i].size() != n) throw InvalidArgument("transition matrix not square");
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double v = rows[i][j];
        if (!(v >= 0.0)) throw InvalidArgument("negative transition probability");
        m.dense_[i * n + j] = v;
        sum += v;
      }
      if (std::abs(sum - 1.0) > kRowSumTolerance) {
        throw InvalidArgument("row " + std::to_string(i) + " does not sum to one");
      }
    }
    return m;
  }

  std::size_t n() const noexcept { return n_; }
  TransitionKind kind() const noexcept { return kind_; }
  bool is_dense() const noexcept { return !dense_.empty(); }

  double operator()(std::size_t i, std::size_t j) const {
    if (is_dense()) return dense_[i * n_ + j];
    if (i == j) return diag_[i];
    const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
    const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
    const auto it = std::lower_bound(first, last, static_cast<std::uint32_t>(j));
    if (it == last || *it != j) return 0.0;
    return values_[static_cast<std::size_t>(it - cols_.begin())];
  }

  // out = v * S (row vector times matrix).
  void left_multiply(std::span<const double> v, std::span<double> out) const {
    if (v.size() != n_ || out.size() != n_)
      throw InvalidArgument("vector length does not match matrix");
    std::fill(out.begin(), out.end(), 0.0);
    if (is_dense()) {
      for (std::size_t i = 0; i < n_; ++i) {
        const double vi = v[i];
        if (vi == 0.0) continue;
        const double* row = dense_.data() + i * n_;
        for (std::size_t j = 0; j < n_; ++j) out[j] += vi * row[j];
      }
      return;
    }
    for (std::size_t i = 0; i < n_; ++i) {
      const double vi = v[i];
      out[i] += vi * diag_[i];
      for (std::size_t e = offsets_[i]; e < offsets_[i + 1]; ++e) {
        out[cols_[e]] += vi * values_[e];
      }
    }
  }

  // Largest |row sum - 1| and smallest entry, for invariant checks.
  double max_row_sum_error() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      double sum = 0.0;
      if (is_dense()) {
        for (std::size_t j = 0; j < n_; ++j) sum += dense_[i * n_ + j];
      } else {
        sum = diag_[i];
        for (std::size_t e = offsets_[i]; e < offsets_[i + 1]; ++e) sum += values_[e];
      }
      worst = std::max(worst, std::abs(sum - 1.0));
    }
    return worst;
  }

  double min_entry() const {
    if (is_dense()) return *std::min_element(dense_.begin(), dense_.end());
    double lo = *std::min_element(diag_.begin(), diag_.end());
    if (!values_.empty()) lo = std::min(lo, *std::min_element(values_.begin(), values_.end()));
    return lo;
  }

  double max_off_diagonal() const {
    double hi = 0.0;
    if (is_dense()) {
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
          if (i != j) hi = std::max(hi, dense_[i * n_ + j]);
    } else if (!values_.empty()) {
      hi = *std::max_element(values_.begin(), values_.end());
    }
    return hi;
  }

  std::vector<std::vector<double>> to_rows() const {
    std::vector<std::vector<double>> rows(n_, std::vector<double>(n_, 0.0));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) rows[i][j] = (*this)(i, j);
    return rows;
  }

 private:
  friend TransitionMatrix build_transition(const ObservationMatrix&, double);
  friend TransitionMatrix oracle_transition(const SkillVector&);

  TransitionMatrix(std::size_t n, TransitionKind kind, bool dense)
      : n_(n), kind_(kind) {
    if (dense) dense_.assign(n * n, 0.0);
  }

  std::size_t n_;
  TransitionKind kind_;
  std::vector<double> dense_;
  // Sparse layout.
  std::vector<double> diag_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> cols_;
  std::vector<double> values_;
};

struct RowDeficit {
  std::size_t row;
  double deficit;
};

namespace detail {

// Sum over r of Z(i, r) for every row i.
inline std::vector<double> observation_row_sums(const ObservationMatrix& obs) {
  std::vector<double> sums(obs.n(), 0.0);
  const auto edges = obs.graph().edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double k = obs.games()[e];
    sums[edges[e].i] += obs.wins()[e] / k;
    sums[edges[e].j] += (obs.games()[e] - obs.wins()[e]) / k;
  }
  return sums;
}

}  // namespace detail

/// First row whose diagonal would be negative in the empirical stochastic
/// matrix, without building the matrix.
inline std::optional<RowDeficit> find_row_deficit(const ObservationMatrix& obs,
                                                  double p) {
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("p must lie in (0,1]");
  const double scale = 1.0 / (2.0 * static_cast<double>(obs.n()) * p);
  const auto sums = detail::observation_row_sums(obs);
  for (std::size_t i = 0; i < sums.size(); ++i) {
    const double diag = 1.0 - sums[i] * scale;
    if (diag < 0.0) return RowDeficit{i, -diag};
  }
  return std::nullopt;
}

/// Empirical stochastic matrix S(i,j) = Z(i,j) / (2np) off the diagonal,
/// diagonal completing each row to one. Throws RowStochasticityError when a
/// diagonal entry would be negative.
inline TransitionMatrix build_transition(const ObservationMatrix& obs, double p) {
  if (auto bad = find_row_deficit(obs, p)) {
    throw RowStochasticityError(bad->row, bad->deficit);
  }
  const std::size_t n = obs.n();
  const double scale = 1.0 / (2.0 * static_cast<double>(n) * p);
  const auto edges = obs.graph().edges();
  const bool dense = n <= TransitionMatrix::kDenseLimit;
  TransitionMatrix m(n, TransitionKind::Empirical, dense);

  auto forward = [&](std::size_t e) {
    return static_cast<double>(obs.wins()[e]) / obs.games()[e] * scale;
  };
  auto backward = [&](std::size_t e) {
    return static_cast<double>(obs.games()[e] - obs.wins()[e]) / obs.games()[e] * scale;
  };

  if (dense) {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      m.dense_[edges[e].i * n + edges[e].j] = forward(e);
      m.dense_[edges[e].j * n + edges[e].i] = backward(e);
    }
    for (std::size_t i = 0; i < n; ++i) {
      double off = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) off += m.dense_[i * n + j];
      m.dense_[i * n + i] = std::max(0.0, 1.0 - off);
    }
    return m;
  }

  m.offsets_.assign(n + 1, 0);
  for (const Edge& e : edges) {
    ++m.offsets_[e.i + 1];
    ++m.offsets_[e.j + 1];
  }
  std::partial_sum(m.offsets_.begin(), m.offsets_.end(), m.offsets_.begin());
  m.cols_.resize(2 * edges.size());
  m.values_.resize(2 * edges.size());
  std::vector<std::size_t> cursor(m.offsets_.begin(), m.offsets_.end() - 1);
  // Edges are sorted by (i, j), so columns land sorted within each row.
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const std::size_t a = cursor[edges[e].i]++;
    m.cols_[a] = edges[e].j;
    m.values_[a] = forward(e);
    const std::size_t b = cursor[edges[e].j]++;
    m.cols_[b] = edges[e].i;
    m.values_[b] = backward(e);
  }
  m.diag_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double off = 0.0;
    for (std::size_t e = m.offsets_[i]; e < m.offsets_[i + 1]; ++e) off += m.values_[e];
    m.diag_[i] = std::max(0.0, 1.0 - off);
  }
  return m;
}

/// Exact BTL transition matrix D(i,j) = alpha_j / (alpha_i + alpha_j) / (2n)
/// whose unique stationary distribution is canonical_pi(skills).
inline TransitionMatrix oracle_transition(const SkillVector& skills) {
  const std::size_t n = skills.size();
  if (n > TransitionMatrix::kDenseLimit)
    throw InvalidArgument("oracle transition matrix is dense-only");
  const double scale = 1.0 / (2.0 * static_cast<double>(n));
  TransitionMatrix m(n, TransitionKind::Oracle, /*dense=*/true);
  for (std::size_t i = 0; i < n; ++i) {
    double off = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double v = scale * skills[j] / (skills[i] + skills[j]);
      m.dense_[i * n + j] = v;
      off += v;
    }
    m.dense_[i * n + i] = 1.0 - off;
  }
  return m;
}

struct StationaryResult {
  ProbVector pi_hat;
  std::size_t iterations = 0;
  double residual = 0.0;  // l1 change over the last sweep
  bool converged = false;
};

inline double default_power_tolerance(std::size_t n) {
  return 1e-12 * static_cast<double>(n);
}
inline constexpr std::size_t kDefaultMaxIterations = 100000;

/// Power iteration v <- v S from the uniform vector, renormalised to the
/// simplex every sweep, stopping once the l1 change is at most `tol`.
inline StationaryResult power_iterate(const TransitionMatrix& S, double tol,
                                      std::size_t max_iter = kDefaultMaxIterations) {
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (max_iter < 1) throw InvalidArgument("need at least one iteration");
  const std::size_t n = S.n();
  std::vector<double> v(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  double residual = 0.0;
  std::size_t iter = 0;
  bool converged = false;
  while (iter < max_iter) {
    ++iter;
    S.left_multiply(v, next);
    const double total = ProbVector::accurate_sum(next);
    residual = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      next[j] /= total;
      residual += std::abs(next[j] - v[j]);
    }
    v.swap(next);
    if (residual <= tol) {
      converged = true;
      break;
    }
  }
  return StationaryResult{ProbVector::normalized(std::move(v)), iter, residual, converged};
}

inline StationaryResult power_iterate(const TransitionMatrix& S) {
  return power_iterate(S, default_power_tolerance(S.n()));
}

struct SkillEstimates {
  std::vector<double> values;  // max entry is exactly 1
};

/// alpha_hat(i) = pi_hat(i) / max_j pi_hat(j).
inline SkillEstimates estimate_skills(std::span<const double> pi_hat) {
  if (pi_hat.empty()) throw InvalidArgument("empty stationary vector");
  const double top = *std::max_element(pi_hat.begin(), pi_hat.end());
  if (!(top > 0.0)) throw InvalidArgument("stationary vector is all zero");
  SkillEstimates out;
  out.values.reserve(pi_hat.size());
  for (double v : pi_hat) {
    if (v < 0.0) throw InvalidArgument("negative stationary entry");
    out.values.push_back(v / top);
  }
  return out;
}

inline SkillEstimates estimate_skills(const ProbVector& pi_hat) {
  return estimate_skills(pi_hat.entries());
}

struct ConnectivityReport {
  bool connected;
  std::size_t components;
};

inline ConnectivityReport check_connected(const ComparisonGraph& graph) {
  const std::size_t n = graph.n();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto root = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::size_t components = n;
  for (const Edge& e : graph.edges()) {
    const std::size_t a = root(e.i);
    const std::size_t b = root(e.j);
    if (a != b) {
      parent[std::max(a, b)] = std::min(a, b);
      --components;
    }
  }
  return {components == 1, components};
}

// Pairs {i,j} with S(i,j) > 0 or S(j,i) > 0.
inline ComparisonGraph support_graph(const TransitionMatrix& S) {
  std::vector<Edge> edges;
  for (std::uint32_t i = 0; i < S.n(); ++i)
    for (std::uint32_t j = i + 1; j < S.n(); ++j)
      if (S(i, j) > 0.0 || S(j, i) > 0.0) edges.push_back({i, j});
  return ComparisonGraph(S.n(), std::move(edges));
}

struct RankCentralityResult {
  StationaryResult stationary;
  SkillEstimates skills;
};

/// Stage one end to end: refuse disconnected graphs, build S, find its
/// stationary distribution and rescale it to skill estimates. Every edge
/// gives S a positive entry in at least one direction, so the support graph
/// of S is the comparison graph itself.
inline RankCentralityResult rank_centrality(const ObservationMatrix& obs, double p,
                                            std::optional<double> tol = std::nullopt,
                                            std::size_t max_iter = kDefaultMaxIterations) {
  const auto connectivity = check_connected(obs.graph());
  if (!connectivity.connected) throw DisconnectedGraphError(connectivity.components);
  StationaryResult stationary = [&] {
    const TransitionMatrix S = build_transition(obs, p);
    return power_iterate(S, tol.value_or(default_power_tolerance(obs.n())), max_iter);
  }();
  SkillEstimates skills = estimate_skills(stationary.pi_hat);
  return {std::move(stationary), std::move(skills)};
}

}  // namespace skillpdf
