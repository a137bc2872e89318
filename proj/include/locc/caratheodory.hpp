// Copyright 2026 The locc-toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace locc {

/// Surviving subset of a weighted point set, indexed into the input order.
struct CaratheodoryResult {
  std::vector<std::size_t> support;
  std::vector<double> weights;
};

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const std::vector<double>& a) {
  return std::sqrt(dot(a, a));
}

/// Any unit vector annihilated by every row, or empty if the rows span the
/// whole space. Projection against an orthonormal row basis keeps full
/// working precision; a squared normal-matrix eigensolve would not.
inline std::vector<double> affine_null_vector(
    std::vector<std::vector<double>> rows) {
  if (rows.empty()) return {};
  const std::size_t s = rows.front().size();
  std::vector<std::vector<double>> basis;
  for (auto& row : rows) {
    const double scale = norm(row);
    if (scale == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) {
        const double c = dot(q, row);
        for (std::size_t i = 0; i < s; ++i) row[i] -= c * q[i];
      }
    const double residual = norm(row);
    if (residual <= 1e-12 * scale) continue;
    for (std::size_t i = 0; i < s; ++i) row[i] /= residual;
    basis.push_back(row);
  }
  if (basis.size() >= s) return {};

  // The kernel has dimension s - rank, so the best coordinate direction
  // keeps at least 1/sqrt(s) of its norm after projection.
  std::vector<double> best;
  double best_norm = 0.0;
  for (std::size_t cand = 0; cand < s; ++cand) {
    std::vector<double> v(s, 0.0);
    v[cand] = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) {
        const double c = dot(q, v);
        for (std::size_t i = 0; i < s; ++i) v[i] -= c * q[i];
      }
    const double vn = norm(v);
    if (vn > best_norm) {
      best_norm = vn;
      best = std::move(v);
    }
  }
  if (best_norm <= 0.5 / std::sqrt(static_cast<double>(s))) return {};
  for (auto& x : best) x /= best_norm;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& q : basis) {
      const double c = dot(q, best);
      for (std::size_t i = 0; i < best.size(); ++i) best[i] -= c * q[i];
    }
  const double bn = norm(best);
  for (auto& x : best) x /= bn;
  return best;
}

}  // namespace detail

/// Caratheodory pruning: drives the support of a convex combination down to
/// at most n+1 points (n = ambient dimension) without moving the barycenter
/// or the total weight. Each step shifts the weights along an affine
/// dependence until the smallest weight-to-coefficient ratio hits zero.
///
/// With minimal = true the loop instead runs until no numerical affine
/// dependence remains, which can cut below n+1 when the points themselves
/// are degenerate (duplicated or affinely dependent).
inline CaratheodoryResult caratheodory_reduce(
    const std::vector<std::vector<double>>& points,
    const std::vector<double>& weights, double tol = 1e-12,
    bool minimal = false) {
  if (points.size() != weights.size())
    throw std::invalid_argument("caratheodory_reduce: size mismatch");
  if (points.empty())
    throw std::invalid_argument("caratheodory_reduce: empty input");
  const std::size_t n = points.front().size();
  for (const auto& p : points)
    if (p.size() != n)
      throw std::invalid_argument("caratheodory_reduce: ragged points");

  CaratheodoryResult r;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (weights[i] < 0.0)
      throw std::invalid_argument("caratheodory_reduce: negative weight");
    if (weights[i] > 0.0) {
      r.support.push_back(i);
      r.weights.push_back(weights[i]);
    }
  }

  while (r.support.size() > 1) {
    if (!minimal && r.support.size() <= n + 1) break;
    const std::size_t s = r.support.size();
    std::vector<std::vector<double>> rows(n + 1,
                                          std::vector<double>(s, 1.0));
    for (std::size_t c = 0; c < s; ++c)
      for (std::size_t row = 0; row < n; ++row)
        rows[row][c] = points[r.support[c]][row];
    const std::vector<double> gamma = detail::affine_null_vector(rows);
    if (gamma.empty()) {
      if (!minimal)
        throw std::logic_error(
            "caratheodory_reduce: dependence not found above n+1 points");
      break;
    }

    // Zero out the entry with the smallest weight-to-coefficient ratio; the
    // signed step keeps every other weight nonnegative.
    std::size_t pivot = s;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
      if (std::abs(gamma[i]) <= tol) continue;
      const double ratio = r.weights[i] / std::abs(gamma[i]);
      if (pivot == s || ratio < best_ratio) {
        pivot = i;
        best_ratio = ratio;
      }
    }
    if (pivot == s)
      throw std::logic_error("caratheodory_reduce: null vector below tol");
    const double t = r.weights[pivot] / gamma[pivot];

    CaratheodoryResult next;
    for (std::size_t i = 0; i < s; ++i) {
      if (i == pivot) continue;
      const double w = r.weights[i] - t * gamma[i];
      if (w <= 0.0) continue;
      next.support.push_back(r.support[i]);
      next.weights.push_back(w);
    }
    r = std::move(next);
  }
  return r;
}

}  // namespace locc
