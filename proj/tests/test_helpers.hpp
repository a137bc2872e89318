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

#include <random>
#include <string>

#include "locc/instrument.hpp"
#include "locc/matrix.hpp"
#include "locc/spectral.hpp"

namespace locc_test {

inline locc::CMatrix random_matrix(std::mt19937_64& rng, std::size_t rows,
                                   std::size_t cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  locc::CMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      m(i, j) = locc::complex(g(rng), g(rng));
  return m;
}

inline locc::CMatrix random_hermitian(std::mt19937_64& rng, std::size_t n) {
  locc::CMatrix m = random_matrix(rng, n, n);
  return locc::CMatrix(0.5 * (m + m.adjoint()));
}

inline locc::CMatrix random_unitary(std::mt19937_64& rng, std::size_t n) {
  locc::CMatrix g = random_matrix(rng, n, n);
  // Gram-Schmidt on columns; Gaussian columns are independent a.s.
  std::vector<std::vector<locc::complex>> cols;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<locc::complex> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = g(i, c);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : cols) {
        locc::complex ov = 0.0;
        for (std::size_t i = 0; i < n; ++i) ov += std::conj(u[i]) * w[i];
        for (std::size_t i = 0; i < n; ++i) w[i] -= ov * u[i];
      }
    double nn = 0.0;
    for (const auto& x : w) nn += std::norm(x);
    nn = std::sqrt(nn);
    for (auto& x : w) x /= nn;
    cols.push_back(std::move(w));
  }
  locc::CMatrix u(n, n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t i = 0; i < n; ++i) u(i, c) = cols[c][i];
  return u;
}

inline locc::CMatrix random_density(std::mt19937_64& rng, std::size_t n) {
  locc::CMatrix g = random_matrix(rng, n, n);
  locc::CMatrix rho = g * g.adjoint();
  return locc::CMatrix((1.0 / rho.trace().real()) * rho);
}

inline locc::CMatrix random_pure_state(std::mt19937_64& rng, std::size_t n) {
  locc::CMatrix v = random_matrix(rng, n, 1);
  double nn = v.frobenius_norm();
  return locc::CMatrix((1.0 / nn) * v);
}

// Random single-party instrument with one Kraus operator per outcome:
// slicing an isometry into row blocks makes the completeness sum exact.
inline locc::Instrument random_local_instrument(std::mt19937_64& rng,
                                                std::size_t dim,
                                                std::size_t outcomes) {
  locc::CMatrix u = random_unitary(rng, dim * outcomes);
  locc::Instrument instr;
  for (std::size_t j = 0; j < outcomes; ++j) {
    locc::CMatrix block(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c) block(r, c) = u(j * dim + r, c);
    instr.labels.push_back(std::to_string(j));
    instr.maps.push_back(locc::KrausMap({block}, {dim}));
  }
  return instr;
}

}  // namespace locc_test
