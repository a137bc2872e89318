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
#include <utility>
#include <vector>

#include "locc/matrix.hpp"

namespace locc {

/// Completely positive map given by a finite Kraus list with a declared
/// party structure. An empty Kraus list is the zero map (used for padding).
/// party_dims_in factorizes the input space; party_dims_out the output space.
/// Every constructor that omits the output structure reuses the input one.
struct KrausMap {
  std::vector<CMatrix> kraus;
  std::vector<std::size_t> party_dims_in;
  std::vector<std::size_t> party_dims_out;

  KrausMap() = default;
  KrausMap(std::vector<CMatrix> ops, std::vector<std::size_t> dims)
      : kraus(std::move(ops)),
        party_dims_in(std::move(dims)),
        party_dims_out(party_dims_in) {}
  KrausMap(std::vector<CMatrix> ops, std::vector<std::size_t> dims_in,
           std::vector<std::size_t> dims_out)
      : kraus(std::move(ops)),
        party_dims_in(std::move(dims_in)),
        party_dims_out(std::move(dims_out)) {}

  std::size_t dim_in() const { return product(party_dims_in); }
  std::size_t dim_out() const { return product(party_dims_out); }
  std::size_t party_count() const { return party_dims_in.size(); }
  bool is_zero() const { return kraus.empty(); }
};

/// Throws unless every Kraus operator is dim_out x dim_in and the party
/// structures are nonempty with matching party counts.
inline void check_kraus_shapes(const KrausMap& m) {
  if (m.party_dims_in.empty())
    throw std::invalid_argument("KrausMap: empty party structure");
  if (m.party_dims_out.size() != m.party_dims_in.size())
    throw std::invalid_argument("KrausMap: party count mismatch in/out");
  for (const CMatrix& k : m.kraus)
    if (k.rows() != m.dim_out() || k.cols() != m.dim_in())
      throw std::invalid_argument("KrausMap: operator shape mismatch");
}

inline KrausMap zero_map(std::vector<std::size_t> dims_in) {
  return KrausMap({}, std::move(dims_in));
}

inline KrausMap zero_map(std::vector<std::size_t> dims_in,
                         std::vector<std::size_t> dims_out) {
  return KrausMap({}, std::move(dims_in), std::move(dims_out));
}

inline KrausMap identity_map(std::vector<std::size_t> dims) {
  const std::size_t d = product(dims);
  return KrausMap({CMatrix::identity(d)}, std::move(dims));
}

/// rho |-> sum_i K_i rho K_i^dag. The zero map sends everything to 0.
inline CMatrix apply_map(const KrausMap& m, const CMatrix& rho) {
  check_kraus_shapes(m);
  if (!rho.is_square() || rho.rows() != m.dim_in())
    throw std::invalid_argument("apply_map: state dimension mismatch");
  CMatrix out(m.dim_out(), m.dim_out());
  for (const CMatrix& k : m.kraus) out += k * rho * k.adjoint();
  return out;
}

/// sum_i K_i^dag K_i, the completeness witness (dim_in x dim_in).
inline CMatrix kraus_gram(const KrausMap& m) {
  check_kraus_shapes(m);
  CMatrix g(m.dim_in(), m.dim_in());
  for (const CMatrix& k : m.kraus) g += k.adjoint() * k;
  return g;
}

inline bool is_trace_preserving(const KrausMap& m, double tol = 1e-9) {
  const CMatrix g = kraus_gram(m);
  return (g - CMatrix::identity(m.dim_in())).max_abs() <= tol;
}

/// second after first as Kraus products {B_j A_i}.
inline KrausMap compose(const KrausMap& second, const KrausMap& first) {
  if (first.party_dims_out != second.party_dims_in)
    throw std::invalid_argument("compose: inner party structure mismatch");
  std::vector<CMatrix> ops;
  ops.reserve(first.kraus.size() * second.kraus.size());
  for (const CMatrix& b : second.kraus)
    for (const CMatrix& a : first.kraus) ops.push_back(b * a);
  return KrausMap(std::move(ops), first.party_dims_in, second.party_dims_out);
}

/// (A (x) B) with all Kraus cross-products; party lists concatenate.
inline KrausMap tensor_map(const KrausMap& a, const KrausMap& b) {
  std::vector<std::size_t> din = a.party_dims_in;
  din.insert(din.end(), b.party_dims_in.begin(), b.party_dims_in.end());
  std::vector<std::size_t> dout = a.party_dims_out;
  dout.insert(dout.end(), b.party_dims_out.begin(), b.party_dims_out.end());
  std::vector<CMatrix> ops;
  ops.reserve(a.kraus.size() * b.kraus.size());
  for (const CMatrix& ka : a.kraus)
    for (const CMatrix& kb : b.kraus) ops.push_back(tensor(ka, kb));
  return KrausMap(std::move(ops), std::move(din), std::move(dout));
}

/// lambda * map at the CP level: Kraus scaled by sqrt(lambda).
/// lambda = 0 collapses to the zero map.
inline KrausMap scale_map(const KrausMap& m, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("scale_map: negative weight");
  if (lambda == 0.0) return zero_map(m.party_dims_in, m.party_dims_out);
  const double root = std::sqrt(lambda);
  std::vector<CMatrix> ops = m.kraus;
  for (CMatrix& k : ops) k *= root;
  return KrausMap(std::move(ops), m.party_dims_in, m.party_dims_out);
}

/// CP-map addition: Kraus lists concatenate.
inline KrausMap map_sum(const KrausMap& a, const KrausMap& b) {
  if (a.party_dims_in != b.party_dims_in ||
      a.party_dims_out != b.party_dims_out)
    throw std::invalid_argument("map_sum: party structure mismatch");
  std::vector<CMatrix> ops = a.kraus;
  ops.insert(ops.end(), b.kraus.begin(), b.kraus.end());
  return KrausMap(std::move(ops), a.party_dims_in, a.party_dims_out);
}

}  // namespace locc
