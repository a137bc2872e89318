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

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "locc/kraus.hpp"
#include "locc/matrix.hpp"

namespace locc {

/// Choi matrix of a CP map under the unnormalized convention
/// Phi = sum_{w,x} |ww><xx| (trace d), so a trace-preserving map's Choi has
/// trace dim_in. Subsystems are interleaved per party:
/// [in_1, out_1, in_2, out_2, ...], input copy first within each pair.
struct ChoiMatrix {
  CMatrix matrix;
  std::vector<std::size_t> party_dims_in;
  std::vector<std::size_t> party_dims_out;

  std::vector<std::size_t> interleaved_dims() const {
    std::vector<std::size_t> dims;
    dims.reserve(2 * party_dims_in.size());
    for (std::size_t k = 0; k < party_dims_in.size(); ++k) {
      dims.push_back(party_dims_in[k]);
      dims.push_back(party_dims_out[k]);
    }
    return dims;
  }
};

/// Unnormalized maximally entangled operator sum_{w,x} |ww><xx| on d (x) d.
inline CMatrix maximally_entangled(std::size_t d) {
  CMatrix phi(d * d, d * d);
  for (std::size_t w = 0; w < d; ++w)
    for (std::size_t x = 0; x < d; ++x) phi(w * d + w, x * d + x) = 1.0;
  return phi;
}

/// Choi matrix of m: one rank-1 term per Kraus operator, then the flat
/// [all-inputs, all-outputs] ordering is permuted to per-party interleaving.
inline ChoiMatrix choi_of_map(const KrausMap& m) {
  check_kraus_shapes(m);
  const std::size_t din = m.dim_in();
  const std::size_t dout = m.dim_out();
  CMatrix c(din * dout, din * dout);
  for (const CMatrix& k : m.kraus) {
    // v[(a,i)] = K(i,a): vectorization of the input-indexed columns.
    std::vector<complex> v(din * dout);
    for (std::size_t a = 0; a < din; ++a)
      for (std::size_t i = 0; i < dout; ++i) v[a * dout + i] = k(i, a);
    for (std::size_t p = 0; p < v.size(); ++p) {
      if (v[p] == complex(0.0)) continue;
      for (std::size_t q = 0; q < v.size(); ++q)
        c(p, q) += v[p] * std::conj(v[q]);
    }
  }
  const std::size_t n = m.party_count();
  std::vector<std::size_t> flat_dims = m.party_dims_in;
  flat_dims.insert(flat_dims.end(), m.party_dims_out.begin(),
                   m.party_dims_out.end());
  std::vector<std::size_t> order(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    order[2 * k] = k;
    order[2 * k + 1] = n + k;
  }
  ChoiMatrix out;
  out.matrix = permute_subsystems(c, flat_dims, order);
  out.party_dims_in = m.party_dims_in;
  out.party_dims_out = m.party_dims_out;
  return out;
}

}  // namespace locc
