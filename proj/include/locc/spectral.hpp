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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "locc/matrix.hpp"

namespace locc {

/// Eigenvalues descending; vectors.col(i) is the unit eigenvector of values[i].
struct EigResult {
  std::vector<double> values;
  CMatrix vectors;
};

/// Cyclic Jacobi diagonalization for Hermitian matrices. Dependency-free and
/// accurate to machine precision at the dimensions used here (<= 64).
inline EigResult hermitian_eig(const CMatrix& a, double herm_tol = 1e-9) {
  if (!a.is_square()) throw std::invalid_argument("hermitian_eig: non-square");
  const std::size_t n = a.rows();
  if (!a.is_hermitian(herm_tol * std::max(1.0, a.max_abs())))
    throw std::invalid_argument("hermitian_eig: matrix is not Hermitian");

  // Work on the symmetrized copy so tiny anti-Hermitian noise cannot bias.
  CMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  CMatrix v = CMatrix::identity(n);

  const double scale = std::max(1.0, h.max_abs());
  const double stop = 1e-15 * scale;
  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(h(p, q)));
    if (off <= stop) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const complex hpq = h(p, q);
        const double ah = std::abs(hpq);
        if (ah <= stop * 1e-2) continue;
        const complex phase = hpq / ah;
        const double tau = (h(q, q).real() - h(p, p).real()) / (2.0 * ah);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const complex s = t * c * phase;
        // h <- G^dagger h G with G = [[c, s], [-conj(s), c]] on rows/cols p,q.
        for (std::size_t k = 0; k < n; ++k) {
          const complex hkp = h(k, p), hkq = h(k, q);
          h(k, p) = c * hkp - std::conj(s) * hkq;
          h(k, q) = s * hkp + c * hkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const complex hpk = h(p, k), hqk = h(q, k);
          h(p, k) = c * hpk - s * hqk;
          h(q, k) = std::conj(s) * hpk + c * hqk;
        }
        h(p, q) = 0.0;
        h(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - std::conj(s) * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
    return h(i, i).real() > h(j, j).real();
  });
  EigResult r;
  r.values.resize(n);
  r.vectors = CMatrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    r.values[c] = h(idx[c], idx[c]).real();
    for (std::size_t k = 0; k < n; ++k) r.vectors(k, c) = v(k, idx[c]);
  }
  return r;
}

/// Singular values descending, computed from the Hermitian eigenproblem of
/// m^dagger m with a guarded square root.
inline std::vector<double> singular_values(const CMatrix& m) {
  const CMatrix g = m.adjoint() * m;
  EigResult e = hermitian_eig(g);
  std::vector<double> s(e.values.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    s[i] = std::sqrt(std::max(0.0, e.values[i]));
  return s;
}

inline double trace_norm(const CMatrix& m) {
  const auto s = singular_values(m);
  double t = 0.0;
  for (double x : s) t += x;
  return t;
}

/// Hermitian PSD square root. Eigenvalues below -tol*scale are an error;
/// small negative noise is clamped to zero.
inline CMatrix psd_sqrt(const CMatrix& h, double tol = 1e-9) {
  EigResult e = hermitian_eig(h);
  const std::size_t n = h.rows();
  const double scale = std::max(1.0, h.max_abs());
  CMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (e.values[k] < -tol * scale)
      throw std::invalid_argument("psd_sqrt: matrix is not PSD");
    const double s = std::sqrt(std::max(0.0, e.values[k]));
    if (s == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += s * e.vectors(i, k) * std::conj(e.vectors(j, k));
  }
  return out;
}

/// Extend the orthonormal columns of `partial` (rows x k) with further
/// orthonormal columns up to `target` columns, by twice-orthogonalized
/// Gram-Schmidt over the canonical basis.
inline CMatrix complete_orthonormal_columns(const CMatrix& partial,
                                            std::size_t target) {
  const std::size_t rows = partial.rows();
  if (target > rows)
    throw std::invalid_argument("complete_orthonormal_columns: target > rows");
  std::vector<std::vector<complex>> cols;
  for (std::size_t c = 0; c < partial.cols(); ++c) {
    std::vector<complex> col(rows);
    for (std::size_t i = 0; i < rows; ++i) col[i] = partial(i, c);
    cols.push_back(std::move(col));
  }
  for (std::size_t cand = 0; cand < rows && cols.size() < target; ++cand) {
    std::vector<complex> w(rows, 0.0);
    w[cand] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : cols) {
        complex overlap = 0.0;
        for (std::size_t i = 0; i < rows; ++i) overlap += std::conj(u[i]) * w[i];
        for (std::size_t i = 0; i < rows; ++i) w[i] -= overlap * u[i];
      }
    }
    double nrm = 0.0;
    for (const auto& x : w) nrm += std::norm(x);
    nrm = std::sqrt(nrm);
    if (nrm < 0.5) continue;  // candidate already spanned
    for (auto& x : w) x /= nrm;
    cols.push_back(std::move(w));
  }
  if (cols.size() < target)
    throw std::runtime_error("complete_orthonormal_columns: completion failed");
  CMatrix out(rows, target);
  for (std::size_t c = 0; c < target; ++c)
    for (std::size_t i = 0; i < rows; ++i) out(i, c) = cols[c][i];
  return out;
}

/// Polar decomposition m = isometry * psd for rows >= cols. The isometry is
/// completed arbitrarily on the kernel of the PSD part, so isometry^dagger *
/// isometry = I holds even for rank-deficient m.
struct PolarResult {
  CMatrix isometry;  // rows x cols, orthonormal columns
  CMatrix psd;       // cols x cols, Hermitian PSD
};

inline PolarResult polar_decompose(const CMatrix& m, double tol = 1e-9) {
  (void)tol;
  if (m.rows() < m.cols())
    throw std::invalid_argument("polar_decompose: requires rows >= cols");
  const std::size_t c = m.cols();
  const CMatrix g = m.adjoint() * m;
  EigResult e = hermitian_eig(g);
  const double smax =
      std::sqrt(std::max(0.0, e.values.empty() ? 0.0 : e.values.front()));
  // Singular values at or below the noise floor of the squared formulation
  // are exact zeros in both factors; otherwise the kernel columns of the
  // isometry would pick up O(sqrt(eps)) garbage directions.
  const double cutoff = 3e-8 * smax;

  std::size_t rank = 0;
  while (rank < c && std::sqrt(std::max(0.0, e.values[rank])) > cutoff) ++rank;

  CMatrix a(c, c);
  for (std::size_t k = 0; k < rank; ++k) {
    const double s = std::sqrt(e.values[k]);
    for (std::size_t i = 0; i < c; ++i)
      for (std::size_t j = 0; j < c; ++j)
        a(i, j) += s * e.vectors(i, k) * std::conj(e.vectors(j, k));
  }

  // Left singular vectors on the range of m, completed on the kernel.
  CMatrix u_range(m.rows(), rank);
  for (std::size_t k = 0; k < rank; ++k) {
    double nrm = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      complex acc = 0.0;
      for (std::size_t j = 0; j < c; ++j) acc += m(i, j) * e.vectors(j, k);
      u_range(i, k) = acc;
      nrm += std::norm(acc);
    }
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < m.rows(); ++i) u_range(i, k) /= nrm;
  }
  const CMatrix u_full = complete_orthonormal_columns(u_range, c);
  PolarResult r;
  r.isometry = u_full * e.vectors.adjoint();
  r.psd = a;
  return r;
}

/// One term of an operator Schmidt decomposition m = sum_k coeff_k L_k (x) R_k
/// with coeff > 0 and Frobenius-orthonormal factors.
struct SchmidtTerm {
  double coeff;
  CMatrix left;   // da x da
  CMatrix right;  // db x db
};

/// Operator Schmidt decomposition across the (da, db) bipartition via the
/// realignment map. Terms with coefficient <= tol * max_coeff are dropped.
/// The default tol sits above sqrt(eps): coefficients come from the squared
/// eigenproblem, so anything below ~1e-8 relative is numerical zero.
inline std::vector<SchmidtTerm> operator_schmidt(const CMatrix& m,
                                                 std::size_t da, std::size_t db,
                                                 double tol = 1e-7) {
  if (!m.is_square() || m.rows() != da * db)
    throw std::invalid_argument("operator_schmidt: shape mismatch");
  // R[(ar,ac),(br,bc)] = m[(ar,br),(ac,bc)]
  CMatrix r(da * da, db * db);
  for (std::size_t ar = 0; ar < da; ++ar)
    for (std::size_t ac = 0; ac < da; ++ac)
      for (std::size_t br = 0; br < db; ++br)
        for (std::size_t bc = 0; bc < db; ++bc)
          r(ar * da + ac, br * db + bc) = m(ar * db + br, ac * db + bc);

  const CMatrix g = r.adjoint() * r;
  EigResult e = hermitian_eig(g);
  std::vector<SchmidtTerm> terms;
  const double smax = std::sqrt(std::max(0.0, e.values.empty() ? 0.0 : e.values[0]));
  for (std::size_t k = 0; k < e.values.size(); ++k) {
    const double s = std::sqrt(std::max(0.0, e.values[k]));
    if (s <= tol * smax) continue;
    SchmidtTerm t;
    t.coeff = s;
    t.left = CMatrix(da, da);
    t.right = CMatrix(db, db);
    // u_k = R v_k / s ; right factor is unvec of conj(v_k).
    for (std::size_t i = 0; i < da * da; ++i) {
      complex acc = 0.0;
      for (std::size_t j = 0; j < db * db; ++j) acc += r(i, j) * e.vectors(j, k);
      t.left(i / da, i % da) = acc / s;
    }
    for (std::size_t j = 0; j < db * db; ++j)
      t.right(j / db, j % db) = std::conj(e.vectors(j, k));
    terms.push_back(std::move(t));
  }
  return terms;
}

inline std::size_t operator_schmidt_rank(const CMatrix& m, std::size_t da,
                                         std::size_t db, double tol = 1e-7) {
  return operator_schmidt(m, da, db, tol).size();
}

}  // namespace locc
