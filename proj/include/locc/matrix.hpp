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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace locc {

using complex = std::complex<double>;

/// Dense row-major complex matrix. Dimensions in this library stay small
/// (total Hilbert space dimension <= 64), so no sparsity or blocking.
class CMatrix {
 public:
  CMatrix() = default;

  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  CMatrix(std::initializer_list<std::initializer_list<complex>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_)
        throw std::invalid_argument("CMatrix: ragged initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static CMatrix zero(std::size_t rows, std::size_t cols) {
    return CMatrix(rows, cols);
  }

  static CMatrix identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  /// Column vector from amplitudes.
  static CMatrix column(const std::vector<complex>& v) {
    CMatrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return data_.empty(); }

  complex& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const complex& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  const std::vector<complex>& data() const { return data_; }
  std::vector<complex>& data() { return data_; }

  CMatrix& operator+=(const CMatrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }

  CMatrix& operator-=(const CMatrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }

  CMatrix& operator*=(complex s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, complex s) { return a *= s; }
  friend CMatrix operator*(complex s, CMatrix a) { return a *= s; }

  friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols_ != b.rows_)
      throw std::invalid_argument("CMatrix: product shape mismatch");
    CMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const complex aik = a(i, k);
        if (aik == complex{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  CMatrix adjoint() const {
    CMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
  }

  CMatrix transpose() const {
    CMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  CMatrix conjugate() const {
    CMatrix m(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k)
      m.data_[k] = std::conj(data_[k]);
    return m;
  }

  complex trace() const {
    if (!is_square()) throw std::invalid_argument("CMatrix: trace of non-square");
    complex t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  bool approx_equal(const CMatrix& o, double tol) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (std::size_t k = 0; k < data_.size(); ++k)
      if (std::abs(data_[k] - o.data_[k]) > tol) return false;
    return true;
  }

  bool is_hermitian(double tol) const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i; j < cols_; ++j)
        if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol)
          return false;
    return true;
  }

 private:
  void require_same_shape(const CMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("CMatrix: shape mismatch");
  }

  std::size_t rows_ = 0, cols_ = 0;
  std::vector<complex> data_;
};

inline std::size_t product(const std::vector<std::size_t>& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                         std::multiplies<>());
}

inline CMatrix tensor(const CMatrix& a, const CMatrix& b) {
  CMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const complex aij = a(i, j);
      if (aij == complex{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return c;
}

inline CMatrix tensor(const std::vector<CMatrix>& factors) {
  if (factors.empty()) return CMatrix::identity(1);
  CMatrix c = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) c = tensor(c, factors[k]);
  return c;
}

namespace detail {

// Mixed-radix decode of a flat index into per-subsystem digits.
// Subsystem 0 is the leftmost tensor factor (most significant digit).
inline void decode_index(std::size_t idx, const std::vector<std::size_t>& dims,
                         std::vector<std::size_t>& digits) {
  digits.resize(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    digits[k] = idx % dims[k];
    idx /= dims[k];
  }
}

inline std::size_t encode_index(const std::vector<std::size_t>& digits,
                                const std::vector<std::size_t>& dims) {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) idx = idx * dims[k] + digits[k];
  return idx;
}

inline void require_dims(const CMatrix& m, const std::vector<std::size_t>& dims) {
  if (!m.is_square() || m.rows() != product(dims))
    throw std::invalid_argument("subsystem dims do not match matrix shape");
}

}  // namespace detail

/// Trace out every subsystem not listed in `keep`; kept subsystems preserve
/// their original relative order.
inline CMatrix partial_trace(const CMatrix& m,
                             const std::vector<std::size_t>& dims,
                             const std::vector<std::size_t>& keep) {
  detail::require_dims(m, dims);
  std::vector<bool> kept(dims.size(), false);
  for (auto k : keep) {
    if (k >= dims.size())
      throw std::invalid_argument("partial_trace: subsystem index out of range");
    if (kept[k]) throw std::invalid_argument("partial_trace: duplicate index");
    kept[k] = true;
  }
  std::vector<std::size_t> keep_sorted, keep_dims, rest, rest_dims;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (kept[k]) {
      keep_sorted.push_back(k);
      keep_dims.push_back(dims[k]);
    } else {
      rest.push_back(k);
      rest_dims.push_back(dims[k]);
    }
  }
  const std::size_t dk = product(keep_dims), dr = product(rest_dims);
  CMatrix out(dk, dk);
  std::vector<std::size_t> ra, ka, kb, full_a(dims.size()), full_b(dims.size());
  for (std::size_t r = 0; r < dr; ++r) {
    detail::decode_index(r, rest_dims, ra);
    for (std::size_t a = 0; a < dk; ++a) {
      detail::decode_index(a, keep_dims, ka);
      for (std::size_t b = 0; b < dk; ++b) {
        detail::decode_index(b, keep_dims, kb);
        for (std::size_t t = 0; t < rest.size(); ++t) {
          full_a[rest[t]] = ra[t];
          full_b[rest[t]] = ra[t];
        }
        for (std::size_t t = 0; t < keep_sorted.size(); ++t) {
          full_a[keep_sorted[t]] = ka[t];
          full_b[keep_sorted[t]] = kb[t];
        }
        out(a, b) += m(detail::encode_index(full_a, dims),
                       detail::encode_index(full_b, dims));
      }
    }
  }
  return out;
}

/// Transpose the listed subsystems in place, leaving the rest untouched.
inline CMatrix partial_transpose(const CMatrix& m,
                                 const std::vector<std::size_t>& dims,
                                 const std::vector<std::size_t>& transposed) {
  detail::require_dims(m, dims);
  std::vector<bool> flip(dims.size(), false);
  for (auto k : transposed) {
    if (k >= dims.size())
      throw std::invalid_argument(
          "partial_transpose: subsystem index out of range");
    flip[k] = true;
  }
  const std::size_t d = m.rows();
  CMatrix out(d, d);
  std::vector<std::size_t> ia, ib;
  for (std::size_t a = 0; a < d; ++a) {
    detail::decode_index(a, dims, ia);
    for (std::size_t b = 0; b < d; ++b) {
      detail::decode_index(b, dims, ib);
      std::vector<std::size_t> na = ia, nb = ib;
      for (std::size_t k = 0; k < dims.size(); ++k)
        if (flip[k]) std::swap(na[k], nb[k]);
      out(detail::encode_index(na, dims), detail::encode_index(nb, dims)) =
          m(a, b);
    }
  }
  return out;
}

/// Reorder subsystems: `order[k]` names the original subsystem that ends up
/// in slot k of the result.
inline CMatrix permute_subsystems(const CMatrix& m,
                                  const std::vector<std::size_t>& dims,
                                  const std::vector<std::size_t>& order) {
  detail::require_dims(m, dims);
  if (order.size() != dims.size())
    throw std::invalid_argument("permute_subsystems: order length mismatch");
  std::vector<bool> seen(dims.size(), false);
  std::vector<std::size_t> new_dims(dims.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (order[k] >= dims.size() || seen[order[k]])
      throw std::invalid_argument("permute_subsystems: invalid permutation");
    seen[order[k]] = true;
    new_dims[k] = dims[order[k]];
  }
  const std::size_t d = m.rows();
  CMatrix out(d, d);
  std::vector<std::size_t> ia, ib, na(dims.size()), nb(dims.size());
  for (std::size_t a = 0; a < d; ++a) {
    detail::decode_index(a, dims, ia);
    for (std::size_t b = 0; b < d; ++b) {
      detail::decode_index(b, dims, ib);
      for (std::size_t k = 0; k < dims.size(); ++k) {
        na[k] = ia[order[k]];
        nb[k] = ib[order[k]];
      }
      out(detail::encode_index(na, new_dims),
          detail::encode_index(nb, new_dims)) = m(a, b);
    }
  }
  return out;
}

}  // namespace locc
