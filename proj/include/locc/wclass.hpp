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
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "locc/matrix.hpp"
#include "locc/spectral.hpp"

namespace locc {

/// Representative vector of a three-qubit state in the tier of states
/// sqrt(x0)|000> + sqrt(xa)|100> + sqrt(xb)|010> + sqrt(xc)|001> up to local
/// unitaries. Components are nonnegative with xa + xb + xc <= 1; the |000>
/// weight is derived. Parties are indexed 0 (A), 1 (B), 2 (C).
struct WClassVector {
  double xa = 0.0;
  double xb = 0.0;
  double xc = 0.0;

  double x0() const { return 1.0 - xa - xb - xc; }
  double component(std::size_t party) const {
    switch (party) {
      case 0: return xa;
      case 1: return xb;
      case 2: return xc;
      default: throw std::out_of_range("WClassVector: party index");
    }
  }
};

/// Canonical form: with two or more zero components the state is separable
/// and maps to (1,0,0); with exactly one zero the entangled pair is brought
/// to Schmidt form (the alphabetically first entangled party takes the
/// larger coefficient and the |000> weight is absorbed); otherwise the
/// vector is already unambiguous.
inline WClassVector canonical_xvec(double xa, double xb, double xc,
                                   double tol = 1e-9) {
  double v[3] = {xa, xb, xc};
  for (double& c : v) {
    if (c < -tol) throw std::invalid_argument("canonical_xvec: negative");
    if (c <= tol) c = 0.0;
  }
  if (v[0] + v[1] + v[2] > 1.0 + tol)
    throw std::invalid_argument("canonical_xvec: components exceed 1");
  const int zeros = (v[0] == 0.0) + (v[1] == 0.0) + (v[2] == 0.0);
  if (zeros >= 2) return WClassVector{1.0, 0.0, 0.0};
  if (zeros == 1) {
    std::size_t p = 0, q = 0;
    if (v[0] == 0.0) { p = 1; q = 2; }
    else if (v[1] == 0.0) { p = 0; q = 2; }
    else { p = 0; q = 1; }
    // Schmidt pair of the entangled two-qubit factor; its determinant
    // x_p x_q is insensitive to the |000> weight.
    const double prod = v[p] * v[q];
    const double disc = std::sqrt(std::max(0.0, 1.0 - 4.0 * prod));
    double out[3] = {0.0, 0.0, 0.0};
    out[p] = (1.0 + disc) / 2.0;
    out[q] = 1.0 - out[p];
    return WClassVector{out[0], out[1], out[2]};
  }
  return WClassVector{v[0], v[1], v[2]};
}

/// Three-tangle of a pure three-qubit state (8x1 column), via the degree-4
/// polynomial invariant; 0 exactly on the representable tier, 1 on the
/// maximally entangled |000>+|111> state.
inline double three_tangle(const CMatrix& psi) {
  if (psi.rows() != 8 || psi.cols() != 1)
    throw std::invalid_argument("three_tangle: expected an 8x1 column");
  const auto a = [&](int i, int j, int k) { return psi(4 * i + 2 * j + k, 0); };
  const complex d1 = a(0, 0, 0) * a(0, 0, 0) * a(1, 1, 1) * a(1, 1, 1) +
                     a(0, 0, 1) * a(0, 0, 1) * a(1, 1, 0) * a(1, 1, 0) +
                     a(0, 1, 0) * a(0, 1, 0) * a(1, 0, 1) * a(1, 0, 1) +
                     a(1, 0, 0) * a(1, 0, 0) * a(0, 1, 1) * a(0, 1, 1);
  const complex d2 = a(0, 0, 0) * a(1, 1, 1) * a(0, 1, 1) * a(1, 0, 0) +
                     a(0, 0, 0) * a(1, 1, 1) * a(1, 0, 1) * a(0, 1, 0) +
                     a(0, 0, 0) * a(1, 1, 1) * a(1, 1, 0) * a(0, 0, 1) +
                     a(0, 1, 1) * a(1, 0, 0) * a(1, 0, 1) * a(0, 1, 0) +
                     a(0, 1, 1) * a(1, 0, 0) * a(1, 1, 0) * a(0, 0, 1) +
                     a(1, 0, 1) * a(0, 1, 0) * a(1, 1, 0) * a(0, 0, 1);
  const complex d3 = a(0, 0, 0) * a(1, 1, 0) * a(1, 0, 1) * a(0, 1, 1) +
                     a(1, 1, 1) * a(0, 0, 1) * a(0, 1, 0) * a(1, 0, 0);
  return 4.0 * std::abs(d1 - 2.0 * d2 + 4.0 * d3);
}

/// Two-qubit mixed-state concurrence from the spin-flipped spectrum.
/// The flip spectrum is computed rank-aware: sqrt(rho) is assembled from the
/// numerically nonzero eigenvalues only, and only rank(rho) flip eigenvalues
/// can be nonzero, so the remainder is set to exact zero instead of feeding
/// eigensolver noise through a square root.
inline double wootters_concurrence(const CMatrix& rho, double tol = 1e-9) {
  if (!rho.is_square() || rho.rows() != 4)
    throw std::invalid_argument("wootters_concurrence: expected 4x4");
  if (!rho.is_hermitian(tol))
    throw std::invalid_argument("wootters_concurrence: not Hermitian");
  if (std::abs(rho.trace() - complex(1.0)) > tol)
    throw std::invalid_argument("wootters_concurrence: trace != 1");

  const EigResult er = hermitian_eig(rho);
  if (er.values.back() < -tol)
    throw std::invalid_argument("wootters_concurrence: not PSD");
  const double lam_max = std::max(0.0, er.values.front());
  std::size_t rank = 0;
  while (rank < 4 && er.values[rank] > lam_max * 1e-12) ++rank;
  CMatrix root(4, 4);
  for (std::size_t k = 0; k < rank; ++k) {
    const double s = std::sqrt(er.values[k]);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        root(i, j) += s * er.vectors(i, k) * std::conj(er.vectors(j, k));
  }

  // Spin flip: (sy (x) sy) conj(rho) (sy (x) sy); entrywise that is a signed
  // anti-transpose, built directly.
  CMatrix yy(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const CMatrix flipped = yy * rho.conjugate() * yy;
  const CMatrix r = root * flipped * root;
  const EigResult fr = hermitian_eig(r);
  double c = 0.0;
  for (std::size_t k = 0; k < rank; ++k) {
    const double lam = std::sqrt(std::max(0.0, fr.values[k]));
    c += (k == 0) ? lam : -lam;
  }
  return std::max(0.0, c);
}

/// Recovers the canonical representative of a pure three-qubit state from
/// its local-unitary invariants (three-tangle and pairwise concurrences).
/// Throws when the state is not in the representable tier.
inline WClassVector canonical_xvec(const CMatrix& psi, double tol = 1e-9) {
  if (psi.rows() != 8 || psi.cols() != 1)
    throw std::invalid_argument("canonical_xvec: expected an 8x1 column");
  double norm2 = 0.0;
  for (std::size_t i = 0; i < 8; ++i) norm2 += std::norm(psi(i, 0));
  if (std::abs(norm2 - 1.0) > tol)
    throw std::invalid_argument("canonical_xvec: state not normalized");
  if (three_tangle(psi) > std::max(tol, 1e-8))
    throw std::invalid_argument(
        "canonical_xvec: nonzero three-tangle, state outside the tier");

  const CMatrix rho = psi * psi.adjoint();
  const std::vector<std::size_t> dims = {2, 2, 2};
  const double cab = wootters_concurrence(partial_trace(rho, dims, {0, 1}));
  const double cac = wootters_concurrence(partial_trace(rho, dims, {0, 2}));
  const double cbc = wootters_concurrence(partial_trace(rho, dims, {1, 2}));
  const double conc_tol = 1e-7;
  double p[3] = {cab * cab / 4.0, cac * cac / 4.0, cbc * cbc / 4.0};
  for (double& v : p)
    if (v < conc_tol * conc_tol) v = 0.0;
  const int nonzero = (p[0] > 0.0) + (p[1] > 0.0) + (p[2] > 0.0);

  if (nonzero == 3) {
    const double xa = std::sqrt(p[0] * p[1] / p[2]);
    const double xb = std::sqrt(p[0] * p[2] / p[1]);
    const double xc = std::sqrt(p[1] * p[2] / p[0]);
    if (xa + xb + xc > 1.0 + 1e-6)
      throw std::invalid_argument(
          "canonical_xvec: inconsistent invariants, state outside the tier");
    return canonical_xvec(xa, xb, xc, tol);
  }
  if (nonzero == 1) {
    // One entangled pair, third qubit in a product: Schmidt form directly.
    std::size_t first = 0, second = 0;
    double prod = 0.0;
    if (p[0] > 0.0) { first = 0; second = 1; prod = p[0]; }
    if (p[1] > 0.0) { first = 0; second = 2; prod = p[1]; }
    if (p[2] > 0.0) { first = 1; second = 2; prod = p[2]; }
    const double disc = std::sqrt(std::max(0.0, 1.0 - 4.0 * prod));
    double out[3] = {0.0, 0.0, 0.0};
    out[first] = (1.0 + disc) / 2.0;
    out[second] = 1.0 - out[first];
    return WClassVector{out[0], out[1], out[2]};
  }
  if (nonzero == 0) return WClassVector{1.0, 0.0, 0.0};
  throw std::invalid_argument(
      "canonical_xvec: inconsistent pairwise invariants");
}

/// The tripartite monotone: with n1/n2 the larger/smaller of the two
/// non-star components, C = 2 sqrt(x* xn1) + (2/3) xn2 sqrt(x*/xn1), with an
/// explicit 0 branch when either x* or xn1 vanishes.
inline double monotone_C(const WClassVector& x, std::size_t star) {
  const double xs = x.component(star);
  double others[2];
  std::size_t idx = 0;
  for (std::size_t k = 0; k < 3; ++k)
    if (k != star) others[idx++] = x.component(k);
  const double n1 = std::max(others[0], others[1]);
  const double n2 = std::min(others[0], others[1]);
  if (xs <= 0.0 || n1 <= 0.0) return 0.0;
  return 2.0 * std::sqrt(xs * n1) + (2.0 / 3.0) * n2 * std::sqrt(xs / n1);
}

/// Local binary measurement in triangular Kraus form
/// M_lambda = U_lambda [[sqrt(a), b], [0, sqrt(c)]] on one party.
/// The unitaries U_lambda never enter the x-vector calculus.
struct BinaryMeasurement {
  std::size_t party = 0;
  double a[2] = {0.0, 0.0};
  complex b[2] = {0.0, 0.0};
  double c[2] = {0.0, 0.0};
};

/// Fills in the second outcome from completeness:
/// a2 = 1 - a1, b2 = -sqrt(a1/a2) b1, c2 = 1 - c1 - |b1|^2 - |b2|^2.
inline BinaryMeasurement complete_measurement(std::size_t party, double a1,
                                              double c1, complex b1,
                                              double tol = 1e-9) {
  if (!(a1 > 0.0 && a1 < 1.0))
    throw std::invalid_argument("complete_measurement: a1 outside (0,1)");
  if (c1 < 0.0)
    throw std::invalid_argument("complete_measurement: negative c1");
  BinaryMeasurement m;
  m.party = party;
  m.a[0] = a1;
  m.a[1] = 1.0 - a1;
  m.b[0] = b1;
  m.b[1] = -std::sqrt(a1 / m.a[1]) * b1;
  const double c2 = 1.0 - c1 - std::norm(m.b[0]) - std::norm(m.b[1]);
  if (c2 < -tol)
    throw std::invalid_argument("complete_measurement: infeasible (c2 < 0)");
  m.c[0] = c1;
  m.c[1] = std::max(0.0, c2);
  return m;
}

inline CMatrix measurement_kraus(const BinaryMeasurement& m, int lambda) {
  if (lambda < 0 || lambda > 1)
    throw std::out_of_range("measurement_kraus: outcome index");
  CMatrix k(2, 2);
  k(0, 0) = std::sqrt(m.a[lambda]);
  k(0, 1) = m.b[lambda];
  k(1, 1) = std::sqrt(m.c[lambda]);
  return k;
}

struct MeasurementOutcome {
  double probability = 0.0;
  WClassVector x;
};

/// Raw single-branch update for one triangular Kraus operator acting on
/// `party`, without canonicalization: the |000> amplitude picks up
/// sqrt(a x0) + b sqrt(x_K), the measured component scales by c, all other
/// components by a, and everything renormalizes by the branch weight.
inline MeasurementOutcome triangular_branch_update(const WClassVector& x,
                                                   std::size_t party,
                                                   double a, complex b,
                                                   double c) {
  const double xk = x.component(party);
  const double amp2 =
      std::norm(std::sqrt(std::max(0.0, a * x.x0())) +
                b * std::sqrt(std::max(0.0, xk)));
  double comps[3] = {x.xa, x.xb, x.xc};
  double p = amp2;
  for (std::size_t j = 0; j < 3; ++j) {
    comps[j] *= (j == party) ? c : a;
    p += comps[j];
  }
  MeasurementOutcome out;
  out.probability = p;
  if (p > 1e-14)
    out.x = WClassVector{comps[0] / p, comps[1] / p, comps[2] / p};
  else
    out.x = WClassVector{1.0, 0.0, 0.0};
  return out;
}

/// Both branches of a binary measurement, outputs re-canonicalized.
inline std::vector<MeasurementOutcome> apply_binary_measurement(
    const WClassVector& x, const BinaryMeasurement& m) {
  std::vector<MeasurementOutcome> outcomes;
  for (int lambda = 0; lambda < 2; ++lambda) {
    MeasurementOutcome o = triangular_branch_update(
        x, m.party, m.a[lambda], m.b[lambda], m.c[lambda]);
    o.x = canonical_xvec(o.x.xa, o.x.xb, o.x.xc, 1e-12);
    outcomes.push_back(o);
  }
  return outcomes;
}

/// Average change of the monotone under m: sum_l p_l C(x_l) - C(x).
inline double avg_delta_C(const WClassVector& x, std::size_t star,
                          const BinaryMeasurement& m) {
  double after = 0.0;
  for (const MeasurementOutcome& o : apply_binary_measurement(x, m))
    after += o.probability * monotone_C(o.x, star);
  return after - monotone_C(x, star);
}

/// Concurrence of assistance for the pair (j,k): 2 sqrt(x_j x_k).
/// Defined on the x0 = 0 slice only.
inline double coa(const WClassVector& x, std::size_t j, std::size_t k,
                  double tol = 1e-9) {
  if (j == k || j > 2 || k > 2)
    throw std::invalid_argument("coa: invalid pair");
  if (std::abs(x.x0()) > tol)
    throw std::invalid_argument("coa: defined for x0 = 0 only");
  return 2.0 * std::sqrt(std::max(0.0, x.component(j) * x.component(k)));
}

/// Optimal probability of combing all entanglement onto pairs that include
/// `common`: 2(x_j + x_k - x_j x_k / x_common) when common holds the largest
/// component, else 2 x_common. Defined on the x0 = 0 slice only.
inline double epr_combing_prob(const WClassVector& x, std::size_t common,
                               double tol = 1e-9) {
  if (common > 2) throw std::invalid_argument("epr_combing_prob: party");
  if (std::abs(x.x0()) > tol)
    throw std::invalid_argument("epr_combing_prob: defined for x0 = 0 only");
  const double xc = x.component(common);
  double others[2];
  std::size_t idx = 0;
  for (std::size_t k = 0; k < 3; ++k)
    if (k != common) others[idx++] = x.component(k);
  if (xc >= std::max(others[0], others[1]) && xc > 0.0)
    return 2.0 * (others[0] + others[1] - others[0] * others[1] / xc);
  return 2.0 * xc;
}

/// Deterministic worker seeding for the sampling suites.
inline std::mt19937_64 suite_rng(std::uint64_t base_seed,
                                 std::uint64_t worker) {
  return std::mt19937_64(base_seed + worker);
}

/// Uniform draw from the x0 = 0 simplex with a componentwise floor. The
/// floor keeps the strict-decrease suite away from the simplex boundary,
/// where the decrease guarantee degenerates (the monotone itself tends to 0).
inline WClassVector sample_canonical_x(std::mt19937_64& rng,
                                       double floor = 0.05) {
  if (floor < 0.0 || floor >= 1.0 / 3.0)
    throw std::invalid_argument("sample_canonical_x: floor outside [0,1/3)");
  std::exponential_distribution<double> exp1(1.0);
  double e[3] = {exp1(rng), exp1(rng), exp1(rng)};
  const double total = e[0] + e[1] + e[2];
  const double span = 1.0 - 3.0 * floor;
  return WClassVector{floor + span * e[0] / total,
                      floor + span * e[1] / total,
                      floor + span * e[2] / total};
}

/// Random valid binary measurement: a1, c1 ~ U(0,1); optionally a small
/// complex b1, rejecting infeasible draws.
inline BinaryMeasurement sample_measurement(std::mt19937_64& rng,
                                            std::size_t party,
                                            bool with_complex_b) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> small(-0.25, 0.25);
  for (;;) {
    const double a1 = unit(rng);
    const double c1 = unit(rng);
    if (a1 <= 0.0 || a1 >= 1.0) continue;
    complex b1 = 0.0;
    if (with_complex_b) b1 = complex(small(rng), small(rng));
    try {
      return complete_measurement(party, a1, c1, b1);
    } catch (const std::invalid_argument&) {
      continue;
    }
  }
}

}  // namespace locc
