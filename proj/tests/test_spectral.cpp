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

#include <catch2/catch_amalgamated.hpp>

#include "locc/spectral.hpp"
#include "test_helpers.hpp"

using locc::CMatrix;
using locc::complex;

TEST_CASE("hermitian eigensolver on fixed matrices", "[spectral]") {
  SECTION("diagonal") {
    auto e = locc::hermitian_eig(CMatrix{{2, 0}, {0, 1}});
    REQUIRE(e.values[0] == Catch::Approx(2.0).margin(1e-14));
    REQUIRE(e.values[1] == Catch::Approx(1.0).margin(1e-14));
  }
  SECTION("bit flip") {
    auto e = locc::hermitian_eig(CMatrix{{0, 1}, {1, 0}});
    REQUIRE(e.values[0] == Catch::Approx(1.0).margin(1e-14));
    REQUIRE(e.values[1] == Catch::Approx(-1.0).margin(1e-14));
  }
  SECTION("two-outcome branch state: central block characteristic polynomial") {
    CMatrix om{{0, 0, 0, 0},
               {0, 1.0 / 3, 4.0 / 9, 0},
               {0, 4.0 / 9, 2.0 / 3, 0},
               {0, 0, 0, 0}};
    // Central 2x2 block has trace 1 and determinant 2/81, so the nonzero
    // eigenvalues are (1 +- sqrt(1 - 8/81)) / 2.
    const double disc = std::sqrt(1.0 - 8.0 / 81.0);
    auto e = locc::hermitian_eig(om);
    REQUIRE(e.values[0] == Catch::Approx((1.0 + disc) / 2).margin(1e-12));
    REQUIRE(e.values[1] == Catch::Approx((1.0 - disc) / 2).margin(1e-12));
    REQUIRE(e.values[0] == Catch::Approx(0.9746669).margin(1e-7));
    REQUIRE(e.values[1] == Catch::Approx(0.0253331).margin(1e-7));
    REQUIRE(e.values[2] == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(e.values[3] == Catch::Approx(0.0).margin(1e-12));
  }
  SECTION("non-Hermitian input is rejected") {
    REQUIRE_THROWS_AS(locc::hermitian_eig(CMatrix{{0, 1}, {2, 0}}),
                      std::invalid_argument);
  }
}

TEST_CASE("hermitian eigensolver reconstructs random matrices", "[spectral]") {
  std::mt19937_64 rng(42);
  const std::size_t n = GENERATE(std::size_t(2), std::size_t(5), std::size_t(16),
                                 std::size_t(33));
  auto h = locc_test::random_hermitian(rng, n);
  auto e = locc::hermitian_eig(h);
  // residual ||H V - V diag(lambda)|| per entry
  CMatrix lam(n, n);
  for (std::size_t i = 0; i < n; ++i) lam(i, i) = e.values[i];
  CMatrix resid = h * e.vectors - e.vectors * lam;
  REQUIRE(resid.max_abs() < 1e-10);
  // orthonormality
  CMatrix gram = e.vectors.adjoint() * e.vectors;
  REQUIRE(gram.approx_equal(CMatrix::identity(n), 1e-12));
  // descending order
  for (std::size_t i = 1; i < n; ++i) REQUIRE(e.values[i - 1] >= e.values[i] - 1e-12);
}

TEST_CASE("singular values and trace norm", "[spectral]") {
  SECTION("known values") {
    REQUIRE(locc::trace_norm(CMatrix{{1, 0}, {0, -3}}) ==
            Catch::Approx(4.0).margin(1e-12));
    // rank-1 rectangular
    CMatrix v{{1}, {2}, {2}};
    REQUIRE(locc::trace_norm(v) == Catch::Approx(3.0).margin(1e-12));
  }
  SECTION("trace norm of Hermitian equals sum of absolute eigenvalues") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 10; ++rep) {
      auto h = locc_test::random_hermitian(rng, 9);
      auto e = locc::hermitian_eig(h);
      double s = 0.0;
      for (double x : e.values) s += std::abs(x);
      REQUIRE(locc::trace_norm(h) == Catch::Approx(s).margin(1e-9));
    }
  }
  SECTION("unitary invariance") {
    std::mt19937_64 rng(17);
    auto m = locc_test::random_matrix(rng, 6, 6);
    auto u = locc_test::random_unitary(rng, 6);
    REQUIRE(locc::trace_norm(u * m) ==
            Catch::Approx(locc::trace_norm(m)).margin(1e-9));
  }
}

TEST_CASE("psd sqrt", "[spectral]") {
  std::mt19937_64 rng(23);
  auto g = locc_test::random_matrix(rng, 7, 7);
  CMatrix p = g * g.adjoint();
  CMatrix r = locc::psd_sqrt(p);
  REQUIRE((r * r).approx_equal(p, 1e-9 * std::max(1.0, p.max_abs())));
  REQUIRE(r.is_hermitian(1e-11));
  REQUIRE_THROWS_AS(locc::psd_sqrt(CMatrix{{-1, 0}, {0, 1}}),
                    std::invalid_argument);
}

TEST_CASE("polar decomposition", "[spectral]") {
  SECTION("rank-deficient weak-outcome operator at strength 0.25") {
    CMatrix m{{0.5, 0}, {0, 0}};
    auto p = locc::polar_decompose(m);
    REQUIRE(p.psd.approx_equal(CMatrix{{0.5, 0}, {0, 0}}, 1e-12));
    REQUIRE((p.isometry * p.psd).approx_equal(m, 1e-12));
    REQUIRE((p.isometry.adjoint() * p.isometry)
                .approx_equal(CMatrix::identity(2), 1e-12));
  }
  SECTION("random square and tall matrices reconstruct") {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 20; ++rep) {
      std::size_t c = 2 + rep % 4;
      std::size_t r = c + (rep % 3);
      auto m = locc_test::random_matrix(rng, r, c);
      auto p = locc::polar_decompose(m);
      REQUIRE((p.isometry * p.psd).approx_equal(m, 1e-10));
      REQUIRE((p.isometry.adjoint() * p.isometry)
                  .approx_equal(CMatrix::identity(c), 1e-10));
      auto e = locc::hermitian_eig(p.psd);
      REQUIRE(e.values.back() > -1e-10);
    }
  }
  SECTION("identity stays identity exactly") {
    auto p = locc::polar_decompose(CMatrix::identity(4));
    REQUIRE(p.psd.approx_equal(CMatrix::identity(4), 1e-14));
    REQUIRE(p.isometry.approx_equal(CMatrix::identity(4), 1e-14));
  }
  SECTION("wide input rejected") {
    REQUIRE_THROWS_AS(locc::polar_decompose(CMatrix(2, 3)),
                      std::invalid_argument);
  }
}

TEST_CASE("operator Schmidt decomposition", "[spectral]") {
  SECTION("product operator has rank 1") {
    std::mt19937_64 rng(37);
    auto a = locc_test::random_matrix(rng, 2, 2);
    auto b = locc_test::random_matrix(rng, 3, 3);
    auto terms = locc::operator_schmidt(locc::tensor(a, b), 2, 3);
    REQUIRE(terms.size() == 1);
    // coefficient carries both Frobenius norms
    REQUIRE(terms[0].coeff ==
            Catch::Approx(a.frobenius_norm() * b.frobenius_norm()).margin(1e-9));
  }
  SECTION("swap operator has rank 4") {
    CMatrix swap(4, 4);
    swap(0, 0) = swap(3, 3) = 1.0;
    swap(1, 2) = swap(2, 1) = 1.0;
    REQUIRE(locc::operator_schmidt_rank(swap, 2, 2) == 4);
  }
  SECTION("terms reconstruct the operator") {
    std::mt19937_64 rng(41);
    auto m = locc_test::random_matrix(rng, 6, 6);
    auto terms = locc::operator_schmidt(m, 2, 3, 1e-13);
    CMatrix rebuilt(6, 6);
    for (const auto& t : terms)
      rebuilt += locc::complex(t.coeff) * locc::tensor(t.left, t.right);
    REQUIRE(rebuilt.approx_equal(m, 1e-8));
  }
}
