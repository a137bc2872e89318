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

#include "locc/matrix.hpp"
#include "test_helpers.hpp"

using locc::CMatrix;
using locc::complex;

namespace {

// State produced by the two-outcome branch of the two-qubit transform of the
// three-party symmetric state, written on qubits (first, third).
CMatrix omega_state() {
  return CMatrix{{0, 0, 0, 0},
                 {0, 1.0 / 3, 4.0 / 9, 0},
                 {0, 4.0 / 9, 2.0 / 3, 0},
                 {0, 0, 0, 0}};
}

}  // namespace

TEST_CASE("matrix arithmetic basics", "[matrix]") {
  CMatrix a{{1, 2}, {3, 4}};
  CMatrix b{{0, 1}, {1, 0}};
  REQUIRE((a * b).approx_equal(CMatrix{{2, 1}, {4, 3}}, 1e-15));
  REQUIRE((a + b).approx_equal(CMatrix{{1, 3}, {4, 4}}, 1e-15));
  REQUIRE((a - b).approx_equal(CMatrix{{1, 1}, {2, 4}}, 1e-15));
  REQUIRE(a.trace() == complex(5.0));
  CMatrix c{{complex(0, 1), 0}, {0, complex(0, -1)}};
  REQUIRE(c.adjoint().approx_equal(
      CMatrix{{complex(0, -1), 0}, {0, complex(0, 1)}}, 1e-15));
  REQUIRE(c.is_hermitian(1e-12) == false);
  REQUIRE(omega_state().is_hermitian(1e-12));
}

TEST_CASE("tensor product agrees with direct index formula", "[matrix]") {
  std::mt19937_64 rng(11);
  auto a = locc_test::random_matrix(rng, 3, 2);
  auto b = locc_test::random_matrix(rng, 2, 4);
  auto t = locc::tensor(a, b);
  REQUIRE(t.rows() == 6);
  REQUIRE(t.cols() == 8);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 8; ++j)
      REQUIRE(std::abs(t(i, j) - a(i / 2, j / 4) * b(i % 2, j % 4)) < 1e-14);

  // Mixed-product rule (A (x) B)(C (x) D) = AC (x) BD.
  auto c = locc_test::random_matrix(rng, 2, 3);
  auto d = locc_test::random_matrix(rng, 4, 2);
  REQUIRE((t * locc::tensor(c, d))
              .approx_equal(locc::tensor(a * c, b * d), 1e-12));
}

TEST_CASE("partial trace on known states", "[matrix]") {
  SECTION("normalized Bell state reduces to maximally mixed") {
    CMatrix bell(4, 1);
    bell(0, 0) = 1.0 / std::sqrt(2.0);
    bell(3, 0) = 1.0 / std::sqrt(2.0);
    CMatrix rho = bell * bell.adjoint();
    CMatrix red = locc::partial_trace(rho, {2, 2}, {0});
    REQUIRE(red.approx_equal(CMatrix{{0.5, 0}, {0, 0.5}}, 1e-14));
  }
  SECTION("two-outcome branch state, direct 4x4 index sums") {
    CMatrix om = omega_state();
    // keep the leftmost qubit: entries sum over the right index
    CMatrix keep0 = locc::partial_trace(om, {2, 2}, {0});
    REQUIRE(keep0.approx_equal(CMatrix{{1.0 / 3, 0}, {0, 2.0 / 3}}, 1e-14));
    CMatrix keep1 = locc::partial_trace(om, {2, 2}, {1});
    REQUIRE(keep1.approx_equal(CMatrix{{2.0 / 3, 0}, {0, 1.0 / 3}}, 1e-14));
  }
  SECTION("trace preservation and linearity on random states") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 20; ++rep) {
      auto rho = locc_test::random_density(rng, 12);
      auto red = locc::partial_trace(rho, {2, 3, 2}, {1});
      REQUIRE(red.rows() == 3);
      REQUIRE(std::abs(red.trace() - rho.trace()) < 1e-12);
      // tracing in two stages agrees with one stage
      auto stage = locc::partial_trace(rho, {2, 3, 2}, {0, 1});
      auto two = locc::partial_trace(stage, {2, 3}, {1});
      REQUIRE(two.approx_equal(red, 1e-12));
    }
  }
  SECTION("keep order preserved for multiple kept subsystems") {
    std::mt19937_64 rng(7);
    auto a = locc_test::random_density(rng, 2);
    auto b = locc_test::random_density(rng, 3);
    auto c = locc_test::random_density(rng, 2);
    auto rho = locc::tensor(locc::tensor(a, b), c);
    auto red = locc::partial_trace(rho, {2, 3, 2}, {0, 2});
    REQUIRE(red.approx_equal(locc::tensor(a, c), 1e-12));
  }
}

TEST_CASE("partial transpose", "[matrix]") {
  SECTION("swap operator spectrum of transposed maximally entangled state") {
    // unnormalized sum_{w,x} |ww><xx|
    CMatrix phi(4, 4);
    for (int w = 0; w < 2; ++w)
      for (int x = 0; x < 2; ++x) phi(w * 2 + w, x * 2 + x) = 1.0;
    CMatrix pt = locc::partial_transpose(phi, {2, 2}, {1});
    auto eig = locc::hermitian_eig(pt);
    REQUIRE(eig.values.front() == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(eig.values.back() == Catch::Approx(-1.0).margin(1e-12));
  }
  SECTION("transposing all subsystems is the full transpose") {
    std::mt19937_64 rng(9);
    auto m = locc_test::random_hermitian(rng, 6);
    auto pt = locc::partial_transpose(m, {2, 3}, {0, 1});
    REQUIRE(pt.approx_equal(m.transpose(), 1e-14));
  }
  SECTION("double application is the identity") {
    std::mt19937_64 rng(13);
    auto m = locc_test::random_hermitian(rng, 8);
    auto pt = locc::partial_transpose(m, {2, 2, 2}, {1});
    REQUIRE(locc::partial_transpose(pt, {2, 2, 2}, {1}).approx_equal(m, 1e-14));
  }
}

TEST_CASE("subsystem permutation", "[matrix]") {
  std::mt19937_64 rng(21);
  auto a = locc_test::random_density(rng, 2);
  auto b = locc_test::random_density(rng, 3);
  auto c = locc_test::random_density(rng, 4);
  auto rho = locc::tensor(locc::tensor(a, b), c);

  SECTION("product states permute factorwise") {
    auto perm = locc::permute_subsystems(rho, {2, 3, 4}, {2, 0, 1});
    REQUIRE(perm.approx_equal(locc::tensor(locc::tensor(c, a), b), 1e-12));
  }
  SECTION("composition of permutations") {
    auto once = locc::permute_subsystems(rho, {2, 3, 4}, {1, 2, 0});
    auto twice = locc::permute_subsystems(once, {3, 4, 2}, {1, 2, 0});
    auto direct = locc::permute_subsystems(rho, {2, 3, 4}, {2, 0, 1});
    REQUIRE(twice.approx_equal(direct, 1e-12));
  }
  SECTION("partial trace commutes with permutation") {
    auto perm = locc::permute_subsystems(rho, {2, 3, 4}, {2, 0, 1});
    auto red1 = locc::partial_trace(perm, {4, 2, 3}, {1});
    auto red2 = locc::partial_trace(rho, {2, 3, 4}, {0});
    REQUIRE(red1.approx_equal(red2, 1e-12));
  }
}
