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

#include <cmath>
#include <cstddef>
#include <memory>
#include <random>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "locc/classify.hpp"
#include "locc/instrument.hpp"
#include "locc/protocol.hpp"
#include "test_helpers.hpp"

using locc::CMatrix;
using locc::Verdict;

namespace {

CMatrix diag2(double a, double b) {
  CMatrix m(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

CMatrix swap_pair() {
  CMatrix s(4, 4);
  s(0, 0) = 1.0;
  s(1, 2) = 1.0;
  s(2, 1) = 1.0;
  s(3, 3) = 1.0;
  return s;
}

CMatrix cnot() {
  CMatrix c(4, 4);
  c(0, 0) = 1.0;
  c(1, 1) = 1.0;
  c(2, 3) = 1.0;
  c(3, 2) = 1.0;
  return c;
}

// Completely depolarizing map on a qubit pair: one Kraus |i><j| / 2 per
// matrix unit, so the Choi matrix is proportional to the identity.
locc::KrausMap depolarizing_pair() {
  std::vector<CMatrix> ops;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      CMatrix k(4, 4);
      k(i, j) = 0.5;
      ops.push_back(k);
    }
  return locc::KrausMap(std::move(ops), {2, 2});
}

// Identity on one qubit whose input sits with the first party and whose
// output sits with the second: a noiseless quantum wire between them.
locc::KrausMap qubit_wire() {
  return locc::KrausMap({CMatrix::identity(2)}, {2, 1}, {1, 2});
}

// Two-outcome branch maps whose Kraus operators are diagonal scalings on
// one qubit times the |0><0| projector on the other.
locc::KrausMap splitter_block(bool first_party) {
  const CMatrix t1 = diag2(std::sqrt(1.0 / 3.0), std::sqrt(1.0 / 3.0));
  const CMatrix t2 = diag2(std::sqrt(1.0 / 6.0), std::sqrt(2.0 / 3.0));
  const CMatrix p0 = diag2(1.0, 0.0);
  if (first_party)
    return locc::KrausMap({locc::tensor(t1, p0), locc::tensor(t2, p0)},
                          {2, 2});
  return locc::KrausMap({locc::tensor(p0, t1), locc::tensor(p0, t2)}, {2, 2});
}

locc::Instrument splitter_instrument() {
  CMatrix p11(4, 4);
  p11(3, 3) = 1.0;
  locc::Instrument instr;
  instr.labels = {"00", "01", "10"};
  instr.maps = {locc::KrausMap({p11}, {2, 2}), splitter_block(true),
                splitter_block(false)};
  return instr;
}

// Three product projectors that sum to the identity on two qubits.
locc::Instrument projector_triple() {
  const CMatrix q = diag2(std::sqrt(0.5), 1.0);
  const CMatrix p0 = diag2(1.0, 0.0);
  const CMatrix p1 = diag2(0.0, 1.0);
  locc::Instrument instr;
  instr.labels = {"1", "2", "3"};
  instr.maps = {locc::KrausMap({locc::tensor(q, p0)}, {2, 2}),
                locc::KrausMap({locc::tensor(p0, q)}, {2, 2}),
                locc::KrausMap({locc::tensor(p1, p1)}, {2, 2})};
  return instr;
}

std::unique_ptr<locc::ProtocolNode> instrument_node(
    std::size_t party, const locc::Instrument& local) {
  auto node = std::make_unique<locc::ProtocolNode>();
  node->party = party;
  for (std::size_t i = 0; i < local.size(); ++i)
    node->branches.push_back(
        {local.labels[i], local.maps[i].kraus.front(), {}});
  return node;
}

// Two rounds on two qubits with random parties and random unitary
// conditionals in both directions.
locc::ProtocolTree random_two_round(std::mt19937_64& rng) {
  const std::size_t a = rng() % 2;
  const std::size_t b = 1 - a;
  locc::ProtocolTree tree;
  tree.parties = locc::PartyStructure{{2, 2}};
  tree.root = instrument_node(a, locc_test::random_local_instrument(rng, 2, 2));
  for (auto& br : tree.root->branches)
    if (rng() % 2) br.conditionals[b] = locc_test::random_unitary(rng, 2);
  for (std::size_t i = 0; i < tree.root->branches.size(); ++i) {
    auto child = instrument_node(b, locc_test::random_local_instrument(rng, 2, 2));
    for (auto& br : child->branches)
      if (rng() % 2) br.conditionals[a] = locc_test::random_unitary(rng, 2);
    tree.root->children.push_back(std::move(child));
  }
  return tree;
}

}  // namespace

TEST_CASE("partial transpose membership checks", "[classify]") {
  SECTION("depolarizing pair has an identity-proportional Choi matrix") {
    const auto results = locc::is_ppt_map_all_cuts(depolarizing_pair());
    REQUIRE(results.size() == 1);
    REQUIRE(results[0].cut == std::vector<std::size_t>{1});
    REQUIRE(results[0].verdict == Verdict::yes);
    // Choi = I/4 is invariant under any partial transpose.
    REQUIRE(std::abs(results[0].min_eigenvalue - 0.25) < 1e-12);
  }

  SECTION("a qubit wire between the parties is not PPT") {
    const auto r = locc::is_ppt_map(qubit_wire(), {1});
    REQUIRE(r.verdict == Verdict::no);
    // Transposing the receiving side turns the Choi matrix into a swap
    // operator with eigenvalues -1 and +1.
    REQUIRE(std::abs(r.min_eigenvalue - (-1.0)) < 1e-12);
  }

  SECTION("splitter blocks are PPT across the party cut") {
    for (bool side : {true, false}) {
      const auto results = locc::is_ppt_map_all_cuts(splitter_block(side));
      REQUIRE(results.size() == 1);
      REQUIRE(results[0].verdict == Verdict::yes);
      // The Choi matrix is a product across the cut, so transposition only
      // reshuffles a PSD factor; the kernel keeps the minimum at zero.
      REQUIRE(std::abs(results[0].min_eigenvalue) < 1e-12);
    }
  }

  SECTION("the swap unitary is not PPT") {
    const auto r =
        locc::is_ppt_map(locc::KrausMap({swap_pair()}, {2, 2}), {1});
    REQUIRE(r.verdict == Verdict::no);
    REQUIRE(r.min_eigenvalue < -0.5);
  }

  SECTION("three parties enumerate three cuts") {
    const locc::KrausMap ident(
        {CMatrix::identity(8)}, {2, 2, 2});
    const auto results = locc::is_ppt_map_all_cuts(ident);
    REQUIRE(results.size() == 3);
    REQUIRE(results[0].cut == std::vector<std::size_t>{1});
    REQUIRE(results[1].cut == std::vector<std::size_t>{2});
    REQUIRE(results[2].cut == std::vector<std::size_t>{1, 2});
    // Doing nothing is a local operation: every cut passes.
    for (const auto& r : results) REQUIRE(r.verdict == Verdict::yes);
  }

  SECTION("out of range cut indices throw") {
    REQUIRE_THROWS_AS(locc::is_ppt_map(qubit_wire(), {5}),
                      std::invalid_argument);
  }
}

TEST_CASE("fine grained separability certificates", "[classify]") {
  SECTION("product operators certify immediately") {
    const locc::KrausMap ident({CMatrix::identity(4)}, {2, 2});
    REQUIRE(locc::is_sep_finegrained(ident).verdict == Verdict::yes);
    for (bool side : {true, false})
      REQUIRE(locc::is_sep_finegrained(splitter_block(side)).verdict ==
              Verdict::yes);
    for (const auto& m : projector_triple().maps)
      REQUIRE(locc::is_sep_finegrained(m).verdict == Verdict::yes);
  }

  SECTION("the zero map certifies vacuously") {
    REQUIRE(locc::is_sep_finegrained(locc::zero_map({2, 2})).verdict ==
            Verdict::yes);
  }

  SECTION("swap stays unknown with four equal Schmidt coefficients") {
    const auto r =
        locc::is_sep_finegrained(locc::KrausMap({swap_pair()}, {2, 2}));
    REQUIRE(r.verdict == Verdict::unknown);
    REQUIRE(r.kraus_index == 0);
    REQUIRE(r.cut == std::vector<std::size_t>{1});
    REQUIRE(r.schmidt_coeffs.size() == 4);
    for (double s : r.schmidt_coeffs) REQUIRE(std::abs(s - 1.0) < 1e-12);
  }

  SECTION("a controlled flip has exactly two Schmidt terms") {
    const auto r = locc::is_sep_finegrained(locc::KrausMap({cnot()}, {2, 2}));
    REQUIRE(r.verdict == Verdict::unknown);
    REQUIRE(r.schmidt_coeffs.size() == 2);
    for (double s : r.schmidt_coeffs)
      REQUIRE(std::abs(s - std::sqrt(2.0)) < 1e-12);
  }

  SECTION("a qubit wire is not certified by its decomposition") {
    const auto r = locc::is_sep_finegrained(qubit_wire());
    REQUIRE(r.verdict == Verdict::unknown);
    REQUIRE(r.schmidt_coeffs.size() == 2);
  }

  SECTION("each cut is tested separately on three parties") {
    // |abc> -> |cba>: a product across the middle-party cut, entangling
    // across the cuts that separate the outer parties.
    CMatrix s(8, 8);
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b)
        for (std::size_t c = 0; c < 2; ++c)
          s((c * 2 + b) * 2 + a, (a * 2 + b) * 2 + c) = 1.0;
    const auto r = locc::is_sep_finegrained(locc::KrausMap({s}, {2, 2, 2}));
    REQUIRE(r.verdict == Verdict::unknown);
    REQUIRE(r.cut == std::vector<std::size_t>{2});
  }

  SECTION("random product maps certify and pass every transpose test") {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 2 + rng() % 2;
      const std::size_t ops = 1 + rng() % 3;
      std::vector<CMatrix> ks;
      for (std::size_t i = 0; i < ops; ++i) {
        CMatrix k = locc_test::random_matrix(rng, 2, 2);
        for (std::size_t p = 1; p < n; ++p)
          k = locc::tensor(k, locc_test::random_matrix(rng, 2, 2));
        ks.push_back(CMatrix(0.4 * k));
      }
      const locc::KrausMap m(ks, std::vector<std::size_t>(n, 2));
      REQUIRE(locc::is_sep_finegrained(m).verdict == Verdict::yes);
      // Certified separable maps must pass the weaker transpose test.
      for (const auto& pr : locc::is_ppt_map_all_cuts(m)) {
        REQUIRE(pr.verdict == Verdict::yes);
        REQUIRE(pr.min_eigenvalue >= -1e-9);
      }
    }
  }
}

TEST_CASE("instrument classification", "[classify]") {
  SECTION("the splitter instrument is separable and PPT") {
    const auto report = locc::classify_instrument(splitter_instrument());
    REQUIRE(report.maps.size() == 3);
    REQUIRE(report.sep_finegrained == Verdict::yes);
    REQUIRE(report.ppt == Verdict::yes);
    for (const auto& mc : report.maps) {
      REQUIRE(mc.sep_finegrained == Verdict::yes);
      REQUIRE(mc.ppt == Verdict::yes);
      REQUIRE(mc.schmidt_coeffs.empty());
    }
    REQUIRE(report.maps[0].label == "00");
    REQUIRE(report.maps[1].label == "01");
    REQUIRE(report.maps[2].label == "10");
  }

  SECTION("a transpose violation upgrades unknown to a witnessed no") {
    locc::Instrument instr;
    instr.labels = {"out"};
    instr.maps = {qubit_wire()};
    const auto report = locc::classify_instrument(instr);
    REQUIRE(report.ppt == Verdict::no);
    REQUIRE(report.sep_finegrained == Verdict::no);
    const auto& mc = report.maps[0];
    REQUIRE(mc.ppt == Verdict::no);
    REQUIRE(mc.sep_finegrained == Verdict::no);
    // Every "no" must carry a numeric witness past the tolerance.
    REQUIRE(mc.min_pt_eigenvalue < -1e-9);
    REQUIRE(mc.worst_cut == std::vector<std::size_t>{1});
  }

  SECTION("protocol outputs certify as separable and PPT") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 5; ++trial) {
      const locc::ProtocolTree tree = random_two_round(rng);
      // Empty outcome map keeps one map per leaf: the family stays
      // fine-grained and every Kraus operator is a product of local factors.
      const locc::Instrument out = locc::run_protocol(tree);
      const auto report = locc::classify_instrument(out);
      REQUIRE(report.sep_finegrained == Verdict::yes);
      REQUIRE(report.ppt == Verdict::yes);
      for (const auto& mc : report.maps)
        REQUIRE(mc.min_pt_eigenvalue >= -1e-9);
    }
  }
}
