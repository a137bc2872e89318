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
#include <random>
#include <vector>

#include "catch2/catch_amalgamated.hpp"
#include "locc/caratheodory.hpp"

namespace {

std::vector<double> barycenter(const std::vector<std::vector<double>>& points,
                               const std::vector<std::size_t>& support,
                               const std::vector<double>& weights) {
  std::vector<double> b(points.front().size(), 0.0);
  for (std::size_t i = 0; i < support.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      b[k] += weights[i] * points[support[i]][k];
  return b;
}

double total(const std::vector<double>& w) {
  double s = 0.0;
  for (double x : w) s += x;
  return s;
}

}  // namespace

TEST_CASE("caratheodory reduction", "[caratheodory]") {
  SECTION("four collinear points collapse to two") {
    const std::vector<std::vector<double>> pts = {{0.0}, {1.0}, {2.0}, {3.0}};
    const std::vector<double> w(4, 0.25);
    const auto r = locc::caratheodory_reduce(pts, w);
    REQUIRE(r.support.size() <= 2);
    REQUIRE(std::abs(total(r.weights) - 1.0) < 1e-14);
    REQUIRE(std::abs(barycenter(pts, r.support, r.weights)[0] - 1.5) < 1e-14);
  }

  SECTION("small supports pass through untouched") {
    const std::vector<std::vector<double>> pts = {{0.0, 0.0}, {1.0, 0.0},
                                                  {0.0, 1.0}};
    const std::vector<double> w = {0.2, 0.3, 0.5};
    const auto r = locc::caratheodory_reduce(pts, w);
    REQUIRE(r.support == std::vector<std::size_t>{0, 1, 2});
    REQUIRE(r.weights == w);
  }

  SECTION("zero weights are dropped without reduction") {
    const std::vector<std::vector<double>> pts = {{0.0, 0.0}, {1.0, 0.0},
                                                  {0.0, 1.0}};
    const std::vector<double> w = {0.5, 0.0, 0.5};
    const auto r = locc::caratheodory_reduce(pts, w);
    REQUIRE(r.support == std::vector<std::size_t>{0, 2});
  }

  SECTION("random clouds meet the support bound") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::uniform_real_distribution<double> weight(0.1, 1.0);
    for (int rep = 0; rep < 500; ++rep) {
      const std::size_t n = 1 + rng() % 10;
      const std::size_t count = n + 2 + rng() % 20;
      std::vector<std::vector<double>> pts(count, std::vector<double>(n));
      std::vector<double> w(count);
      for (std::size_t i = 0; i < count; ++i) {
        w[i] = weight(rng);
        for (std::size_t k = 0; k < n; ++k) pts[i][k] = coord(rng);
      }
      const auto before = barycenter(
          pts, [&] {
            std::vector<std::size_t> all(count);
            for (std::size_t i = 0; i < count; ++i) all[i] = i;
            return all;
          }(),
          w);

      const auto r = locc::caratheodory_reduce(pts, w);
      REQUIRE(r.support.size() <= n + 1);
      for (double x : r.weights) REQUIRE(x > 0.0);
      REQUIRE(std::abs(total(r.weights) - total(w)) < 1e-10);
      const auto after = barycenter(pts, r.support, r.weights);
      for (std::size_t k = 0; k < n; ++k)
        REQUIRE(std::abs(after[k] - before[k]) < 1e-10);
    }
  }

  SECTION("minimal mode collapses duplicates") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> weight(0.1, 1.0);
    std::vector<std::vector<double>> pts(40, {0.3, -0.7, 0.1});
    std::vector<double> w(40);
    for (auto& x : w) x = weight(rng);
    const auto r = locc::caratheodory_reduce(pts, w, 1e-12, true);
    REQUIRE(r.support.size() == 1);
    REQUIRE(std::abs(total(r.weights) - total(w)) < 1e-12);
  }

  SECTION("minimal mode keeps affinely independent points") {
    const std::vector<std::vector<double>> pts = {{0.0, 0.0}, {1.0, 0.0},
                                                  {0.0, 1.0}};
    const std::vector<double> w = {0.2, 0.3, 0.5};
    const auto r = locc::caratheodory_reduce(pts, w, 1e-12, true);
    REQUIRE(r.support.size() == 3);
  }

  SECTION("minimal mode prunes a redundant midpoint") {
    // {0, 2, 1} on a line: the interior point is a convex combination.
    const std::vector<std::vector<double>> pts = {{0.0}, {2.0}, {1.0}};
    const std::vector<double> w = {0.25, 0.25, 0.5};
    const auto r = locc::caratheodory_reduce(pts, w, 1e-12, true);
    REQUIRE(r.support.size() <= 2);
    const auto after = barycenter(pts, r.support, r.weights);
    REQUIRE(std::abs(after[0] - 1.0) < 1e-13);
    REQUIRE(std::abs(total(r.weights) - 1.0) < 1e-13);
  }

  SECTION("invalid inputs throw") {
    REQUIRE_THROWS_AS(locc::caratheodory_reduce({{0.0}}, {-0.5}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(locc::caratheodory_reduce({{0.0}, {1.0, 2.0}},
                                                {0.5, 0.5}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(locc::caratheodory_reduce({}, {}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(locc::caratheodory_reduce({{0.0}}, {0.5, 0.5}),
                      std::invalid_argument);
  }
}
