// Copyright 2026 The Intersective Workbench Authors
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

#include "doctest.h"
#include "iwb/errors.hpp"
#include "iwb/search.hpp"

using namespace iwb;

namespace {

// Largest avoiding subset of [X] over all 2^X masks; bit i stands for i + 1.
std::uint64_t brute_force_D(const std::vector<std::uint64_t>& F, std::uint64_t X) {
  std::uint64_t best = 0;
  for (std::uint64_t mask = 0; mask < (1ULL << X); ++mask) {
    bool ok = true;
    for (auto f : F) {
      if (f < X && (mask & (mask >> f)) != 0) {
        ok = false;
        break;
      }
    }
    if (ok) best = std::max<std::uint64_t>(best, static_cast<std::uint64_t>(__builtin_popcountll(mask)));
  }
  return best;
}

std::vector<std::uint64_t> squares(std::uint64_t X) { return powers_up_to(X, 2); }

}  // namespace

TEST_CASE("forbidden_values examples") {
  CHECK(forbidden_values(IntPoly{0, 0, 1}, 30) == std::vector<std::uint64_t>{1, 4, 9, 16, 25});
  ForbiddenOptions sieved;
  sieved.mode = ForbiddenMode::kSieved;
  sieved.U = 2;
  CHECK(forbidden_values(IntPoly{0, 0, 1}, 30, sieved) == std::vector<std::uint64_t>{1, 9, 25});
  CHECK(forbidden_values(IntPoly{0, -2, 2}, 30) == std::vector<std::uint64_t>{4, 12, 24});
}

TEST_CASE("forbidden_values over the integers") {
  ForbiddenOptions z;
  z.over_integers = true;
  // 2n^2 + 3n at n = -1, -2, -3 gives -1, 2, 9; at n = 1, 2 gives 5, 14.
  CHECK(forbidden_values(IntPoly{0, 3, 2}, 20, z) == std::vector<std::uint64_t>{2, 5, 9, 14, 20});
  CHECK(forbidden_values(IntPoly{0, 3, 2}, 20) == std::vector<std::uint64_t>{5, 14});
  CHECK_THROWS_AS(forbidden_values(IntPoly{5}, 20), Error);
}

TEST_CASE("powers_up_to") {
  CHECK(powers_up_to(30, 3) == std::vector<std::uint64_t>{1, 8, 27});
  CHECK(powers_up_to(1, 2) == std::vector<std::uint64_t>{1});
  CHECK_THROWS_AS(powers_up_to(10, 0), Error);
}

TEST_CASE("exact_max_avoiding examples") {
  const ExactResult a = exact_max_avoiding(squares(3), 3);
  CHECK(a.size == 2);
  const ExactResult b = exact_max_avoiding(squares(6), 6);
  CHECK(b.size == 3);
  const ExactResult c = exact_max_avoiding({1}, 10);
  CHECK(c.size == 5);
  CHECK(exact_max_avoiding(squares(10), 10).size == 4);
  CHECK_THROWS_AS(exact_max_avoiding(squares(3000), 3000), Error);
}

TEST_CASE("exact_max_avoiding matches the exhaustive oracle") {
  for (std::uint64_t X = 1; X <= 16; ++X) {
    const std::vector<std::vector<std::uint64_t>> families{
        squares(X), powers_up_to(X, 3), {1}, forbidden_values(IntPoly{0, -2, 2}, X)};
    for (const auto& F : families) {
      const ExactResult r = exact_max_avoiding(F, X);
      CHECK(r.size == brute_force_D(F, X));
      CHECK(r.witness.size() == r.size);
      CHECK_FALSE(verify_avoiding(r.witness, F).has_value());
    }
  }
}

TEST_CASE("D table is monotone with unit steps") {
  const ExactResult r = exact_max_avoiding(squares(100), 100);
  REQUIRE(r.table.size() == 101);
  CHECK(r.table[0] == 0);
  CHECK(r.table[10] == 4);
  CHECK(r.table[50] == 14);
  CHECK(r.table[100] == 24);
  for (std::size_t m = 1; m < r.table.size(); ++m) {
    CHECK(r.table[m] >= r.table[m - 1]);
    CHECK(r.table[m] <= r.table[m - 1] + 1);
  }
}

TEST_CASE("exact_max_avoiding is reproducible") {
  const ExactResult a = exact_max_avoiding(squares(60), 60);
  const ExactResult b = exact_max_avoiding(squares(60), 60);
  CHECK(a.witness.members() == b.witness.members());
  CHECK(a.nodes == b.nodes);
}

TEST_CASE("greedy_avoiding examples") {
  CHECK(greedy_avoiding(squares(10), 10).members() == std::vector<std::uint64_t>{1, 3, 6, 8});
  CHECK(greedy_avoiding({}, 5).members() == std::vector<std::uint64_t>{1, 2, 3, 4, 5});
  const AvoidingSet g = greedy_avoiding(squares(10000), 10000);
  CHECK_FALSE(verify_avoiding(g, squares(10000)).has_value());
  CHECK(g.size() == 579);
}

TEST_CASE("greedy_avoiding is a left-to-right scan") {
  const std::uint64_t X = 300;
  const auto F = powers_up_to(X, 3);
  std::vector<std::uint64_t> scan;
  for (std::uint64_t n = 1; n <= X; ++n) {
    bool ok = true;
    for (auto a : scan) {
      if (std::binary_search(F.begin(), F.end(), n - a)) ok = false;
    }
    if (ok) scan.push_back(n);
  }
  CHECK(greedy_avoiding(F, X).members() == scan);
}

TEST_CASE("verify_avoiding examples") {
  const auto F = squares(10);
  CHECK_FALSE(verify_avoiding(AvoidingSet::from_members(10, {1, 3, 6, 8}), F).has_value());
  const auto v = verify_avoiding(AvoidingSet::from_members(10, {1, 2}), F);
  REQUIRE(v.has_value());
  CHECK(v->a == 1);
  CHECK(v->b == 2);
  CHECK(v->diff == 1);
  CHECK_FALSE(verify_avoiding(AvoidingSet(10), F).has_value());
}

TEST_CASE("avoiding set JSON round trip") {
  const AvoidingSet A = AvoidingSet::from_members(200, {1, 64, 65, 128, 200});
  const AvoidingSet B = AvoidingSet::from_json(200, A.to_json());
  CHECK(B.members() == A.members());
  CHECK_THROWS_AS(AvoidingSet::from_members(10, {11}), Error);
}
