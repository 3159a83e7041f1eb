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
#include "iwb/numtheory.hpp"
#include "iwb/polycore.hpp"

using namespace iwb;

namespace {

// Horner-free oracle: sum of c_i n^i with explicit powers.
mpz_class naive_eval(const IntPoly& h, const mpz_class& n) {
  mpz_class acc = 0, pw = 1;
  for (const auto& c : h.coeffs()) {
    acc += c * pw;
    pw *= n;
  }
  return acc;
}

}  // namespace

TEST_CASE("poly_eval examples") {
  CHECK(poly_eval(IntPoly{0, 0, 1}, 0) == 0);
  CHECK(poly_eval(IntPoly{-1, 0, 1}, 5) == 24);
  CHECK(poly_eval(IntPoly{0, 1, 0, 2}, -3) == -57);
}

TEST_CASE("poly_eval agrees with power-sum oracle on large inputs") {
  const IntPoly h{7, -3, 0, 11, -2, 1};
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    mpz_class n = mpz_class(static_cast<unsigned long>(rng.next())) * static_cast<unsigned long>(rng.next());
    if (i % 2) n = -n;
    CHECK(poly_eval(h, n) == naive_eval(h, n));
  }
}

TEST_CASE("eval_mod matches exact evaluation") {
  const IntPoly h{-221, 0, 5, 0, -3};
  for (std::uint64_t n = 0; n < 300; ++n) {
    for (std::uint64_t m : {1ULL, 2ULL, 7ULL, 64ULL, 1000003ULL}) {
      mpz_class r = h(mpz_class(static_cast<unsigned long>(n))) % static_cast<unsigned long>(m);
      if (r < 0) r += static_cast<unsigned long>(m);
      CHECK(h.eval_mod(n, m) == r.get_ui());
    }
  }
}

TEST_CASE("poly_derivative examples") {
  CHECK(poly_derivative(IntPoly{0, 0, 1}) == IntPoly{0, 2});
  CHECK(poly_derivative(IntPoly{7}).is_zero());
  CHECK(poly_derivative(IntPoly{1, -4, 3}) == IntPoly{-4, 6});
}

TEST_CASE("poly_compose_affine examples") {
  CHECK(poly_compose_affine(IntPoly{0, 0, 1}, -1, 2) == IntPoly{1, -4, 4});
  CHECK(poly_compose_affine(IntPoly{0, 0, 1}, 0, 1) == IntPoly{0, 0, 1});
  CHECK(poly_compose_affine(IntPoly{-1, 0, 1}, -2, 3) == IntPoly{3, -12, 9});
}

TEST_CASE("poly_compose_affine is substitution") {
  const IntPoly h{3, 0, -1, 2};
  for (int r = -5; r <= 5; ++r) {
    for (int l = 1; l <= 6; ++l) {
      const IntPoly g = poly_compose_affine(h, r, l);
      for (int n = -4; n <= 4; ++n) CHECK(g(n) == h(mpz_class(r) + mpz_class(l) * n));
    }
  }
}

TEST_CASE("normalize_positive examples") {
  auto a = normalize_positive(IntPoly{0, 0, 1});
  CHECK(a.poly == IntPoly{0, 0, 1});
  CHECK(a.shift == 0);
  auto b = normalize_positive(IntPoly{0, -3, 1});
  CHECK(b.poly == IntPoly{0, 3, 1});
  CHECK(b.shift == 3);
  auto c = normalize_positive(IntPoly{-1, 0, 1});
  CHECK(c.poly == IntPoly{0, 2, 1});
  CHECK(c.shift == 1);
}

TEST_CASE("normalize_positive yields the least shift") {
  const IntPoly h{5, -40, 1};
  const auto r = normalize_positive(h);
  auto positive_from_one = [](const IntPoly& g) {
    const IntPoly d1 = poly_derivative(g), d2 = poly_derivative(d1);
    for (int n = 1; n < 200; ++n) {
      if (g(n) <= 0 || d1(n) <= 0 || d2(n) <= 0) return false;
    }
    return true;
  };
  CHECK(positive_from_one(r.poly));
  if (r.shift > 0) CHECK_FALSE(positive_from_one(poly_compose_affine(h, r.shift - 1, 1)));
}

TEST_CASE("normalize_positive rejects bad input") {
  CHECK_THROWS_AS(normalize_positive(IntPoly{0, 1}), Error);
  CHECK_THROWS_AS(normalize_positive(IntPoly{0, 0, -1}), Error);
}

TEST_CASE("root_bound dominates every integer root") {
  const IntPoly h = IntPoly::from_roots({-30, 2, 17});
  const mpz_class B = root_bound(h);
  CHECK(B >= 30);
}

TEST_CASE("squarefree decomposition and resultant") {
  const IntPoly h = IntPoly{0, 0, 1} * IntPoly{-1, 1};  // x^2 (x - 1)
  CHECK(squarefree_part(h) == IntPoly{0, -1, 1});
  CHECK(resultant(IntPoly{-1, 0, 1}, IntPoly{-2, 1}) == 3);
  CHECK(resultant(IntPoly{0, 1}, IntPoly{0, 0, 1}) == 0);
}

TEST_CASE("json round trip keeps big coefficients exact") {
  const IntPoly h(std::vector<mpz_class>{mpz_class("123456789012345678901234567890"), 0, -3});
  const IntPoly back = poly_from_json(poly_to_json(h));
  CHECK(back == h);
  CHECK_THROWS_AS(poly_from_json(nlohmann::json::object()), Error);
}

TEST_CASE("to_string") {
  CHECK(IntPoly{-1, 0, 1}.to_string() == "x^2 - 1");
  CHECK(IntPoly{1, -4, 3}.to_string() == "3x^2 - 4x + 1");
  CHECK(IntPoly().to_string() == "0");
}
