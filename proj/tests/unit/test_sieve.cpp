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
#include "iwb/sieve.hpp"

using namespace iwb;

namespace {

// W membership straight from the definition: for each prime p <= U, with
// gamma the least e such that h' vanishes on a proper subset of residues
// mod p^e, n is excluded when h'(n) == 0 mod p^gamma.
bool in_W_oracle(const IntPoly& aux, double U, std::uint64_t n) {
  const IntPoly d = poly_derivative(aux);
  for (std::uint64_t p : primes_up_to(static_cast<std::uint64_t>(U))) {
    const LocalData ld = local_data(aux, p);
    if (ld.j == 0) continue;
    const std::uint64_t pg = ipow_u64(p, ld.gamma);
    if (d.eval_mod(n, pg) == 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("local_data examples") {
  const LocalData a = local_data(IntPoly{0, 0, 1}, 2);
  CHECK(a.gamma == 2);
  CHECK(a.j == 2);
  const LocalData b = local_data(IntPoly{0, 0, 1}, 7);
  CHECK(b.gamma == 1);
  CHECK(b.j == 1);
  const LocalData c = local_data(IntPoly{1, -4, 3}, 3);
  CHECK(c.gamma == 1);
  CHECK(c.j == 0);
}

TEST_CASE("local_data j counts vanishing residues of h' mod p^gamma") {
  for (const IntPoly& h : {IntPoly{0, 0, 1}, IntPoly{0, -1, 0, 1}, IntPoly{0, 1, 2}, IntPoly{1, -4, 3}}) {
    const IntPoly d = poly_derivative(h);
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL}) {
      const LocalData ld = local_data(h, p);
      const std::uint64_t pg = ipow_u64(p, ld.gamma);
      std::uint64_t count = 0;
      for (std::uint64_t r = 0; r < pg; ++r) count += d.eval_mod(r, pg) == 0 ? 1 : 0;
      CHECK(count == ld.j);
      CHECK(ld.j < pg);
    }
  }
}

TEST_CASE("in_W examples") {
  const SieveTable t3(IntPoly{0, 0, 1}, 3);
  CHECK(t3.in_W(5));
  CHECK_FALSE(t3.in_W(4));
  const SieveTable t2(IntPoly{0, 0, 1}, 2);
  for (long n = 1; n <= 40; ++n) CHECK(t2.in_W(mpz_class(n), mpz_class(5)));
}

TEST_CASE("in_W agrees with the definition") {
  for (const IntPoly& h : {IntPoly{0, 0, 1}, IntPoly{0, -1, 0, 1}, IntPoly{0, 1, 2}}) {
    for (double U : {2.0, 3.0, 5.0, 10.0}) {
      const SieveTable t(h, U);
      for (std::uint64_t n = 1; n <= 500; ++n) CHECK(t.in_W(n) == in_W_oracle(h, U, n));
    }
  }
}

TEST_CASE("J_factor examples") {
  CHECK(SieveTable(IntPoly{0, 0, 1}, 3).J_factor() == 3);
  CHECK(SieveTable(IntPoly{0, 0, 1}, 2).J_factor() == 2);
  // aux with j = 0 at 3 contributes a factor 1.
  const SieveTable t(IntPoly{1, -4, 3}, 3);
  const LocalData l2 = local_data(IntPoly{1, -4, 3}, 2);
  mpq_class expected = l2.j == 0 ? mpq_class(1)
                                       : 1 / (1 - mpq_class(static_cast<unsigned long>(l2.j),
                                                            static_cast<unsigned long>(ipow_u64(2, l2.gamma))));
  expected.canonicalize();
  CHECK(t.J_factor() == expected);
}

TEST_CASE("count over one period times J equals the period") {
  for (const IntPoly& h : {IntPoly{0, 0, 1}, IntPoly{-1, 0, 1}, IntPoly{0, 1, 2}}) {
    for (double U : {2.0, 3.0, 5.0, 10.0}) {
      const SieveTable t(h, U);
      const std::uint64_t P = to_u64(t.period());
      std::uint64_t count = 0;
      for (std::uint64_t n = 1; n <= P; ++n) count += t.in_W(n) ? 1 : 0;
      CHECK(mpq_class(mpz_class(static_cast<unsigned long>(count))) * t.J_factor() == mpq_class(t.period()));
    }
  }
}

TEST_CASE("brun_sum_audit examples") {
  const BrunReport a = brun_sum_audit(SieveTable(IntPoly{0, 0, 1}, 2), 1, 0, 100);
  CHECK(a.empirical == 5000);
  CHECK(a.main_term == 5000);
  CHECK(a.abs_error == 0);

  const BrunReport b = brun_sum_audit(SieveTable(IntPoly{0, 0, 1}, 3), 1, 0, 99);
  CHECK(b.empirical == 3266);
  CHECK(b.main_term == 3267);
  CHECK(b.abs_error == doctest::Approx(1));

  const BrunReport c = brun_sum_audit(SieveTable(IntPoly{0, 0, 1}, 3), 2, 0, 99);
  CHECK(c.empirical == 0);
}

TEST_CASE("brun empirical sum recomputed directly") {
  const IntPoly h{0, 1, 2};
  for (double U : {2.0, 3.0, 5.0}) {
    const SieveTable t(h, U);
    const IntPoly d = poly_derivative(h);
    for (std::uint64_t q : {1ULL, 3ULL, 4ULL}) {
      for (std::uint64_t b = 0; b < q; ++b) {
        mpz_class s = 0;
        for (std::uint64_t n = 1; n <= 300; ++n) {
          if (n % q == b && t.in_W(n)) s += d(mpz_class(static_cast<unsigned long>(n)));
        }
        CHECK(brun_sum_audit(t, q, b, 300).empirical == s);
      }
    }
  }
}

TEST_CASE("sieve rejects bad levels") {
  CHECK_THROWS_AS(SieveTable(IntPoly{0, 0, 1}, 1.0), Error);
}
