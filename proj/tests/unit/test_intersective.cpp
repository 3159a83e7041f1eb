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

#include <memory>
#include <set>

#include "doctest.h"
#include "iwb/errors.hpp"
#include "iwb/intersective.hpp"
#include "iwb/numtheory.hpp"

using namespace iwb;

namespace {

const IntPoly kSextic = IntPoly{-13, 0, 1} * IntPoly{-17, 0, 1} * IntPoly{-221, 0, 1};

std::shared_ptr<const RootChoices> choices(const IntPoly& h, std::map<std::uint64_t, RootOverride> o = {}) {
  return std::make_shared<const RootChoices>(h, std::move(o));
}

RootOverride value(long v) {
  RootOverride o;
  o.value = mpz_class(v);
  return o;
}

// Residues r mod p^e with h(r) == 0, by enumeration.
std::vector<std::uint64_t> roots_by_scan(const IntPoly& h, std::uint64_t pe) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t r = 0; r < pe; ++r) {
    if (h.eval_mod(r, pe) == 0) out.push_back(r);
  }
  return out;
}

}  // namespace

TEST_CASE("padic_roots examples") {
  auto a = padic_roots(IntPoly{0, 0, 1}, 3, 2);
  REQUIRE(a.size() == 1);
  CHECK(a[0].root == 0);
  CHECK(a[0].multiplicity == 2);

  auto b = padic_roots(IntPoly{-1, 0, 1}, 7, 2);
  REQUIRE(b.size() == 2);
  std::set<unsigned long> rs{b[0].root.get_ui(), b[1].root.get_ui()};
  CHECK(rs == std::set<unsigned long>{1, 48});
  CHECK(b[0].multiplicity == 1);
  CHECK(b[1].multiplicity == 1);

  auto c = padic_roots(IntPoly{-2, 0, 1}, 7, 1);
  REQUIRE(c.size() == 2);
  std::set<unsigned long> cs{c[0].root.get_ui(), c[1].root.get_ui()};
  CHECK(cs == std::set<unsigned long>{3, 4});
}

TEST_CASE("padic_roots residues are roots of the right modulus") {
  for (const IntPoly& h : {IntPoly{-1, 0, 1}, IntPoly{0, -1, 0, 1}, IntPoly{0, 1, 2}, kSextic}) {
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 13ULL, 17ULL}) {
      for (int prec : {1, 2, 3}) {
        const std::uint64_t pe = ipow_u64(p, prec);
        for (const auto& r : padic_roots(h, p, prec)) {
          CHECK(r.precision == prec);
          CHECK(h.eval_mod(r.root.get_ui(), pe) == 0);
        }
      }
    }
  }
}

TEST_CASE("simple roots lift uniquely: counts match enumeration") {
  // x^2 - 1 at odd p: exactly two roots mod p^e.
  for (std::uint64_t p : {3ULL, 5ULL, 7ULL}) {
    for (int e = 1; e <= 3; ++e) {
      CHECK(roots_by_scan(IntPoly{-1, 0, 1}, ipow_u64(p, e)).size() == 2);
      CHECK(padic_roots(IntPoly{-1, 0, 1}, p, e).size() == 2);
    }
  }
}

TEST_CASE("intersectivity_verdict examples") {
  const Verdict a = intersectivity_verdict(IntPoly{0, 0, 1}, 100, 12);
  CHECK(a.kind == Verdict::Kind::kCertified);
  CHECK(a.root == 0);

  const Verdict b = intersectivity_verdict(IntPoly{-2, 0, 1}, 100, 12);
  CHECK(b.kind == Verdict::Kind::kNotIntersective);
  // The witness is a prime power with no root; 5 and 2^2 both qualify.
  CHECK_FALSE(has_root_mod(IntPoly{-2, 0, 1}, b.witness_p, b.witness_e));
  CHECK_FALSE(has_root_mod(IntPoly{-2, 0, 1}, 5, 1));

  const Verdict c = intersectivity_verdict(kSextic, 10000, 12);
  CHECK(c.kind == Verdict::Kind::kEmpiricalUpTo);
  CHECK(c.prime_bound == 10000);
  CHECK(c.to_json().at("verdict") == "empirical");
}

TEST_CASE("x^2 + 1 fails mod 4") {
  const Verdict v = intersectivity_verdict(IntPoly{1, 0, 1}, 100, 12);
  CHECK(v.kind == Verdict::Kind::kNotIntersective);
  CHECK_FALSE(has_root_mod(IntPoly{1, 0, 1}, v.witness_p, v.witness_e));
}

TEST_CASE("root_residue examples") {
  CHECK(choices(IntPoly{0, 0, 1})->root_residue(60) == 0);
  CHECK(choices(IntPoly{-1, 0, 1})->root_residue(6) == -5);
  CHECK(choices(IntPoly{-1, 0, 1}, {{2, value(-1)}})->root_residue(4) == -1);
}

TEST_CASE("root_residue lies in (-l, 0] and is a root mod l") {
  auto c = choices(kSextic);
  for (long l = 1; l <= 120; ++l) {
    const mpz_class r = c->root_residue(l);
    CHECK(r <= 0);
    CHECK(r > -l);
    mpz_class v = kSextic(r) % l;
    CHECK(v == 0);
  }
}

TEST_CASE("lambda_of examples") {
  CHECK(choices(IntPoly{0, 0, 1})->lambda_of(12) == 144);
  CHECK(choices(IntPoly{-1, 0, 1})->lambda_of(12) == 12);
  const IntPoly h = IntPoly{0, 0, 1} * IntPoly{-1, 1};
  CHECK(choices(h, {{2, value(0)}, {3, value(1)}})->lambda_of(6) == 12);
}

TEST_CASE("default root choice prefers the least multiplicity") {
  const IntPoly h = IntPoly{0, 0, 1} * IntPoly{-1, 1};
  CHECK(choices(h)->lambda_of(2) == 2);
  CHECK(choices(h)->choose(2).multiplicity() == 1);
}

TEST_CASE("auxiliary_poly examples") {
  CHECK(auxiliary_poly(choices(IntPoly{0, 0, 1}), 5).aux == IntPoly{0, 0, 1});
  CHECK(auxiliary_poly(choices(IntPoly{-1, 0, 1}), 2).aux == IntPoly{0, -2, 2});
  CHECK(auxiliary_poly(choices(IntPoly{-1, 0, 1}), 3).aux == IntPoly{1, -4, 3});
}

TEST_CASE("auxiliary_poly is h(r + l n) / lambda") {
  auto c = choices(IntPoly{0, -1, 0, 1});
  for (long l = 1; l <= 60; ++l) {
    const AuxiliaryContext ctx = auxiliary_poly(c, l);
    for (long n = -3; n <= 3; ++n) {
      CHECK(ctx.aux(n) * ctx.lambda_ell == IntPoly{0, -1, 0, 1}(ctx.r_ell + mpz_class(l) * n));
    }
  }
}

TEST_CASE("coefficient_bound examples") {
  CHECK(coefficient_bound(IntPoly{0, 0, 1}) == 12);
  CHECK(coefficient_bound(IntPoly{-1, 0, 1}) == 12);
  CHECK_THROWS_AS(coefficient_bound(IntPoly{0, 1}), Error);
  auto c = choices(IntPoly{0, 0, 1});
  for (long l = 1; l <= 100; ++l) {
    const AuxiliaryContext ctx = auxiliary_poly(c, l);
    for (const auto& co : ctx.aux.coeffs()) CHECK(mpz_class(abs(co)) <= 12 * l);
  }
}

TEST_CASE("inheritance_check examples") {
  auto c = choices(IntPoly{-1, 0, 1});
  const auto a = inheritance_check(c, 1, 2, 50);
  CHECK(a.ok());
  CHECK(a.checked == 50);
  CHECK(inheritance_check(c, 2, 3, 50).violations.empty());
  CHECK(inheritance_check(choices(IntPoly{0, 0, 1}), 7, 11, 50).ok());
}

TEST_CASE("inheritance identity recomputed directly") {
  // lambda(q) h_{ql}(n) == h_l(shift + q n) with shift = (r_{ql} - r_l) / l.
  auto c = choices(IntPoly{0, 1, 2});
  for (long l : {1, 2, 3, 6}) {
    for (long q : {2, 3, 5}) {
      const AuxiliaryContext big = auxiliary_poly(c, q * l), small = auxiliary_poly(c, l);
      const mpz_class diff = big.r_ell - small.r_ell;
      REQUIRE(diff % l == 0);
      const mpz_class shift = diff / l;
      for (long n = 1; n <= 20; ++n) {
        CHECK(c->lambda_of(q) * big.aux(n) == small.aux(shift + mpz_class(q) * n));
      }
    }
  }
}

TEST_CASE("not intersective polynomials cannot build contexts past the obstruction") {
  auto c = choices(IntPoly{1, 0, 1});
  CHECK_THROWS_AS(auxiliary_poly(c, 4), Error);
}
