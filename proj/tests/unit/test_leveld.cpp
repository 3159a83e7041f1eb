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

#include <cmath>

#include "doctest.h"
#include "iwb/errors.hpp"
#include "iwb/leveld.hpp"

using namespace iwb;

namespace {

mpz_class z(std::uint64_t v) { return mpz_class(static_cast<unsigned long>(v)); }

std::vector<Complex> indicator(std::uint64_t X, const std::vector<std::uint64_t>& members) {
  std::vector<Complex> f(X, 0);
  for (auto x : members) f[x - 1] = 1;
  return f;
}

// Sum over |S| = d and a mod R_S with no member of S dividing a, each term
// evaluated with fourier_point.
double lhs_oracle(const AvoidingSet& A, const std::vector<std::uint64_t>& Q, int d) {
  const Signal s = indicator_signal(A);
  double total = 0;
  const std::size_t n = Q.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != d) continue;
    std::uint64_t R = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) R *= Q[i];
    }
    for (std::uint64_t a = 0; a < R; ++a) {
      bool ok = true;
      for (std::size_t i = 0; i < n; ++i) {
        if ((mask >> i & 1) && a % Q[i] == 0) ok = false;
      }
      if (ok) total += std::norm(fourier_point(s, a, R, 0.0));
    }
  }
  return total;
}

}  // namespace

TEST_CASE("build_family example: variant 1") {
  FamilyConstants c;
  c.C1 = 1;
  const ModulusFamily Q = ModulusFamily::build(1, 0.1, 0.5, c);
  CHECK(Q.L() == doctest::Approx(2.302585));
  CHECK(Q.cutoff() == doctest::Approx(8.04).epsilon(0.001));
  CHECK(Q.P_max() == doctest::Approx(316.23).epsilon(0.001));
  const FamilyMember& dist = Q.members().front();
  CHECK(dist.distinguished);
  REQUIRE(dist.factors.size() == 4);
  for (const auto& pp : dist.factors) CHECK(pp.e == 12);
  CHECK(dist.value() == mpz_class(210) * mpz_class(210) * mpz_class(210) * mpz_class(210) * mpz_class(210) *
                            mpz_class(210) * mpz_class(210) * mpz_class(210) * mpz_class(210) * mpz_class(210) *
                            mpz_class(210) * mpz_class(210));
  std::vector<std::uint64_t> rest;
  for (std::size_t i = 1; i < Q.size(); ++i) rest.push_back(*Q.members()[i].value_u64());
  CHECK(rest[0] == 121);
  CHECK(rest[1] == 169);
  CHECK(rest[2] == 289);
  CHECK(rest[3] == 19);
  CHECK(rest.back() == 313);
  for (std::size_t i = 1; i < Q.size(); ++i) {
    const auto& f = Q.members()[i].factors;
    REQUIRE(f.size() == 1);
    CHECK(static_cast<double>(f[0].p) > Q.cutoff());
    CHECK(static_cast<double>(*Q.members()[i].value_u64()) <= Q.P_max());
    CHECK(static_cast<double>(*Q.members()[i].value_u64() * f[0].p) > Q.P_max());
  }
  CHECK(Q.pairwise_coprime());
}

TEST_CASE("build_family: degenerate and variant 2") {
  FamilyConstants c;
  c.C1 = 0.01;
  const ModulusFamily d = ModulusFamily::build(1, 0.1, 0.5, c);
  CHECK(d.degenerate());
  CHECK(d.size() == 1);

  const ModulusFamily v2 = ModulusFamily::build(2, 0.01, 0.5);
  CHECK(v2.pairwise_coprime());
  CHECK(v2.members().front().distinguished);

  CHECK_THROWS_AS(ModulusFamily::build(1, 0.5, 0.5), Error);
  CHECK_THROWS_AS(ModulusFamily::build(3, 0.1, 0.5), Error);
  CHECK_THROWS_AS(ModulusFamily::from_members({4, 6}), Error);
}

TEST_CASE("l_value examples") {
  const ModulusFamily Q = ModulusFamily::from_members({4, 9, 5});
  CHECK(l_value(1, Q) == 0);
  CHECK(l_value(6, Q) == 2);
  CHECK_FALSE(l_value(8, Q).has_value());
  CHECK_FALSE(l_value(7, Q).has_value());
  CHECK(l_value(180, Q) == 3);
}

TEST_CASE("l_value is at most omega and obeys the denominator bound") {
  FamilyConstants c;
  c.C1 = 1;
  const ModulusFamily built = ModulusFamily::build(1, 0.1, 0.5, c);
  const ModulusFamily small = ModulusFamily::from_members({8, 9, 25, 7, 11});
  for (std::uint64_t q = 1; q <= 10000; ++q) {
    for (const ModulusFamily* Q : {&built, &small}) {
      const auto l = l_value(z(q), *Q);
      if (l) CHECK(*l <= omega(q));
    }
    const auto l = l_value(z(q), built);
    if (l && *l >= 1) CHECK(static_cast<double>(q) >= std::pow(built.cutoff(), static_cast<double>(*l) - 1));
  }
}

TEST_CASE("lift_fraction examples") {
  const ModulusFamily Q = ModulusFamily::from_members({4, 9, 5});
  const LiftedFraction a = lift_fraction(1, 6, Q);
  CHECK(a.S == std::vector<std::size_t>{0, 1});
  CHECK(a.R == 36);
  CHECK(a.b == 6);
  const LiftedFraction b = lift_fraction(1, 4, Q);
  CHECK(b.S == std::vector<std::size_t>{0});
  CHECK(b.R == 4);
  CHECK(b.b == 1);
  const LiftedFraction c = lift_fraction(7, 45, Q);
  CHECK(c.S == std::vector<std::size_t>{1, 2});
  CHECK(c.R == 45);
  CHECK(c.b == 7);
  CHECK_THROWS_AS(lift_fraction(1, 8, Q), Error);
  CHECK_THROWS_AS(lift_fraction(2, 6, Q), Error);
}

TEST_CASE("lift_fraction identity on every coverable fraction") {
  const ModulusFamily Q = ModulusFamily::from_members({8, 9, 5, 7});
  for (std::uint64_t q = 1; q <= 2520; ++q) {
    if (!l_value(z(q), Q)) continue;
    for (std::uint64_t a = 1; a <= q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      const LiftedFraction L = lift_fraction(z(a), z(q), Q);
      mpq_class diff = mpq_class(z(a), z(q)) - mpq_class(L.b, L.R);
      diff.canonicalize();
      CHECK(diff.get_den() == 1);
      for (std::size_t i : L.S) CHECK(L.b % Q.members()[i].value() != 0);
    }
  }
}

TEST_CASE("level_d_audit: multiples of 12") {
  std::vector<std::uint64_t> A;
  for (std::uint64_t x = 12; x <= 1200; x += 12) A.push_back(x);
  const ModulusFamily Q = ModulusFamily::from_members({3, 4, 5});
  const LevelDReport r = level_d_audit(indicator(1200, A), Q, 2, 1.0 / 12);

  // S = {3, 4} alone contributes 6 |A|^2; {3, 5} and {4, 5} add frequencies
  // where 1_A^ is small but nonzero.
  AvoidingSet As(1200);
  for (auto x : A) As.insert(x);
  CHECK(lhs_oracle(As, {3, 4}, 2) == doctest::Approx(6.0 * 100 * 100));
  CHECK(r.lhs == doctest::Approx(lhs_oracle(As, {3, 4, 5}, 2)).epsilon(1e-9));
  REQUIRE(r.density.has_value());
  CHECK(r.density->average > r.density->threshold);
  CHECK(r.density->r % r.density->modulus == r.density->r);
  CHECK_FALSE(r.violated());
  CHECK_FALSE(r.hypotheses.all());
}

TEST_CASE("level_d_audit: zero function") {
  const ModulusFamily Q = ModulusFamily::from_members({3, 4, 5});
  const LevelDReport r = level_d_audit(std::vector<Complex>(500, 0), Q, 1, 0.2);
  CHECK(r.lhs == 0);
  CHECK(r.energy_branch);
  CHECK_FALSE(r.violated());
}

TEST_CASE("level_d_audit left side matches a brute force") {
  Rng rng(77);
  const std::vector<std::vector<std::uint64_t>> families{{3, 4}, {3, 4, 5}, {5, 7, 8, 9}, {2, 3, 5, 7}};
  for (const auto& fam : families) {
    const ModulusFamily Q = ModulusFamily::from_members(fam);
    for (std::uint64_t X : {50ULL, 217ULL, 500ULL}) {
      AvoidingSet A(X);
      for (std::uint64_t x = 1; x <= X; ++x) {
        if (rng.uniform() < 0.3) A.insert(x);
      }
      if (A.size() == 0) continue;
      std::vector<Complex> f(X, 0);
      for (auto x : A.members()) f[x - 1] = 1;
      for (int d = 1; d <= 2 && d <= static_cast<int>(fam.size()); ++d) {
        const LevelDReport r = level_d_audit(f, Q, d, A.alpha() < 1 ? A.alpha() : 0.5);
        CHECK(r.lhs == doctest::Approx(lhs_oracle(A, fam, d)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("level_d_audit: density witness is a genuine progression average") {
  Rng rng(5);
  const ModulusFamily Q = ModulusFamily::from_members({3, 4, 5, 7, 11});
  for (int trial = 0; trial < 20; ++trial) {
    const std::uint64_t X = 2000;
    std::vector<Complex> f(X, 0);
    std::uint64_t count = 0;
    for (std::uint64_t x = 1; x <= X; ++x) {
      if (rng.uniform() < 0.2) {
        f[x - 1] = 1;
        ++count;
      }
    }
    const double alpha = static_cast<double>(count) / X;
    for (int d = 1; d <= 2; ++d) {
      const LevelDReport r = level_d_audit(f, Q, d, alpha);
      CHECK_FALSE(r.violated());
      if (r.density) {
        double s = 0;
        std::uint64_t n = 0;
        for (std::uint64_t x = 1; x <= X; ++x) {
          if (x % r.density->modulus == r.density->r) {
            s += std::abs(f[x - 1]);
            ++n;
          }
        }
        CHECK(s / static_cast<double>(n) == doctest::Approx(r.density->average));
        CHECK(r.density->threshold == doctest::Approx(std::ldexp(alpha, static_cast<int>(r.density->S.size()))));
      }
    }
  }
}

TEST_CASE("level_d_audit rejects d out of range") {
  const ModulusFamily Q = ModulusFamily::from_members({3, 4});
  CHECK_THROWS_AS(level_d_audit(std::vector<Complex>(10, 1), Q, 0, 0.2), Error);
  CHECK_THROWS_AS(level_d_audit(std::vector<Complex>(10, 1), Q, 3, 0.2), Error);
}
