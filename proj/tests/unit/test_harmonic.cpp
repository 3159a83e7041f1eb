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
#include "iwb/harmonic.hpp"
#include "iwb/numtheory.hpp"

using namespace iwb;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Plain double-precision sum of e(-x theta); the oracle for fourier_point.
Complex naive_fourier(const std::vector<std::uint64_t>& xs, double theta) {
  long double re = 0, im = 0;
  for (auto x : xs) {
    const long double ph = -kTwoPi * std::fmod(static_cast<long double>(x) * theta, 1.0L);
    re += std::cos(ph);
    im += std::sin(ph);
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

AvoidingSet random_set(std::uint64_t X, double alpha, std::uint64_t seed) {
  Rng rng(seed);
  AvoidingSet A(X);
  for (std::uint64_t n = 1; n <= X; ++n) {
    if (rng.uniform() < alpha) A.insert(n);
  }
  return A;
}

const SmoothWeight& weight24() {
  static const SmoothWeight w(24, 1 << 16);
  return w;
}

}  // namespace

TEST_CASE("smooth weight examples") {
  const SmoothWeight& w = weight24();
  CHECK(w(-0.1) == 0);
  CHECK(w(1.1) == 0);
  CHECK(w(0.5) == doctest::Approx(1));
  CHECK(w(0.25) >= 0.5);
  CHECK(w(0.75) >= 0.5);
}

TEST_CASE("smooth weight grid invariants") {
  const SmoothWeight& w = weight24();
  const auto& g = w.grid();
  REQUIRE(g.size() == static_cast<std::size_t>(w.resolution()) + 1);
  CHECK(g.front() == 0);
  CHECK(g.back() == 0);
  double mx = 0;
  for (double v : g) {
    CHECK(v >= 0);
    CHECK(v <= 1);
    mx = std::max(mx, v);
  }
  CHECK(mx == 1);
  // Symmetric about 1/2.
  for (std::size_t i = 0; i < g.size(); i += 97) CHECK(g[i] == g[g.size() - 1 - i]);
}

TEST_CASE("weight Fourier transform: mass and triangle inequality") {
  const SmoothWeight& w = weight24();
  const double w0 = std::abs(w.fourier(0));
  CHECK(w0 == doctest::Approx(w.integral()));
  CHECK(w0 > 0);
  CHECK(w0 <= 1);
  for (double t = 0.5; t < 100; t += 0.75) CHECK(std::abs(w.fourier(t)) <= w0 + 1e-12);
}

TEST_CASE("weight audit at K = 24 to t = 400") {
  const WeightAuditReport r = weight_fourier_audit(weight24(), 400);
  CHECK(std::isfinite(r.fitted_C));
  CHECK(r.fitted_C > 0);
  CHECK(r.violations == 0);
  CHECK_THROWS_AS(weight_fourier_audit(weight24(), 1e6), Error);
  // The envelope uses the fitted constant, so every grid point is under it.
  for (std::size_t i = 0; i < r.t.size(); ++i) {
    CHECK(r.magnitude[i] <= r.fitted_C * std::exp(-std::sqrt(r.t[i] / 2)) * (1 + 1e-12));
  }
}

TEST_CASE("g_build examples") {
  const SmoothWeight& w = weight24();
  const SieveTable t(IntPoly{0, 0, 1}, 2);
  const WeightedImage g = g_build(t, 100, w);
  CHECK(g.at(25) == doctest::Approx(20 * w(0.25)));
  CHECK(g.at(-25) == doctest::Approx(20 * w(0.25)));
  CHECK(g.at(16) == 0);
  CHECK(g.at(3) == 0);
  std::vector<std::uint64_t> support;
  for (const auto& p : g.points()) support.push_back(p.value);
  CHECK(support == std::vector<std::uint64_t>{1, 9, 25, 49, 81});
  CHECK(g.fourier(0.0) == doctest::Approx(g.mass()));
}

TEST_CASE("fourier_point examples") {
  AvoidingSet evens(100), single(100);
  for (std::uint64_t n = 2; n <= 100; n += 2) evens.insert(n);
  single.insert(1);
  const Signal se = indicator_signal(evens), s1 = indicator_signal(single);
  CHECK(std::abs(fourier_point(se, 0.0) - Complex(50, 0)) < 1e-12);
  CHECK(std::abs(fourier_point(se, 0.5) - Complex(50, 0)) < 1e-9);
  for (double th : {0.1, 0.37, 0.999}) CHECK(std::abs(fourier_point(s1, th)) == doctest::Approx(1));
}

TEST_CASE("fourier_point agrees with the naive sum") {
  const AvoidingSet A = random_set(3000, 0.3, 5);
  const Signal s = indicator_signal(A);
  Rng rng(6);
  for (int i = 0; i < 40; ++i) {
    const double th = rng.uniform();
    CHECK(std::abs(fourier_point(s, th) - naive_fourier(A.members(), th)) < 1e-8);
  }
}

TEST_CASE("fourier_grid examples and cross-check") {
  AvoidingSet full(64);
  for (std::uint64_t n = 1; n <= 64; ++n) full.insert(n);
  const Spectrum sp = fourier_grid(indicator_signal(full), 256);
  CHECK(std::abs(sp.values[0] - Complex(64, 0)) < 1e-9);

  const AvoidingSet A = random_set(10000, 0.2, 9);
  const Signal s = indicator_signal(A);
  const std::size_t N = 1 << 15;
  const Spectrum g = fourier_grid(s, N);
  Rng rng(10);
  for (int i = 0; i < 64; ++i) {
    const std::size_t j = rng.below(N);
    const Complex direct = fourier_point(s, static_cast<double>(j) / N);
    CHECK(std::abs(g.values[j] - direct) <= 1e-9 * std::abs(direct));
  }

  const WeightedImage gi = g_build(SieveTable(IntPoly{0, 0, 1}, 2), 1000, weight24());
  const Spectrum gs = fourier_grid(gi.signal(), 4096);
  CHECK(gs.values[0].real() == doctest::Approx(gi.mass()));
  CHECK_THROWS_AS(fourier_grid(s, 100), Error);
}

TEST_CASE("subgroup Parseval") {
  const AvoidingSet A = random_set(2000, 0.25, 12);
  const Signal s = indicator_signal(A);
  for (std::uint64_t q : {1ULL, 2ULL, 7ULL, 12ULL, 64ULL}) {
    double lhs = 0;
    for (std::uint64_t a = 0; a < q; ++a) lhs += std::norm(fourier_point(s, a, q, 0.0));
    std::vector<double> c(q, 0);
    for (auto x : A.members()) c[x % q] += 1;
    double rhs = 0;
    for (double v : c) rhs += v * v;
    rhs *= static_cast<double>(q);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("gauss_sum_sieved examples") {
  const SieveTable t(IntPoly{0, 0, 1}, 2);
  CHECK(std::abs(gauss_sum_sieved(t, 1, 5)) == doctest::Approx(std::sqrt(5.0)));
  const Complex g4 = gauss_sum_sieved(t, 1, 4);
  CHECK(std::abs(g4 - Complex(0, 2)) < 1e-12);
  CHECK(std::abs(gauss_sum_sieved(t, 0, 1) - Complex(1, 0)) < 1e-12);
}

TEST_CASE("classical quadratic Gauss sums have modulus sqrt(p)") {
  const SieveTable t(IntPoly{0, 0, 1}, 2);
  for (std::uint64_t p : primes_up_to(200)) {
    if (p == 2) continue;
    for (std::uint64_t a : std::vector<std::uint64_t>{1, 2, p - 1}) {
      if (a % p == 0) continue;
      CHECK(std::abs(gauss_sum_sieved(t, a, p)) == doctest::Approx(std::sqrt(static_cast<double>(p))).epsilon(1e-12));
    }
  }
}

TEST_CASE("weyl_sum_audit examples") {
  const SieveTable t(IntPoly{0, 0, 1}, 2);
  const WeylReport r = weyl_sum_audit(t, 10000, {0.0, 0.5}, 50.0);
  std::uint64_t count = 0;
  for (std::uint64_t n = 1; n <= 10000; ++n) count += t.in_W(n) ? 1 : 0;
  CHECK(r.count_W == count);
  REQUIRE(r.samples.size() == 2);
  CHECK(r.samples[0].magnitude == doctest::Approx(static_cast<double>(count)));
  CHECK(r.samples[1].magnitude == doctest::Approx(static_cast<double>(count)));

  const WeylReport gr = weyl_sum_audit(t, 100000, {0.6180339887498949}, 100.0);
  CHECK(gr.samples[0].magnitude < static_cast<double>(gr.count_W));
  CHECK(std::isfinite(gr.samples[0].rhs));
}

TEST_CASE("rational_approx examples") {
  const RationalApprox a = rational_approx(0.5, 10);
  CHECK(a.a == 1);
  CHECK(a.q == 2);
  CHECK(a.delta == 0);
  const RationalApprox b = rational_approx(M_PI - 3, 10);
  CHECK(b.a == 1);
  CHECK(b.q == 7);
  CHECK(b.delta == doctest::Approx(0.00126).epsilon(0.01));
  const RationalApprox c = rational_approx(16.0 / 113.0, 200);
  CHECK(c.a == 16);
  CHECK(c.q == 113);
  CHECK(c.delta < 1e-15);
}

TEST_CASE("rational_approx meets the Dirichlet bound") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const double th = rng.uniform();
    const long Q = 1 + static_cast<long>(rng.below(5000));
    const RationalApprox r = rational_approx(th, Q);
    CHECK(r.q >= 1);
    CHECK(r.q <= Q);
    CHECK(r.delta <= 1.0 / (r.q.get_d() * (Q + 1)) + 1e-15);
  }
}

TEST_CASE("classify_arc examples") {
  ArcParams p = ArcParams::make(0.1, 1, 10, 1e6);
  const ArcClass zero = classify_arc(0.0, p);
  CHECK(zero.major);
  CHECK(zero.q == 1);
  CHECK(zero.a == 0);

  const ArcClass half = classify_arc(0.5 + p.tau / 2, p);
  CHECK(half.major);
  CHECK(half.q == 2);
  CHECK(half.a == 1);

  ArcParams tight = p;
  tight.Qmax = 2;
  tight.tau = 1e-6;
  CHECK_FALSE(classify_arc(0.5 + 2 * tight.tau, tight).major);
}

TEST_CASE("major_arc_predict examples") {
  const SmoothWeight& w = weight24();
  const SieveTable t(IntPoly{0, 0, 1}, 2);
  const MajorArcReport r = major_arc_predict(t, 100000, w, 0, 1, 0, false);
  REQUIRE(r.ratio.has_value());
  CHECK(*r.ratio == doctest::Approx(1).epsilon(1e-6));
  CHECK(r.measured == doctest::Approx(g_build(t, 100000, w).mass()));

  // q = 4: the main term's real part vanishes, so compare on the g^(0)/q scale.
  const MajorArcReport r4 = major_arc_predict(t, 1000000, w, 1, 4, 0, false);
  CHECK_FALSE(r4.hyp_q);
  CHECK(r4.scaled_error < 0.1);
  CHECK_THROWS_AS(major_arc_predict(t, 1000000, w, 1, 4, 0, true), Error);

  // At the radius boundary the w^ factor suppresses the prediction.
  const double theta = 1.0 / 100000 * 3;
  const MajorArcReport rb = major_arc_predict(t, 100000, w, 0, 1, theta, false);
  CHECK(std::fabs(rb.predicted) < 0.05 * r.predicted);
  CHECK(rb.scaled_error < 0.05);
}

TEST_CASE("minor_arc_audit excludes major frequencies and reports a margin") {
  const SieveTable t(IntPoly{0, 0, 1}, 2);
  const WeightedImage g = g_build(t, 20000, weight24());
  const ArcParams p = ArcParams::make(0.5, 1, 10, 20000);
  const MinorArcReport r = minor_arc_audit(g, p, 2);
  CHECK(r.threshold == doctest::Approx(0.5 * 20000 / 512.0));
  CHECK(r.margin == doctest::Approx(r.threshold - r.sup));
  CHECK(r.minor_count <= r.sampled);
  CHECK_FALSE(classify_arc(r.sup_at, p).major);
}

TEST_CASE("golden-ratio probe is small next to g^(0)") {
  const SieveTable t(IntPoly{0, 0, 1}, 2);
  const WeightedImage g5 = g_build(t, 100000, weight24());
  CHECK(std::fabs(g5.fourier(0.6180339887498949)) < 0.2 * g5.mass());
  const WeightedImage g6 = g_build(t, 1000000, weight24());
  CHECK(std::fabs(g6.fourier(0.6180339887498949)) < 0.05 * g6.mass());
}

TEST_CASE("initial_mass examples") {
  const ArcParams p = ArcParams::make(1.0 / 3, 1, 10, 300);
  CHECK(initial_mass(AvoidingSet(300), 0, p) == 0);

  AvoidingSet A(300);
  for (std::uint64_t n = 3; n <= 300; n += 3) A.insert(n);
  const MassProfile prof = initial_mass_profile(A, 0, p);
  REQUIRE(prof.R.size() > 3);
  CHECK(prof.R[3] == doctest::Approx(2 * 100.0 * 100.0));
  CHECK(initial_mass(A, 0, p) == doctest::Approx(initial_mass_direct(A, 0, p)).epsilon(1e-9));

  AvoidingSet full(300);
  for (std::uint64_t n = 1; n <= 300; ++n) full.insert(n);
  const ArcParams pf = ArcParams::make(0.99, 1, 10, 300);
  const double m = initial_mass(full, 0, pf);
  CHECK(m < 0.01 * 300.0 * 300.0 * 300.0);
  CHECK(m == doctest::Approx(initial_mass_direct(full, 0, pf)).epsilon(1e-9));
}

TEST_CASE("initial_mass profile matches direct evaluation off zero") {
  const AvoidingSet A = random_set(500, 0.3, 21);
  const ArcParams p = ArcParams::make(A.alpha(), 1, 10, 500);
  for (double xi : {0.0, 0.001, -0.0007}) {
    CHECK(initial_mass(A, xi, p) == doctest::Approx(initial_mass_direct(A, xi, p)).epsilon(1e-8));
  }
}
