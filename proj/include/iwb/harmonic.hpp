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

// Smooth weight, weighted image g, exponential sums and the arc
// machinery. Fourier convention: f^(theta) = sum_n f(n) e(-n theta) with
// e(x) = exp(2 pi i x). Phases are reduced mod 1 exactly before any
// floating-point work.

#ifndef IWB_HARMONIC_HPP
#define IWB_HARMONIC_HPP

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "iwb/avoiding_set.hpp"
#include "iwb/polycore.hpp"
#include "iwb/sieve.hpp"

namespace iwb {

using Complex = std::complex<double>;

/// frac(v * theta) in [0, 1), computed from the exact binary value of theta.
double frac_mul(std::uint64_t v, double theta);
double frac_mul(const mpz_class& v, double theta);
/// e(x) for x already reduced mod 1.
Complex e_frac(double x);

/// Compensated complex accumulator (Neumaier).
class ComplexSum {
 public:
  void add(Complex z);
  Complex value() const { return {re_ + cre_, im_ + cim_}; }

 private:
  static void step(double& s, double& c, double x);
  double re_ = 0, cre_ = 0, im_ = 0, cim_ = 0;
};

class SmoothWeight {
 public:
  /// Convolution of K box densities of widths a_j = a0/(j+1)^2 (summing to
  /// 1), divided by its central value and clipped into [0, 1].
  SmoothWeight(int K, int resolution);

  int depth() const { return K_; }
  int resolution() const { return R_; }
  const std::vector<double>& grid() const { return grid_; }  // w(i/R), i = 0..R
  const std::vector<double>& widths() const { return widths_; }
  double peak_raw() const { return peak_raw_; }

  double operator()(double x) const;
  double integral() const;
  /// w^(t) = int w(x) e(-x t) dx by quadrature on the grid.
  Complex fourier(double t) const;
  /// Product formula e(-t/2) prod_j sinc(pi t a_j) / peak_raw.
  Complex fourier_closed_form(double t) const;

 private:
  int K_;
  int R_;
  std::vector<double> widths_;
  std::vector<double> grid_;
  double peak_raw_ = 0;
};

/// Largest t for which the truncated product bound still sits below
/// e^{-sqrt(t/2)}; audits above it measure truncation, not decay.
double weight_decay_limit(const SmoothWeight& w);

struct WeightAuditReport {
  double t_max = 0;
  double step = 0.125;
  double fitted_C = 0;  // max |w^(t)| e^{sqrt(t/2)} over [0, t_max]
  double head_C = 0;    // same, over [0, t_max/2]
  int violations = 0;   // points in (t_max/2, t_max] above head_C * envelope
  std::vector<double> t;
  std::vector<double> magnitude;
  nlohmann::json to_json(bool with_samples = false) const;
};

WeightAuditReport weight_fourier_audit(const SmoothWeight& w, double t_max);

/// Finitely supported real function on Z. Empty weights mean weight 1.
struct Signal {
  std::vector<std::int64_t> points;
  std::vector<double> weights;
  double weight(std::size_t i) const { return weights.empty() ? 1.0 : weights[i]; }
  double mass() const;
  std::int64_t max_abs() const;
};

Signal indicator_signal(const AvoidingSet& A);

struct ImagePoint {
  std::uint64_t n = 0;
  std::uint64_t value = 0;  // h(n)
  double weight = 0;        // J h'(n) w(h(n)/X)
};

/// g(x) = J h'(n) w(h(n)/X) at x = +-h(n), n in W(U), h(n) <= X.
class WeightedImage {
 public:
  WeightedImage(std::uint64_t X, double J, std::vector<ImagePoint> points);
  std::uint64_t X() const { return X_; }
  double J() const { return J_; }
  const std::vector<ImagePoint>& points() const { return points_; }
  double mass() const;
  double at(std::int64_t x) const;
  Signal signal() const;
  /// g^(a/q + theta) = 2 sum weight cos(2 pi v (a/q + theta)).
  double fourier(double theta) const;
  double fourier(std::uint64_t a, std::uint64_t q, double theta) const;
  nlohmann::json to_json() const;

 private:
  std::uint64_t X_;
  double J_;
  std::vector<ImagePoint> points_;
};

WeightedImage g_build(const SieveTable& table, std::uint64_t X, const SmoothWeight& w);

Complex fourier_point(const Signal& f, double theta);
/// f^(a/q + theta) with the a/q phase reduced exactly.
Complex fourier_point(const Signal& f, std::uint64_t a, std::uint64_t q, double theta);

struct Spectrum {
  std::size_t N = 0;
  std::vector<Complex> values;  // f^(j/N)
  void write_csv(std::ostream& os) const;
};

/// out[j] = sum_r in[r] e(-r j / n).
std::vector<Complex> complex_dft(std::vector<Complex> in);

/// FFT evaluation at j/N; requires N >= 2 max|support| + 1.
Spectrum fourier_grid(const Signal& f, std::size_t N);

/// sum_{s mod q, s in W^q(U)} e(h(s) a / q).
Complex gauss_sum_sieved(const SieveTable& table, std::uint64_t a, std::uint64_t q);

struct HarmonicParams {
  double X = 0;
  double U = 0;  // exp(sqrt(log X))
  double Z = 0;  // exp((log X)^{7/8})
  int K = 0;     // 2^k
  double Y = 0;  // h(Y) = X
  double Y_leading = 0;  // (X / b_k)^{1/k}
  static HarmonicParams make(const IntPoly& aux, double X);
  nlohmann::json to_json() const;
};

/// Real root of h(y) = X on [1, inf) for h increasing there.
double solve_level(const IntPoly& aux, double X);

struct RationalApprox {
  mpz_class a;
  mpz_class q;
  double delta = 0;  // |theta - a/q| with theta reduced into [0, 1)
  nlohmann::json to_json() const;
};

/// Last continued-fraction convergent of frac(theta) with q <= Qmax.
RationalApprox rational_approx(double theta, const mpz_class& Qmax);

struct ArcParams {
  double alpha = 0;
  double epsilon = 1;
  double C1 = 10;
  double X = 0;
  double L = 0;
  double tau = 0;
  std::uint64_t Qmax = 0;
  /// tau = C1 L^2 / X, Qmax = floor(C1 alpha^{-2-eps}), L = ln(1/alpha).
  static ArcParams make(double alpha, double epsilon, double C1, double X);
  void validate() const;
  nlohmann::json to_json() const;
};

struct ArcClass {
  bool major = false;
  std::uint64_t a = 0;
  std::uint64_t q = 0;
  nlohmann::json to_json() const;
};

/// Major(q, a) for the least q <= Qmax with |theta - a/q| <= tau (mod 1).
ArcClass classify_arc(double theta, const ArcParams& params);

struct WeylSample {
  double theta = 0;
  std::uint64_t a = 0, q = 0;
  double magnitude = 0;
  double rhs = 0;
  double ratio = 0;
};

struct WeylReport {
  std::uint64_t N = 0;
  double U = 0, Z = 0;
  std::uint64_t count_W = 0;
  std::vector<WeylSample> samples;
  double max_ratio = 0;
  nlohmann::json to_json() const;
};

/// |sum_{n <= N, n in W(U)} e(theta h(n))| against the Weyl-type right side
/// N (log U)^{e k} (e^{-log Z/log U} + (b_k log^{k^2}(b_k q N)(1/q + Z/N + q Z^k/(b_k N^k)))^{1/K}).
WeylReport weyl_sum_audit(const SieveTable& table, std::uint64_t N, const std::vector<double>& thetas,
                          std::optional<double> Z = std::nullopt);

/// Per-denominator mass R(q) = sum_{(a,q)=1} |1_A^(a/q + xi)|^2 for q <= Qmax,
/// via sum_{a mod q} |.|^2 = q sum_r |c_r|^2 and Moebius inversion.
struct MassProfile {
  double xi = 0;
  std::vector<double> R;  // index q, entries 0 and 1 unused beyond R[1]
  double total = 0;       // sum_{2 <= q <= Qmax} q^{-1/(2+eps)} R(q)
};

MassProfile initial_mass_profile(const AvoidingSet& A, double xi, const ArcParams& params);
double initial_mass(const AvoidingSet& A, double xi, const ArcParams& params);
/// Same sum evaluated term by term with fourier_point.
double initial_mass_direct(const AvoidingSet& A, double xi, const ArcParams& params);

struct MajorArcReport {
  std::uint64_t a = 0, q = 0;
  double theta = 0;
  double X = 0;
  double measured = 0;
  double predicted = 0;
  std::optional<double> ratio;  // absent when the prediction vanishes
  double scale = 0;             // g^(0) / q
  double scaled_error = 0;      // |measured - predicted| / scale
  bool hyp_q = false;           // q <= X^{1/8k}
  bool hyp_theta = false;       // |theta| <= X^{-(1 - 1/8k)}
  Complex w_hat;
  Complex gauss;
  nlohmann::json to_json() const;
};

/// Main term J (2X/q) Re[w^(theta X) prod' conj(G(a, q))]. With `enforce`,
/// violated hypotheses raise kHypothesisViolation; otherwise they are flagged.
MajorArcReport major_arc_predict(const SieveTable& table, std::uint64_t X, const SmoothWeight& w, std::uint64_t a,
                                 std::uint64_t q, double theta, bool enforce);

struct MinorArcOptions {
  std::size_t grid_factor = 1;          // grid N = grid_factor * (2X + 1) rounded up
  std::uint64_t adversarial_q_max = 64;  // a/q + 1.5 tau probes for q <= this
  double hypothesis_constant = 1.0;      // alpha >= c (log X)^{ek} exp(-(log X)^{3/8})
};

struct MinorArcReport {
  double alpha = 0;
  double X = 0;
  double threshold = 0;   // 2^{-9} alpha X
  double sup = 0;         // over sampled minor-arc frequencies
  double sup_at = 0;
  std::uint64_t sampled = 0;
  std::uint64_t minor_count = 0;
  double margin = 0;      // threshold - sup
  bool clears = false;
  bool hypothesis_alpha = false;
  double mass = 0;        // g^(0)
  std::vector<std::pair<double, double>> probes;  // (xi, |g^(xi)|) for fixed probe points
  nlohmann::json to_json() const;
};

MinorArcReport minor_arc_audit(const WeightedImage& g, const ArcParams& params, int degree,
                               const MinorArcOptions& opts = {});

}  // namespace iwb

#endif  // IWB_HARMONIC_HPP
