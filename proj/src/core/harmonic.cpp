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

#include "iwb/harmonic.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <ostream>

#include "iwb/errors.hpp"
#include "iwb/format.hpp"
#include "iwb/numtheory.hpp"

namespace iwb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// FFTW planning is not thread-safe.
std::mutex& fftw_mutex() {
  static std::mutex mu;
  return mu;
}

// Forward real-to-complex DFT of `in`; returns the full length-n spectrum.
std::vector<Complex> real_dft(std::vector<double> in) {
  const std::size_t n = in.size();
  std::vector<Complex> out(n);
  if (n == 0) return out;
  const std::size_t half = n / 2 + 1;
  fftw_complex* buf = fftw_alloc_complex(half);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), buf, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  for (std::size_t j = 0; j < half; ++j) out[j] = {buf[j][0], buf[j][1]};
  for (std::size_t j = half; j < n; ++j) out[j] = std::conj(out[n - j]);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
  return out;
}

}  // namespace

std::vector<Complex> complex_dft(std::vector<Complex> in) {
  const std::size_t n = in.size();
  std::vector<Complex> out(n);
  if (n == 0) return out;
  auto* src = reinterpret_cast<fftw_complex*>(in.data());
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), src, dst, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

namespace {

void neumaier(double& s, double& c, double x) {
  const double t = s + x;
  if (std::fabs(s) >= std::fabs(x)) {
    c += (s - t) + x;
  } else {
    c += (x - t) + s;
  }
  s = t;
}

double sinc(double y) { return y == 0 ? 1.0 : std::sin(y) / y; }

// theta = M * 2^E exactly, M odd or zero handled by caller.
void decompose(double theta, std::int64_t& M, int& E) {
  int ex = 0;
  const double m = std::frexp(theta, &ex);
  M = static_cast<std::int64_t>(std::ldexp(m, 53));
  E = ex - 53;
}

std::uint64_t gcd_checked(std::uint64_t a, std::uint64_t q) { return gcd_u64(a % q, q); }

}  // namespace

double frac_mul(std::uint64_t v, double theta) {
  if (v == 0 || theta == 0) return 0.0;
  std::int64_t M = 0;
  int E = 0;
  decompose(theta, M, E);
  if (E >= 0) return 0.0;
  const int s = -E;
  const unsigned __int128 prod = static_cast<unsigned __int128>(v) *
                                 static_cast<unsigned __int128>(M < 0 ? -M : M);
  double f;
  if (s >= 127) {
    f = std::ldexp(static_cast<double>(prod), -s);
  } else {
    const unsigned __int128 mask = (static_cast<unsigned __int128>(1) << s) - 1;
    f = std::ldexp(static_cast<double>(prod & mask), -s);
  }
  if (M < 0 && f != 0) f = 1.0 - f;
  return f >= 1.0 ? 0.0 : f;
}

double frac_mul(const mpz_class& v, double theta) {
  if (sgn(v) < 0) return frac_mul(mpz_class(-v), -theta);
  if (fits_u64(v)) return frac_mul(to_u64(v), theta);
  if (theta == 0) return 0.0;
  std::int64_t M = 0;
  int E = 0;
  decompose(theta, M, E);
  if (E >= 0) return 0.0;
  const auto s = static_cast<mp_bitcnt_t>(-E);
  mpz_class r;
  mpz_fdiv_r_2exp(r.get_mpz_t(), v.get_mpz_t(), s);
  r *= static_cast<long>(M < 0 ? -M : M);
  mpz_fdiv_r_2exp(r.get_mpz_t(), r.get_mpz_t(), s);
  double f = std::ldexp(mpz_get_d(r.get_mpz_t()), -static_cast<int>(s));
  if (M < 0 && f != 0) f = 1.0 - f;
  return f >= 1.0 ? 0.0 : f;
}

Complex e_frac(double x) { return {std::cos(kTwoPi * x), std::sin(kTwoPi * x)}; }

void ComplexSum::step(double& s, double& c, double x) { neumaier(s, c, x); }

void ComplexSum::add(Complex z) {
  step(re_, cre_, z.real());
  step(im_, cim_, z.imag());
}

// ---------------------------------------------------------------------------
// Smooth weight

SmoothWeight::SmoothWeight(int K, int resolution) : K_(K), R_(resolution) {
  if (K < 2) fail(ErrorCode::kInvalidArgument, "smooth weight: K must be >= 2");
  if (resolution < 1024 || resolution % 2 != 0) {
    fail(ErrorCode::kInvalidArgument, "smooth weight: resolution must be even and >= 2^10");
  }
  double harmonic = 0;
  for (int j = 0; j < K; ++j) harmonic += 1.0 / ((j + 1.0) * (j + 1.0));
  const double a0 = 1.0 / harmonic;
  for (int j = 0; j < K; ++j) widths_.push_back(a0 / ((j + 1.0) * (j + 1.0)));

  const auto R = static_cast<std::size_t>(R_);
  const double h = 1.0 / R_;
  std::vector<double> f(R + 1);
  // Two boxes in closed form: a trapezoid.
  const double a = widths_[0];
  const double b = widths_[1];
  for (std::size_t i = 0; i <= R; ++i) {
    const double x = static_cast<double>(i) * h;
    f[i] = std::max(0.0, std::min(a, x) - std::max(0.0, x - b)) / (a * b);
  }
  std::vector<double> F(R + 1);
  for (int j = 2; j < K; ++j) {
    F[0] = 0;
    for (std::size_t i = 1; i <= R; ++i) F[i] = F[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
    const double aj = widths_[static_cast<std::size_t>(j)];
    auto cum = [&](double y) {
      if (y <= 0) return 0.0;
      const double pos = y * R_;
      const auto i0 = static_cast<std::size_t>(pos);
      if (i0 >= R) return F[R];
      const double t = pos - static_cast<double>(i0);
      return F[i0] + t * (F[i0 + 1] - F[i0]);
    };
    for (std::size_t i = 0; i <= R; ++i) {
      const double x = static_cast<double>(i) * h;
      f[i] = (F[i] - cum(x - aj)) / aj;
    }
  }
  // One-sided quadrature drifts; the exact weight is symmetric about 1/2.
  for (std::size_t i = 0; i < R / 2; ++i) f[i] = f[R - i] = 0.5 * (f[i] + f[R - i]);
  peak_raw_ = f[R / 2];
  grid_.resize(R + 1);
  for (std::size_t i = 0; i <= R; ++i) grid_[i] = std::clamp(f[i] / peak_raw_, 0.0, 1.0);
  grid_[0] = 0;
  grid_[R] = 0;
}

double SmoothWeight::operator()(double x) const {
  if (!(x > 0) || !(x < 1)) return 0.0;
  const double pos = x * R_;
  const auto i0 = static_cast<std::size_t>(pos);
  if (i0 >= static_cast<std::size_t>(R_)) return 0.0;
  const double t = pos - static_cast<double>(i0);
  return grid_[i0] + t * (grid_[i0 + 1] - grid_[i0]);
}

double SmoothWeight::integral() const {
  double s = 0, c = 0;
  for (double v : grid_) neumaier(s, c, v);
  return (s + c) / R_;
}

Complex SmoothWeight::fourier(double t) const {
  ComplexSum acc;
  for (std::size_t i = 1; i < grid_.size() - 1; ++i) {
    if (grid_[i] == 0) continue;
    const double x = static_cast<double>(i) / R_;
    double ph = x * t;
    ph -= std::floor(ph);
    acc.add(grid_[i] * e_frac(-ph));
  }
  return acc.value() / static_cast<double>(R_);
}

Complex SmoothWeight::fourier_closed_form(double t) const {
  double mag = 1.0 / peak_raw_;
  for (double a : widths_) mag *= sinc(std::numbers::pi * t * a);
  double ph = 0.5 * t;
  ph -= std::floor(ph);
  return mag * e_frac(-ph);
}

double weight_decay_limit(const SmoothWeight& w) {
  const auto& a = w.widths();
  double t = 1.0 / (std::numbers::pi * a.back());
  for (; t < 1e12; t *= 1.01) {
    double logs = 0;
    for (double aj : a) logs += std::log(std::numbers::pi * t * aj);
    if (logs < std::sqrt(t / 2)) return t;
  }
  return t;
}

nlohmann::json WeightAuditReport::to_json(bool with_samples) const {
  nlohmann::json j = {{"t_max", t_max},   {"step", step},         {"fitted_C", fitted_C},
                      {"head_C", head_C}, {"violations", violations}, {"samples", t.size()}};
  if (with_samples) {
    j["t"] = t;
    j["magnitude"] = magnitude;
  }
  return j;
}

WeightAuditReport weight_fourier_audit(const SmoothWeight& w, double t_max) {
  if (!(t_max > 0)) fail(ErrorCode::kInvalidArgument, "weight audit: t_max must be positive");
  const double limit = weight_decay_limit(w);
  if (t_max >= limit) {
    fail(ErrorCode::kInvalidArgument, "weight audit: t_max " + fmt17(t_max) + " beyond decay range " + fmt17(limit) +
                                          " for K=" + std::to_string(w.depth()));
  }
  constexpr int kPad = 8;
  const auto R = static_cast<std::size_t>(w.resolution());
  const std::size_t n = kPad * R;
  const auto m_max = static_cast<std::size_t>(std::floor(t_max * kPad));
  if (m_max >= n / 2) fail(ErrorCode::kGridTooSmall, "weight audit: t_max above grid Nyquist limit");
  std::vector<double> in(n, 0.0);
  for (std::size_t i = 0; i < R; ++i) in[i] = w.grid()[i];
  const std::vector<Complex> spec = real_dft(std::move(in));

  WeightAuditReport rep;
  rep.t_max = t_max;
  rep.step = 1.0 / kPad;
  for (std::size_t m = 0; m <= m_max; ++m) {
    const double t = static_cast<double>(m) / kPad;
    const double mag = std::abs(spec[m]) / static_cast<double>(R);
    rep.t.push_back(t);
    rep.magnitude.push_back(mag);
    const double c = mag * std::exp(std::sqrt(t / 2));
    rep.fitted_C = std::max(rep.fitted_C, c);
    if (t <= t_max / 2) rep.head_C = std::max(rep.head_C, c);
  }
  for (std::size_t i = 0; i < rep.t.size(); ++i) {
    if (rep.t[i] > t_max / 2 && rep.magnitude[i] > rep.head_C * std::exp(-std::sqrt(rep.t[i] / 2))) {
      ++rep.violations;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Signals and weighted images

double Signal::mass() const {
  if (weights.empty()) return static_cast<double>(points.size());
  double s = 0, c = 0;
  for (double w : weights) neumaier(s, c, w);
  return s + c;
}

std::int64_t Signal::max_abs() const {
  std::int64_t m = 0;
  for (auto p : points) m = std::max(m, p < 0 ? -p : p);
  return m;
}

Signal indicator_signal(const AvoidingSet& A) {
  Signal s;
  for (auto n : A.members()) s.points.push_back(static_cast<std::int64_t>(n));
  return s;
}

WeightedImage::WeightedImage(std::uint64_t X, double J, std::vector<ImagePoint> points)
    : X_(X), J_(J), points_(std::move(points)) {}

double WeightedImage::mass() const {
  double s = 0, c = 0;
  for (const auto& p : points_) neumaier(s, c, 2 * p.weight);
  return s + c;
}

double WeightedImage::at(std::int64_t x) const {
  const std::uint64_t v = static_cast<std::uint64_t>(x < 0 ? -x : x);
  auto it = std::lower_bound(points_.begin(), points_.end(), v,
                             [](const ImagePoint& p, std::uint64_t val) { return p.value < val; });
  return (it != points_.end() && it->value == v) ? it->weight : 0.0;
}

Signal WeightedImage::signal() const {
  Signal s;
  for (const auto& p : points_) {
    s.points.push_back(static_cast<std::int64_t>(p.value));
    s.weights.push_back(p.weight);
    s.points.push_back(-static_cast<std::int64_t>(p.value));
    s.weights.push_back(p.weight);
  }
  return s;
}

double WeightedImage::fourier(double theta) const {
  double s = 0, c = 0;
  for (const auto& p : points_) neumaier(s, c, 2 * p.weight * std::cos(kTwoPi * frac_mul(p.value, theta)));
  return s + c;
}

double WeightedImage::fourier(std::uint64_t a, std::uint64_t q, double theta) const {
  if (q == 0) fail(ErrorCode::kInvalidArgument, "fourier: q must be positive");
  double s = 0, c = 0;
  for (const auto& p : points_) {
    const auto r = static_cast<std::uint64_t>((static_cast<unsigned __int128>(p.value % q) * (a % q)) % q);
    double ph = static_cast<double>(r) / static_cast<double>(q) + frac_mul(p.value, theta);
    ph -= std::floor(ph);
    neumaier(s, c, 2 * p.weight * std::cos(kTwoPi * ph));
  }
  return s + c;
}

nlohmann::json WeightedImage::to_json() const {
  return {{"X", X_}, {"J", J_}, {"support_size", 2 * points_.size()}, {"mass", mass()}};
}

WeightedImage g_build(const SieveTable& table, std::uint64_t X, const SmoothWeight& w) {
  if (X < 1) fail(ErrorCode::kInvalidArgument, "g_build: X must be positive");
  const IntPoly& h = table.aux();
  const IntPoly& d = table.derivative();
  const double J = table.J_factor().get_d();
  const mpz_class Xz = to_mpz(X);
  std::vector<ImagePoint> pts;
  mpz_class prev;
  for (std::uint64_t n = 1;; ++n) {
    const mpz_class v = h(to_mpz(n));
    if (n == 1 && v < 0) fail(ErrorCode::kDomain, "g_build: h(1) < 0; normalize the polynomial first");
    if (n > 1 && v <= prev) fail(ErrorCode::kDomain, "g_build: h is not increasing on N");
    prev = v;
    if (v > Xz) break;
    if (v == 0 || !table.in_W(n)) continue;
    const std::uint64_t vv = to_u64(v);
    const double weight = J * d(to_mpz(n)).get_d() * w(static_cast<double>(vv) / static_cast<double>(X));
    pts.push_back({n, vv, weight});
  }
  return WeightedImage(X, J, std::move(pts));
}

Complex fourier_point(const Signal& f, double theta) {
  ComplexSum acc;
  for (std::size_t i = 0; i < f.points.size(); ++i) {
    const std::int64_t n = f.points[i];
    const double ph = n >= 0 ? frac_mul(static_cast<std::uint64_t>(n), theta)
                             : frac_mul(static_cast<std::uint64_t>(-n), -theta);
    acc.add(f.weight(i) * e_frac(-ph));
  }
  return acc.value();
}

Complex fourier_point(const Signal& f, std::uint64_t a, std::uint64_t q, double theta) {
  if (q == 0) fail(ErrorCode::kInvalidArgument, "fourier_point: q must be positive");
  ComplexSum acc;
  const auto qi = static_cast<__int128>(q);
  for (std::size_t i = 0; i < f.points.size(); ++i) {
    const std::int64_t n = f.points[i];
    __int128 r = (static_cast<__int128>(n) * static_cast<__int128>(a % q)) % qi;
    if (r < 0) r += qi;
    const double off = n >= 0 ? frac_mul(static_cast<std::uint64_t>(n), theta)
                              : frac_mul(static_cast<std::uint64_t>(-n), -theta);
    double ph = static_cast<double>(r) / static_cast<double>(q) + off;
    ph -= std::floor(ph);
    acc.add(f.weight(i) * e_frac(-ph));
  }
  return acc.value();
}

void Spectrum::write_csv(std::ostream& os) const {
  os << "j,re,im,magnitude\n";
  for (std::size_t j = 0; j < values.size(); ++j) {
    os << j << ',' << fmt17(values[j].real()) << ',' << fmt17(values[j].imag()) << ','
       << fmt17(std::abs(values[j])) << '\n';
  }
}

Spectrum fourier_grid(const Signal& f, std::size_t N) {
  const auto need = static_cast<std::size_t>(2 * f.max_abs() + 1);
  if (N < need) {
    fail(ErrorCode::kGridTooSmall,
         "fourier_grid: N=" + std::to_string(N) + " below 2 max|support| + 1 = " + std::to_string(need));
  }
  std::vector<double> a(N, 0.0);
  const auto Ni = static_cast<std::int64_t>(N);
  for (std::size_t i = 0; i < f.points.size(); ++i) {
    std::int64_t idx = f.points[i] % Ni;
    if (idx < 0) idx += Ni;
    a[static_cast<std::size_t>(idx)] += f.weight(i);
  }
  Spectrum s;
  s.N = N;
  s.values = real_dft(std::move(a));
  return s;
}

Complex gauss_sum_sieved(const SieveTable& table, std::uint64_t a, std::uint64_t q) {
  if (q == 0) fail(ErrorCode::kInvalidArgument, "gauss_sum_sieved: q must be positive");
  if (gcd_checked(a, q) != 1) {
    fail(ErrorCode::kInvalidArgument, "gauss_sum_sieved: gcd(a, q) != 1 for a=" + std::to_string(a) +
                                          ", q=" + std::to_string(q));
  }
  std::vector<const SieveEntry*> conds;
  for (const auto& e : table.entries()) {
    if (e.j > 0 && q % e.modulus == 0) conds.push_back(&e);
  }
  const IntPoly& h = table.aux();
  std::vector<std::uint64_t> c(static_cast<std::size_t>(h.degree()) + 1);
  for (int i = 0; i <= h.degree(); ++i) c[i] = mpz_fdiv_ui(h.coeff(i).get_mpz_t(), q);
  ComplexSum acc;
  for (std::uint64_t s = 0; s < q; ++s) {
    bool ok = true;
    for (const SieveEntry* e : conds) {
      if (e->bad[s % e->modulus]) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    unsigned __int128 hv = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) hv = (hv * s + *it) % q;
    const auto r = static_cast<std::uint64_t>((hv * (a % q)) % q);
    acc.add(e_frac(static_cast<double>(r) / static_cast<double>(q)));
  }
  return acc.value();
}

// ---------------------------------------------------------------------------
// Parameters, rational approximation, arcs

double solve_level(const IntPoly& aux, double X) {
  if (!(X >= 1)) fail(ErrorCode::kInvalidArgument, "solve_level: X must be >= 1");
  mpz_class Xz;
  mpz_set_d(Xz.get_mpz_t(), std::floor(X));
  if (aux(1) > Xz) return 1.0;
  mpz_class lo = 1, hi = 2;
  while (aux(hi) <= Xz) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const mpz_class mid = (lo + hi) / 2;
    if (aux(mid) <= Xz) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  auto eval = [&](long double y) {
    long double acc = 0;
    for (int i = aux.degree(); i >= 0; --i) acc = acc * y + static_cast<long double>(aux.coeff(i).get_d());
    return acc;
  };
  long double a = lo.get_d(), b = a + 1;
  for (int it = 0; it < 80; ++it) {
    const long double m = 0.5L * (a + b);
    if (eval(m) <= static_cast<long double>(X)) {
      a = m;
    } else {
      b = m;
    }
  }
  return static_cast<double>(a);
}

HarmonicParams HarmonicParams::make(const IntPoly& aux, double X) {
  if (!(X > std::exp(1.0))) fail(ErrorCode::kInvalidArgument, "HarmonicParams: X must exceed e");
  HarmonicParams p;
  p.X = X;
  const double lx = std::log(X);
  p.U = std::exp(std::sqrt(lx));
  p.Z = std::exp(std::pow(lx, 7.0 / 8.0));
  p.K = 1 << aux.degree();
  p.Y = solve_level(aux, X);
  p.Y_leading = std::pow(X / aux.leading().get_d(), 1.0 / aux.degree());
  return p;
}

nlohmann::json HarmonicParams::to_json() const {
  return {{"X", X}, {"U", U}, {"Z", Z}, {"K", K}, {"Y", Y}, {"Y_leading", Y_leading}};
}

nlohmann::json RationalApprox::to_json() const {
  return {{"a", int_to_json(a)}, {"q", int_to_json(q)}, {"delta", delta}};
}

RationalApprox rational_approx(double theta, const mpz_class& Qmax) {
  if (Qmax < 1) fail(ErrorCode::kInvalidArgument, "rational_approx: Qmax must be >= 1");
  if (!std::isfinite(theta)) fail(ErrorCode::kInvalidArgument, "rational_approx: theta must be finite");
  const mpq_class x(theta - std::floor(theta));
  // Convergents p_n / q_n of the exact continued fraction of x.
  mpz_class p_prev = 1, q_prev = 0, p_cur = 0, q_cur = 1;
  mpq_class rest = x;  // x = [0; rest...]
  mpz_class a_out = 0, q_out = 1;
  if (rest != 0) {
    rest = 1 / rest;
    while (true) {
      mpz_class ai;
      mpz_fdiv_q(ai.get_mpz_t(), rest.get_num_mpz_t(), rest.get_den_mpz_t());
      const mpz_class p_next = ai * p_cur + p_prev;
      const mpz_class q_next = ai * q_cur + q_prev;
      if (q_next > Qmax) break;
      p_prev = p_cur;
      q_prev = q_cur;
      p_cur = p_next;
      q_cur = q_next;
      a_out = p_cur;
      q_out = q_cur;
      rest -= ai;
      if (rest == 0) break;
      rest = 1 / rest;
    }
  }
  RationalApprox r;
  r.a = a_out;
  r.q = q_out;
  const mpq_class diff = x - mpq_class(a_out, q_out);
  r.delta = std::fabs(diff.get_d());
  return r;
}

ArcParams ArcParams::make(double alpha, double epsilon, double C1, double X) {
  if (!(alpha > 0 && alpha < 1)) fail(ErrorCode::kInvalidArgument, "ArcParams: alpha must lie in (0, 1)");
  if (!(epsilon > 0) || !(C1 > 0) || !(X >= 1)) fail(ErrorCode::kInvalidArgument, "ArcParams: bad epsilon/C1/X");
  ArcParams p;
  p.alpha = alpha;
  p.epsilon = epsilon;
  p.C1 = C1;
  p.X = X;
  p.L = std::log(1 / alpha);
  p.tau = C1 * p.L * p.L / X;
  const double qm = std::floor(C1 * std::pow(alpha, -2 - epsilon));
  if (qm > 1e15) fail(ErrorCode::kCapExceeded, "ArcParams: Qmax above 10^15");
  p.Qmax = static_cast<std::uint64_t>(qm);
  return p;
}

void ArcParams::validate() const {
  if (!(tau > 0)) fail(ErrorCode::kInvalidArgument, "ArcParams: tau must be positive");
  if (Qmax < 2) fail(ErrorCode::kInvalidArgument, "ArcParams: Qmax must be >= 2");
  if (alpha > 0 && std::fabs(L - std::log(1 / alpha)) > 1e-12 * std::max(1.0, L)) {
    fail(ErrorCode::kInvalidArgument, "ArcParams: L does not match ln(1/alpha)");
  }
}

nlohmann::json ArcParams::to_json() const {
  return {{"alpha", alpha}, {"epsilon", epsilon}, {"C1", C1}, {"X", X},
          {"L", L},         {"tau", tau},         {"Qmax", Qmax}};
}

nlohmann::json ArcClass::to_json() const {
  if (!major) return {{"arc", "minor"}};
  return {{"arc", "major"}, {"a", a}, {"q", q}};
}

namespace {

// Fraction with least denominator in the closed interval [lo, hi].
mpq_class simplest_between(mpq_class lo, mpq_class hi) {
  if (lo <= 0 && hi >= 0) return 0;
  if (hi < 0) return -simplest_between(-hi, -lo);
  // Continued-fraction walk; terms accumulate in `terms`.
  std::vector<mpz_class> terms;
  while (true) {
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
    if (mpq_class(fl) == lo) {
      terms.push_back(fl);
      break;
    }
    if (mpq_class(fl + 1) <= hi) {
      terms.push_back(fl + 1);
      break;
    }
    terms.push_back(fl);
    const mpq_class nlo = 1 / (hi - fl);
    const mpq_class nhi = 1 / (lo - fl);
    lo = nlo;
    hi = nhi;
  }
  mpq_class v = terms.back();
  for (std::size_t i = terms.size() - 1; i-- > 0;) v = terms[i] + 1 / v;
  v.canonicalize();
  return v;
}

}  // namespace

ArcClass classify_arc(double theta, const ArcParams& params) {
  params.validate();
  if (!std::isfinite(theta)) fail(ErrorCode::kInvalidArgument, "classify_arc: theta must be finite");
  ArcClass out;
  if (params.tau >= 0.5) {
    out.major = true;
    out.q = 1;
    return out;
  }
  const mpq_class x(theta - std::floor(theta));
  const mpq_class tau(params.tau);
  const mpq_class s = simplest_between(x - tau, x + tau);
  if (s.get_den() > to_mpz(params.Qmax)) return out;
  out.major = true;
  out.q = to_u64(s.get_den());
  mpz_class a;
  mpz_fdiv_r(a.get_mpz_t(), s.get_num_mpz_t(), s.get_den_mpz_t());
  out.a = to_u64(a);
  return out;
}

// ---------------------------------------------------------------------------
// Weyl-type audit

nlohmann::json WeylReport::to_json() const {
  nlohmann::json ss = nlohmann::json::array();
  for (const auto& s : samples) {
    ss.push_back({{"theta", s.theta},
                  {"a", s.a},
                  {"q", s.q},
                  {"magnitude", s.magnitude},
                  {"rhs", s.rhs},
                  {"ratio", s.ratio}});
  }
  return {{"N", N}, {"U", U}, {"Z", Z}, {"count_W", count_W}, {"max_ratio", max_ratio}, {"samples", ss}};
}

WeylReport weyl_sum_audit(const SieveTable& table, std::uint64_t N, const std::vector<double>& thetas,
                          std::optional<double> Z) {
  WeylReport rep;
  rep.N = N;
  rep.U = table.U();
  rep.Z = Z ? *Z : std::exp(std::pow(std::log(static_cast<double>(N)), 7.0 / 8.0));
  if (N < 2 || rep.U < 2 || rep.Z < 2 || rep.U * rep.Z > static_cast<double>(N)) {
    fail(ErrorCode::kHypothesisViolation, "weyl_sum_audit: requires N, U, Z >= 2 and U Z <= N (U=" +
                                              fmt17(rep.U) + ", Z=" + fmt17(rep.Z) + ", N=" + std::to_string(N) +
                                              ")");
  }
  const IntPoly& h = table.aux();
  std::vector<mpz_class> values;
  for (std::uint64_t n = 1; n <= N; ++n) {
    if (table.in_W(n)) values.push_back(h(to_mpz(n)));
  }
  rep.count_W = values.size();
  const int k = h.degree();
  const double K = std::ldexp(1.0, k);
  const double bk = std::fabs(h.leading().get_d());
  const double Nd = static_cast<double>(N);
  const double logU = std::log(rep.U);
  for (double theta : thetas) {
    WeylSample s;
    s.theta = theta;
    const RationalApprox ra = rational_approx(theta, to_mpz(N));
    s.a = to_u64(ra.a);
    s.q = to_u64(ra.q);
    ComplexSum acc;
    for (const auto& v : values) acc.add(e_frac(frac_mul(v, theta)));
    s.magnitude = std::abs(acc.value());
    const double q = static_cast<double>(s.q);
    const double inner = bk * std::pow(std::log(bk * q * Nd), k * k) *
                         (1 / q + rep.Z / Nd + q * std::pow(rep.Z, k) / (bk * std::pow(Nd, k)));
    s.rhs = Nd * std::pow(logU, std::numbers::e * k) * (std::exp(-std::log(rep.Z) / logU) + std::pow(inner, 1 / K));
    s.ratio = s.magnitude / s.rhs;
    rep.max_ratio = std::max(rep.max_ratio, s.ratio);
    rep.samples.push_back(s);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Initial Fourier mass

MassProfile initial_mass_profile(const AvoidingSet& A, double xi, const ArcParams& params) {
  params.validate();
  if (std::fabs(xi) > params.tau * (1 + 1e-12)) fail(ErrorCode::kInvalidArgument, "initial_mass: |xi| > tau");
  if (params.Qmax > 1000000) fail(ErrorCode::kCapExceeded, "initial_mass: Qmax above 10^6");
  const auto Q = static_cast<std::size_t>(params.Qmax);
  MassProfile prof;
  prof.xi = xi;
  const std::vector<std::uint64_t> mem = A.members();
  std::vector<Complex> z(mem.size());
  for (std::size_t i = 0; i < mem.size(); ++i) z[i] = e_frac(-frac_mul(mem[i], xi));

  // T(d) = sum_{a mod d} |1_A^(a/d + xi)|^2 = d sum_r |c_r|^2.
  std::vector<double> T(Q + 1, 0.0);
  std::vector<Complex> c(Q + 1);
  std::vector<char> seen(Q + 1, 0);
  std::vector<std::size_t> touched;
  for (std::size_t d = 1; d <= Q; ++d) {
    touched.clear();
    for (std::size_t i = 0; i < mem.size(); ++i) {
      const std::size_t r = mem[i] % d;
      if (!seen[r]) {
        seen[r] = 1;
        touched.push_back(r);
      }
      c[r] += z[i];
    }
    double s = 0, comp = 0;
    for (std::size_t r : touched) {
      neumaier(s, comp, std::norm(c[r]));
      c[r] = {};
      seen[r] = 0;
    }
    T[d] = static_cast<double>(d) * (s + comp);
  }
  const std::vector<int> mu = moebius_table(Q);
  prof.R.assign(Q + 1, 0.0);
  for (std::size_t d = 1; d <= Q; ++d) {
    for (std::size_t m = 1; d * m <= Q; ++m) {
      if (mu[m] != 0) prof.R[d * m] += mu[m] * T[d];
    }
  }
  double s = 0, comp = 0;
  const double expo = -1.0 / (2 + params.epsilon);
  for (std::size_t q = 2; q <= Q; ++q) neumaier(s, comp, std::pow(static_cast<double>(q), expo) * prof.R[q]);
  prof.total = s + comp;
  return prof;
}

double initial_mass(const AvoidingSet& A, double xi, const ArcParams& params) {
  return initial_mass_profile(A, xi, params).total;
}

double initial_mass_direct(const AvoidingSet& A, double xi, const ArcParams& params) {
  params.validate();
  if (std::fabs(xi) > params.tau * (1 + 1e-12)) fail(ErrorCode::kInvalidArgument, "initial_mass: |xi| > tau");
  const Signal f = indicator_signal(A);
  const double expo = -1.0 / (2 + params.epsilon);
  double s = 0, comp = 0;
  for (std::uint64_t q = 2; q <= params.Qmax; ++q) {
    double inner = 0, ic = 0;
    for (std::uint64_t a = 1; a < q; ++a) {
      if (gcd_u64(a, q) != 1) continue;
      neumaier(inner, ic, std::norm(fourier_point(f, a, q, xi)));
    }
    neumaier(s, comp, std::pow(static_cast<double>(q), expo) * (inner + ic));
  }
  return s + comp;
}

// ---------------------------------------------------------------------------
// Major and minor arcs

nlohmann::json MajorArcReport::to_json() const {
  return {{"a", a},
          {"q", q},
          {"theta", theta},
          {"X", X},
          {"measured", measured},
          {"predicted", predicted},
          {"ratio", ratio ? nlohmann::json(*ratio) : nlohmann::json(nullptr)},
          {"scale", scale},
          {"scaled_error", scaled_error},
          {"hypothesis_q", hyp_q},
          {"hypothesis_theta", hyp_theta},
          {"w_hat", {w_hat.real(), w_hat.imag()}},
          {"gauss", {gauss.real(), gauss.imag()}}};
}

MajorArcReport major_arc_predict(const SieveTable& table, std::uint64_t X, const SmoothWeight& w, std::uint64_t a,
                                 std::uint64_t q, double theta, bool enforce) {
  if (q == 0 || gcd_checked(a, q) != 1) fail(ErrorCode::kInvalidArgument, "major_arc_predict: need gcd(a, q) = 1");
  MajorArcReport rep;
  rep.a = a % q;
  rep.q = q;
  rep.theta = theta;
  rep.X = static_cast<double>(X);
  const int k = table.aux().degree();
  rep.hyp_q = static_cast<double>(q) <= std::pow(rep.X, 1.0 / (8 * k));
  rep.hyp_theta = std::fabs(theta) <= std::pow(rep.X, -(1 - 1.0 / (8 * k)));
  if (enforce && !(rep.hyp_q && rep.hyp_theta)) {
    fail(ErrorCode::kHypothesisViolation, "major_arc_predict: requires q <= X^{1/8k} and |theta| <= X^{-(1-1/8k)}");
  }
  const WeightedImage g = g_build(table, X, w);
  rep.measured = g.fourier(rep.a, q, theta);
  rep.w_hat = w.fourier(theta * rep.X);
  rep.gauss = gauss_sum_sieved(table, rep.a, q);
  const double J = table.J_factor().get_d();
  const double restricted = 1.0 / table.J_factor(to_mpz(q)).get_d();
  rep.predicted = J * (2 * rep.X / static_cast<double>(q)) * (rep.w_hat * restricted * std::conj(rep.gauss)).real();
  rep.scale = g.mass() / static_cast<double>(q);
  rep.scaled_error = rep.scale > 0 ? std::fabs(rep.measured - rep.predicted) / rep.scale : 0.0;
  if (std::fabs(rep.predicted) > 1e-9 * rep.scale) rep.ratio = rep.measured / rep.predicted;
  return rep;
}

nlohmann::json MinorArcReport::to_json() const {
  nlohmann::json pr = nlohmann::json::array();
  for (const auto& [x, m] : probes) pr.push_back({{"xi", x}, {"magnitude", m}});
  return {{"alpha", alpha},     {"X", X},
          {"threshold", threshold}, {"sup", sup},
          {"sup_at", sup_at},   {"sampled", sampled},
          {"minor_count", minor_count}, {"margin", margin},
          {"clears", clears},   {"hypothesis_alpha", hypothesis_alpha},
          {"mass", mass},       {"probes", pr}};
}

MinorArcReport minor_arc_audit(const WeightedImage& g, const ArcParams& params, int degree,
                               const MinorArcOptions& opts) {
  params.validate();
  MinorArcReport rep;
  rep.alpha = params.alpha;
  rep.X = static_cast<double>(g.X());
  rep.threshold = std::ldexp(params.alpha * rep.X, -9);
  rep.mass = g.mass();
  const double lx = std::log(rep.X);
  rep.hypothesis_alpha =
      params.alpha >= opts.hypothesis_constant * std::pow(lx, std::numbers::e * degree) * std::exp(-std::pow(lx, 0.375));

  const Signal sig = g.signal();
  const std::size_t N = std::max<std::size_t>(1, opts.grid_factor) * (2 * g.X() + 1);
  const Spectrum spec = fourier_grid(sig, N);
  auto consider = [&](double xi, double mag) {
    ++rep.minor_count;
    if (mag > rep.sup) {
      rep.sup = mag;
      rep.sup_at = xi;
    }
  };
  // g is even, so j and N - j carry the same value.
  for (std::size_t j = 0; j <= N / 2; ++j) {
    ++rep.sampled;
    const double xi = static_cast<double>(j) / static_cast<double>(N);
    if (classify_arc(xi, params).major) continue;
    consider(xi, std::abs(spec.values[j]));
  }
  for (std::uint64_t q = 2; q <= opts.adversarial_q_max; ++q) {
    for (std::uint64_t a = 1; a < q; ++a) {
      if (gcd_u64(a, q) != 1) continue;
      const double off = 1.5 * params.tau;
      const double xi = static_cast<double>(a) / static_cast<double>(q) + off;
      ++rep.sampled;
      if (classify_arc(xi, params).major) continue;
      consider(xi, std::fabs(g.fourier(a, q, off)));
    }
  }
  for (double xi : {0.6180339887498949, 0.41421356237309515}) rep.probes.emplace_back(xi, std::fabs(g.fourier(xi)));
  rep.margin = rep.threshold - rep.sup;
  rep.clears = rep.sup <= rep.threshold;
  return rep;
}

}  // namespace iwb
