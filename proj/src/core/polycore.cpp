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

#include "iwb/polycore.hpp"

#include <algorithm>
#include <sstream>

#include "iwb/errors.hpp"
#include "iwb/numtheory.hpp"

namespace iwb {

IntPoly::IntPoly(std::vector<mpz_class> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

IntPoly::IntPoly(std::initializer_list<long> coeffs) {
  coeffs_.reserve(coeffs.size());
  for (long c : coeffs) coeffs_.emplace_back(c);
  trim();
}

IntPoly IntPoly::constant(const mpz_class& c) { return IntPoly(std::vector<mpz_class>{c}); }

IntPoly IntPoly::monomial(const mpz_class& c, int power) {
  if (power < 0) fail(ErrorCode::kInvalidArgument, "monomial: negative power");
  std::vector<mpz_class> v(static_cast<std::size_t>(power) + 1);
  v.back() = c;
  return IntPoly(std::move(v));
}

IntPoly IntPoly::from_roots(const std::vector<long>& roots) {
  IntPoly out = constant(1);
  for (long r : roots) out = out * IntPoly{-r, 1};
  return out;
}

void IntPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

mpz_class IntPoly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(coeffs_.size())) return 0;
  return coeffs_[static_cast<std::size_t>(i)];
}

const mpz_class& IntPoly::leading() const {
  static const mpz_class kZero = 0;
  return coeffs_.empty() ? kZero : coeffs_.back();
}

mpz_class IntPoly::operator()(const mpz_class& n) const {
  mpz_class acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= n;
    acc += *it;
  }
  return acc;
}

std::uint64_t IntPoly::eval_mod(std::uint64_t n, std::uint64_t m) const {
  if (m == 0) fail(ErrorCode::kInvalidArgument, "eval_mod: zero modulus");
  unsigned __int128 acc = 0;
  const std::uint64_t x = n % m;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    const std::uint64_t c = mpz_fdiv_ui(it->get_mpz_t(), m);
    acc = (acc * x + c) % m;
  }
  return static_cast<std::uint64_t>(acc);
}

IntPoly IntPoly::operator-() const {
  std::vector<mpz_class> v = coeffs_;
  for (auto& c : v) c = -c;
  return IntPoly(std::move(v));
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
  std::vector<mpz_class> v(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i < a.coeffs_.size()) v[i] += a.coeffs_[i];
    if (i < b.coeffs_.size()) v[i] += b.coeffs_[i];
  }
  return IntPoly(std::move(v));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) { return a + (-b); }

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return IntPoly();
  std::vector<mpz_class> v(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      v[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return IntPoly(std::move(v));
}

IntPoly operator*(const mpz_class& c, const IntPoly& a) {
  std::vector<mpz_class> v = a.coeffs_;
  for (auto& x : v) x *= c;
  return IntPoly(std::move(v));
}

std::string IntPoly::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const mpz_class& c = coeffs_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    mpz_class mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (i == 0 || mag != 1) os << mag.get_str();
    if (i >= 1) os << "x";
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

mpz_class poly_eval(const IntPoly& h, const mpz_class& n) { return h(n); }

IntPoly poly_derivative(const IntPoly& h) {
  if (h.degree() == 0) return IntPoly();
  std::vector<mpz_class> v(static_cast<std::size_t>(h.degree()));
  for (int i = 1; i <= h.degree(); ++i) v[static_cast<std::size_t>(i - 1)] = h.coeff(i) * i;
  return IntPoly(std::move(v));
}

IntPoly poly_compose_affine(const IntPoly& h, const mpz_class& r, const mpz_class& ell) {
  if (ell < 1) fail(ErrorCode::kInvalidArgument, "poly_compose_affine: ell must be >= 1");
  const IntPoly lin(std::vector<mpz_class>{r, ell});
  IntPoly acc;
  for (int i = h.degree(); i >= 0; --i) acc = acc * lin + IntPoly::constant(h.coeff(i));
  return acc;
}

mpz_class root_bound(const IntPoly& p) {
  const int k = p.degree();
  if (k < 1) return 0;
  const mpz_class lead = abs(p.leading());
  mpz_class best = 0;
  for (int i = 1; i <= k; ++i) {
    mpz_class ratio = abs(p.coeff(k - i));
    if (ratio == 0) continue;
    mpz_cdiv_q(ratio.get_mpz_t(), ratio.get_mpz_t(), lead.get_mpz_t());
    mpz_class root;
    mpz_root(root.get_mpz_t(), ratio.get_mpz_t(), static_cast<unsigned long>(i));
    root += 1;
    if (root > best) best = root;
  }
  return 2 * best;
}

PositiveNormalization normalize_positive(const IntPoly& h) {
  if (h.degree() < 2) fail(ErrorCode::kDomain, "normalize_positive: degree must be >= 2");
  if (h.leading() <= 0) fail(ErrorCode::kDomain, "normalize_positive: leading coefficient must be positive");
  const IntPoly d1 = poly_derivative(h);
  const IntPoly d2 = poly_derivative(d1);
  mpz_class bound = std::max({root_bound(h), root_bound(d1), root_bound(d2)});
  if (bound > 100000000) fail(ErrorCode::kCapExceeded, "normalize_positive: root bound too large to scan");
  // Above `bound` all three are positive; the answer is the largest failing x >= 1.
  mpz_class shift = 0;
  for (mpz_class x = bound; x >= 1; --x) {
    if (h(x) <= 0 || d1(x) <= 0 || d2(x) <= 0) {
      shift = x;
      break;
    }
  }
  return {poly_compose_affine(h, shift, 1), shift};
}

mpz_class content(const IntPoly& h) {
  mpz_class g = 0;
  for (const auto& c : h.coeffs()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

bool divide_exact(const IntPoly& h, const mpz_class& d, IntPoly& out) {
  if (d == 0) fail(ErrorCode::kInvalidArgument, "divide_exact: zero divisor");
  std::vector<mpz_class> v = h.coeffs();
  for (auto& c : v) {
    if (mpz_divisible_p(c.get_mpz_t(), d.get_mpz_t()) == 0) return false;
    mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), d.get_mpz_t());
  }
  out = IntPoly(std::move(v));
  return true;
}

IntPoly primitive_part(const IntPoly& h) {
  if (h.is_zero()) return h;
  mpz_class c = content(h);
  if (h.leading() < 0) c = -c;
  IntPoly out;
  divide_exact(h, c, out);
  return out;
}

namespace {

// Exact quotient a / b in Z[x]; requires b | a.
IntPoly div_exact_poly(const IntPoly& a, const IntPoly& b) {
  if (b.is_zero()) fail(ErrorCode::kInternal, "div_exact_poly: zero divisor");
  if (a.is_zero()) return IntPoly();
  std::vector<mpz_class> rem = a.coeffs();
  const int db = b.degree();
  const int dq = a.degree() - db;
  if (dq < 0) fail(ErrorCode::kNonIntegral, "div_exact_poly: divisor degree too large");
  std::vector<mpz_class> q(static_cast<std::size_t>(dq) + 1);
  for (int i = dq; i >= 0; --i) {
    mpz_class& top = rem[static_cast<std::size_t>(i + db)];
    if (mpz_divisible_p(top.get_mpz_t(), b.leading().get_mpz_t()) == 0) {
      fail(ErrorCode::kNonIntegral, "div_exact_poly: inexact division");
    }
    mpz_class t;
    mpz_divexact(t.get_mpz_t(), top.get_mpz_t(), b.leading().get_mpz_t());
    q[static_cast<std::size_t>(i)] = t;
    for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(i + j)] -= t * b.coeff(j);
  }
  for (const auto& c : rem) {
    if (c != 0) fail(ErrorCode::kNonIntegral, "div_exact_poly: nonzero remainder");
  }
  return IntPoly(std::move(q));
}

IntPoly pseudo_remainder(IntPoly a, const IntPoly& b) {
  const int db = b.degree();
  while (!a.is_zero() && a.degree() >= db) {
    const int shift = a.degree() - db;
    a = b.leading() * a - IntPoly::monomial(a.leading(), shift) * b;
  }
  return a;
}

// Primitive gcd with positive leading coefficient.
IntPoly poly_gcd(IntPoly a, IntPoly b) {
  a = primitive_part(a);
  b = primitive_part(b);
  if (a.degree() < b.degree()) std::swap(a, b);
  while (!b.is_zero()) {
    IntPoly r = primitive_part(pseudo_remainder(a, b));
    a = std::move(b);
    b = std::move(r);
  }
  return primitive_part(a);
}

}  // namespace

std::vector<std::pair<IntPoly, int>> squarefree_decomposition(const IntPoly& h) {
  if (h.degree() < 1) return {};
  // Yun's algorithm on the primitive part.
  const IntPoly f = primitive_part(h);
  const IntPoly fd = poly_derivative(f);
  const IntPoly a0 = poly_gcd(f, fd);
  IntPoly b = div_exact_poly(f, a0);
  IntPoly c = div_exact_poly(fd, a0);
  IntPoly d = c - poly_derivative(b);
  std::vector<std::pair<IntPoly, int>> out;
  for (int i = 1; b.degree() > 0; ++i) {
    const IntPoly a = poly_gcd(b, d);
    if (a.degree() > 0) out.emplace_back(a, i);
    b = div_exact_poly(b, a);
    c = div_exact_poly(d, a);
    d = c - poly_derivative(b);
  }
  return out;
}

IntPoly squarefree_part(const IntPoly& h) {
  IntPoly out = IntPoly::constant(1);
  for (const auto& [s, m] : squarefree_decomposition(h)) out = out * s;
  return out;
}

mpz_class resultant(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return 0;
  const int m = a.degree();
  const int n = b.degree();
  const int size = m + n;
  if (size == 0) return 1;
  std::vector<std::vector<mpz_class>> mat(static_cast<std::size_t>(size),
                                          std::vector<mpz_class>(static_cast<std::size_t>(size)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= m; ++j) mat[i][i + j] = a.coeff(m - j);
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j <= n; ++j) mat[n + i][i + j] = b.coeff(n - j);
  }
  // Bareiss elimination.
  mpz_class prev = 1;
  int sign = 1;
  for (int k = 0; k < size - 1; ++k) {
    if (mat[k][k] == 0) {
      int swap_row = -1;
      for (int r = k + 1; r < size; ++r) {
        if (mat[r][k] != 0) {
          swap_row = r;
          break;
        }
      }
      if (swap_row < 0) return 0;
      std::swap(mat[k], mat[swap_row]);
      sign = -sign;
    }
    for (int i = k + 1; i < size; ++i) {
      for (int j = k + 1; j < size; ++j) {
        mpz_class v = mat[i][j] * mat[k][k] - mat[i][k] * mat[k][j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        mat[i][j] = v;
      }
      mat[i][k] = 0;
    }
    prev = mat[k][k];
  }
  return sign * mat[size - 1][size - 1];
}

nlohmann::json poly_to_json(const IntPoly& h) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : h.coeffs()) arr.push_back(c.get_str());
  if (h.is_zero()) arr.push_back("0");
  return arr;
}

mpz_class int_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return to_mpz(j.get<std::uint64_t>());
    return mpz_class(static_cast<long>(j.get<std::int64_t>()));
  }
  if (j.is_string()) {
    mpz_class v;
    const std::string s = j.get<std::string>();
    if (s.empty() || v.set_str(s, 10) != 0) fail(ErrorCode::kConfig, "not a decimal integer: '" + s + "'");
    return v;
  }
  fail(ErrorCode::kConfig, "expected an integer or decimal string, got " + j.dump());
}

nlohmann::json int_to_json(const mpz_class& v) {
  static const mpz_class kLimit = mpz_class(1) << 53;
  if (abs(v) <= kLimit) return to_i64(v);
  return v.get_str();
}

IntPoly poly_from_json(const nlohmann::json& j) {
  if (!j.is_array()) fail(ErrorCode::kConfig, "polynomial must be a JSON array of coefficients");
  std::vector<mpz_class> v;
  v.reserve(j.size());
  for (const auto& c : j) v.push_back(int_from_json(c));
  return IntPoly(std::move(v));
}

}  // namespace iwb
