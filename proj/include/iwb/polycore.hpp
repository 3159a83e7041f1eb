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

// Exact integer polynomials. Every coefficient is a GMP integer; the only
// fixed-width arithmetic is `eval_mod` for small moduli.

#ifndef IWB_POLYCORE_HPP
#define IWB_POLYCORE_HPP

#include <gmpxx.h>

#include <cstdint>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace iwb {

/// Integer polynomial b_0 + b_1 x + ... + b_k x^k. The coefficient vector is
/// kept trimmed: the last stored coefficient is nonzero, and the zero
/// polynomial stores nothing (its degree is reported as 0).
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<mpz_class> coeffs);
  IntPoly(std::initializer_list<long> coeffs);

  static IntPoly constant(const mpz_class& c);
  static IntPoly monomial(const mpz_class& c, int power);
  // Expanded product of (x - r_i).
  static IntPoly from_roots(const std::vector<long>& roots);

  int degree() const { return coeffs_.empty() ? 0 : static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<mpz_class>& coeffs() const { return coeffs_; }
  // Coefficient of x^i; zero beyond the degree.
  mpz_class coeff(int i) const;
  const mpz_class& leading() const;

  mpz_class operator()(const mpz_class& n) const;
  // h(n) mod m, result in [0, m). m must be positive and below 2^63.
  std::uint64_t eval_mod(std::uint64_t n, std::uint64_t m) const;

  IntPoly operator-() const;
  friend IntPoly operator+(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator-(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator*(const mpz_class& c, const IntPoly& a);
  friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.coeffs_ == b.coeffs_; }

  std::string to_string() const;

 private:
  void trim();
  std::vector<mpz_class> coeffs_;
};

mpz_class poly_eval(const IntPoly& h, const mpz_class& n);
IntPoly poly_derivative(const IntPoly& h);
/// n -> h(r + ell*n), exact expansion. ell must be >= 1.
IntPoly poly_compose_affine(const IntPoly& h, const mpz_class& r, const mpz_class& ell);

/// Every real root z of p satisfies |z| <= root_bound(p) (Fujiwara).
mpz_class root_bound(const IntPoly& p);

struct PositiveNormalization {
  IntPoly poly;     // g(n) = h(n + shift)
  mpz_class shift;  // minimal C >= 0
};

/// Smallest shift C >= 0 such that g(n) = h(n + C) has g, g', g'' > 0 at
/// every integer n >= 1. Requires degree >= 2 and positive leading term.
PositiveNormalization normalize_positive(const IntPoly& h);

/// Gcd of the coefficients (nonnegative; 0 for the zero polynomial).
mpz_class content(const IntPoly& h);
IntPoly primitive_part(const IntPoly& h);
/// Divides every coefficient by d; returns false (and leaves `out` untouched)
/// if some coefficient is not divisible.
bool divide_exact(const IntPoly& h, const mpz_class& d, IntPoly& out);

/// Squarefree decomposition over Q: pairs (s_m, m) with h = c * prod s_m^m,
/// each s_m primitive, squarefree, nonconstant, positive leading term and
/// pairwise coprime. Sorted by m.
std::vector<std::pair<IntPoly, int>> squarefree_decomposition(const IntPoly& h);
/// Product of the squarefree factors (the radical of h up to content).
IntPoly squarefree_part(const IntPoly& h);
/// Sylvester resultant, computed by fraction-free elimination.
mpz_class resultant(const IntPoly& a, const IntPoly& b);

/// Coefficients as decimal strings, constant term first.
nlohmann::json poly_to_json(const IntPoly& h);
IntPoly poly_from_json(const nlohmann::json& j);

/// Serializes an integer as a JSON number when |v| <= 2^53, else as a
/// decimal string.
nlohmann::json int_to_json(const mpz_class& v);
/// Accepts JSON integers or decimal strings.
mpz_class int_from_json(const nlohmann::json& j);

}  // namespace iwb

#endif  // IWB_POLYCORE_HPP
