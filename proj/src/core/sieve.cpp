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

#include "iwb/sieve.hpp"

#include <cmath>

#include "iwb/errors.hpp"
#include "iwb/numtheory.hpp"

namespace iwb {

namespace {

constexpr std::uint64_t kMaxLocalModulus = std::uint64_t{1} << 32;

std::vector<std::uint64_t> reduce(const IntPoly& f, std::uint64_t m) {
  std::vector<std::uint64_t> out(static_cast<std::size_t>(f.degree()) + 1, 0);
  for (int i = 0; i <= f.degree(); ++i) out[i] = mpz_fdiv_ui(f.coeff(i).get_mpz_t(), m);
  return out;
}

std::uint64_t horner(const std::vector<std::uint64_t>& c, std::uint64_t x, std::uint64_t m) {
  unsigned __int128 acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = (acc * x + *it) % m;
  return static_cast<std::uint64_t>(acc);
}

SieveEntry scan(const IntPoly& deriv, std::uint64_t p) {
  if (deriv.is_zero()) fail(ErrorCode::kDomain, "sieve: derivative is identically zero");
  SieveEntry e;
  e.p = p;
  std::uint64_t m = 1;
  for (int gamma = 1;; ++gamma) {
    if (m > kMaxLocalModulus / p) fail(ErrorCode::kCapExceeded, "sieve: p^gamma too large");
    m *= p;
    const auto c = reduce(deriv, m);
    std::vector<bool> bad(m);
    std::uint64_t j = 0;
    for (std::uint64_t r = 0; r < m; ++r) {
      if (horner(c, r, m) == 0) {
        bad[r] = true;
        ++j;
      }
    }
    if (j < m) {
      e.gamma = gamma;
      e.j = j;
      e.modulus = m;
      e.bad = std::move(bad);
      return e;
    }
  }
}

}  // namespace

LocalData local_data(const IntPoly& aux, std::uint64_t p) {
  const SieveEntry e = scan(poly_derivative(aux), p);
  return {e.gamma, e.j};
}

SieveTable::SieveTable(IntPoly aux, double U) : aux_(std::move(aux)), U_(U) {
  if (!(U >= 2)) fail(ErrorCode::kInvalidArgument, "sieve: U must be >= 2");
  if (U > 1e7) fail(ErrorCode::kCapExceeded, "sieve: U above 10^7");
  deriv_ = poly_derivative(aux_);
  period_ = 1;
  for (std::uint64_t p : primes_up_to(static_cast<std::uint64_t>(std::floor(U)))) {
    entries_.push_back(scan(deriv_, p));
    period_ *= to_mpz(entries_.back().modulus);
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].j > 0) active_.push_back(i);
  }
}

bool SieveTable::in_W(std::uint64_t n) const {
  for (std::size_t i : active_) {
    const SieveEntry& e = entries_[i];
    if (e.bad[n % e.modulus]) return false;
  }
  return true;
}

bool SieveTable::in_W(const mpz_class& n, const std::optional<mpz_class>& q) const {
  for (std::size_t i : active_) {
    const SieveEntry& e = entries_[i];
    if (q && mpz_divisible_ui_p(q->get_mpz_t(), e.modulus) == 0) continue;
    if (e.bad[mpz_fdiv_ui(n.get_mpz_t(), e.modulus)]) return false;
  }
  return true;
}

mpq_class SieveTable::J_factor(const std::optional<mpz_class>& q) const {
  mpq_class out = 1;
  for (const auto& e : entries_) {
    if (e.j == 0) continue;
    if (q && mpz_divisible_ui_p(q->get_mpz_t(), e.modulus) != 0) continue;
    out *= mpq_class(to_mpz(e.modulus), to_mpz(e.modulus - e.j));
  }
  out.canonicalize();
  return out;
}

bool SieveTable::compatible(const mpz_class& q) const {
  for (const auto& e : entries_) {
    if (mpz_divisible_ui_p(q.get_mpz_t(), e.p) != 0 && mpz_divisible_ui_p(q.get_mpz_t(), e.modulus) == 0) {
      return false;
    }
  }
  return true;
}

nlohmann::json SieveTable::to_json() const {
  nlohmann::json es = nlohmann::json::array();
  for (const auto& e : entries_) es.push_back({{"p", e.p}, {"gamma", e.gamma}, {"j", e.j}});
  const mpq_class J = J_factor();
  return {{"U", U_},
          {"entries", es},
          {"period", period_.get_str()},
          {"J", J.get_str()},
          {"J_value", J.get_d()}};
}

nlohmann::json BrunReport::to_json() const {
  return {{"empirical", int_to_json(empirical)},
          {"main_term", main_term.get_d()},
          {"main_term_exact", main_term.get_str()},
          {"abs_error", abs_error},
          {"rel_error", rel_error},
          {"b_in_Wq", b_in_Wq},
          {"q_compatible", q_compatible},
          {"main_term_applicable", main_term_applicable}};
}

BrunReport brun_sum_audit(const SieveTable& table, std::uint64_t q, std::uint64_t b, std::uint64_t t) {
  if (q < 1 || t < q) fail(ErrorCode::kInvalidArgument, "brun_sum_audit: requires t >= q >= 1");
  BrunReport rep;
  b %= q;
  const mpz_class qz = to_mpz(q);
  rep.b_in_Wq = table.in_W(to_mpz(b), qz);
  rep.q_compatible = table.compatible(qz);
  rep.main_term_applicable = rep.b_in_Wq && rep.q_compatible;
  const IntPoly& d = table.derivative();
  rep.empirical = 0;
  for (std::uint64_t n = (b == 0 ? q : b); n <= t; n += q) {
    if (table.in_W(n)) rep.empirical += d(to_mpz(n));
  }
  rep.main_term = mpq_class(table.aux()(to_mpz(t)), qz) / table.J_factor(qz);
  rep.main_term.canonicalize();
  const mpq_class diff = mpq_class(rep.empirical) - rep.main_term;
  rep.abs_error = std::fabs(diff.get_d());
  const double mt = std::fabs(rep.main_term.get_d());
  rep.rel_error = mt > 0 ? rep.abs_error / mt : (rep.abs_error == 0 ? 0.0 : INFINITY);
  return rep;
}

}  // namespace iwb
