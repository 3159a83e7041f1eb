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

// Local sieve data for the derivative of an auxiliary polynomial: the
// exponents gamma(p), root counts j(p), the sieved set W and its density.

#ifndef IWB_SIEVE_HPP
#define IWB_SIEVE_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <vector>

#include "iwb/polycore.hpp"

namespace iwb {

struct LocalData {
  int gamma = 0;
  std::uint64_t j = 0;
};

/// gamma is the least exponent for which n -> h'(n) mod p^gamma is not the
/// zero function; j counts its zeros mod p^gamma.
LocalData local_data(const IntPoly& aux, std::uint64_t p);

struct SieveEntry {
  std::uint64_t p = 0;
  int gamma = 0;
  std::uint64_t j = 0;
  std::uint64_t modulus = 0;   // p^gamma
  std::vector<bool> bad;       // bad[r]: h'(r) == 0 mod p^gamma
};

class SieveTable {
 public:
  SieveTable(IntPoly aux, double U);

  const IntPoly& aux() const { return aux_; }
  const IntPoly& derivative() const { return deriv_; }
  double U() const { return U_; }
  const std::vector<SieveEntry>& entries() const { return entries_; }
  const mpz_class& period() const { return period_; }

  /// Membership in W(U), or in W^q(U) when q is given.
  bool in_W(const mpz_class& n, const std::optional<mpz_class>& q = std::nullopt) const;
  bool in_W(std::uint64_t n) const;
  /// Product of (1 - j/p^gamma)^{-1} over p <= U (restricted to p^gamma not
  /// dividing q when q is given).
  mpq_class J_factor(const std::optional<mpz_class>& q = std::nullopt) const;
  /// Every p <= U dividing q has p^gamma | q.
  bool compatible(const mpz_class& q) const;

  nlohmann::json to_json() const;

 private:
  IntPoly aux_;
  IntPoly deriv_;
  double U_;
  std::vector<SieveEntry> entries_;
  std::vector<std::size_t> active_;  // indices of entries with j > 0
  mpz_class period_;
};

struct BrunReport {
  mpz_class empirical;
  mpq_class main_term;
  double abs_error = 0;
  double rel_error = 0;
  bool b_in_Wq = false;
  bool q_compatible = false;
  bool main_term_applicable = false;
  nlohmann::json to_json() const;
};

/// Sum of h'(n) over n <= t, n in W(U), n == b (mod q), against the main
/// term h(t)/q * prod_{p^gamma does not divide q} (1 - j/p^gamma).
BrunReport brun_sum_audit(const SieveTable& table, std::uint64_t q, std::uint64_t b, std::uint64_t t);

}  // namespace iwb

#endif  // IWB_SIEVE_HPP
