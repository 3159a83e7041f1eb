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

// Small-integer number theory shared by the modules: prime lists,
// factorization, valuations, and a portable seeded generator.

#ifndef IWB_NUMTHEORY_HPP
#define IWB_NUMTHEORY_HPP

#include <gmpxx.h>

#include <cstdint>
#include <utility>
#include <vector>

namespace iwb {

struct PrimePower {
  std::uint64_t p;
  int e;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

using Factorization = std::vector<PrimePower>;

std::vector<std::uint64_t> primes_up_to(std::uint64_t n);

// Trial division with a probable-prime check on the cofactor. Throws
// kCapExceeded when a composite cofactor survives trial division up to
// `trial_limit`.
Factorization factor(const mpz_class& n, std::uint64_t trial_limit = 10000000);
Factorization factor_u64(std::uint64_t n);

int valuation(const mpz_class& n, std::uint64_t p);
mpz_class ipow(std::uint64_t p, int e);
std::uint64_t ipow_u64(std::uint64_t p, int e);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);
int moebius(std::uint64_t n);
// Moebius function for 1..n by linear sieve.
std::vector<int> moebius_table(std::uint64_t n);
int omega(std::uint64_t n);

mpz_class to_mpz(std::uint64_t v);
std::uint64_t to_u64(const mpz_class& v);
bool fits_u64(const mpz_class& v);
bool fits_i64(const mpz_class& v);
std::int64_t to_i64(const mpz_class& v);

// SplitMix64-seeded xoshiro256** generator. Used instead of <random>
// distributions so that sampled experiments reproduce across standard
// libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  // Uniform in [0, bound), bound > 0, via rejection.
  std::uint64_t below(std::uint64_t bound);
  double uniform();  // [0, 1)

 private:
  std::uint64_t s_[4];
};

}  // namespace iwb

#endif  // IWB_NUMTHEORY_HPP
