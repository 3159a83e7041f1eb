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

#include "iwb/numtheory.hpp"

#include <limits>

#include "iwb/errors.hpp"

namespace iwb {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kPrecisionExhausted: return "precision-exhausted";
    case ErrorCode::kDepthExhausted: return "depth-exhausted";
    case ErrorCode::kNonIntegral: return "non-integral-quotient";
    case ErrorCode::kMissingRootData: return "missing-root-data";
    case ErrorCode::kCapExceeded: return "cap-exceeded";
    case ErrorCode::kHypothesisViolation: return "hypothesis-violation";
    case ErrorCode::kGridTooSmall: return "grid-too-small";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kInternal: return "internal";
  }
  return "unknown";
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
  std::vector<std::uint64_t> primes;
  if (n < 2) return primes;
  std::vector<bool> composite(n + 1, false);
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t m = i * i; m <= n; m += i) composite[m] = true;
  }
  return primes;
}

Factorization factor_u64(std::uint64_t n) {
  Factorization out;
  if (n == 0) fail(ErrorCode::kDomain, "factor: zero has no factorization");
  for (std::uint64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
    if (n % d != 0) continue;
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    out.push_back({d, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

Factorization factor(const mpz_class& n_in, std::uint64_t trial_limit) {
  mpz_class n = abs(n_in);
  if (n == 0) fail(ErrorCode::kDomain, "factor: zero has no factorization");
  if (fits_u64(n)) return factor_u64(to_u64(n));
  Factorization out;
  for (std::uint64_t d = 2; d <= trial_limit; d += (d == 2 ? 1 : 2)) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), d) == 0) continue;
    int e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), d) != 0) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), d);
      ++e;
    }
    out.push_back({d, e});
    if (fits_u64(n)) {
      for (const auto& pp : factor_u64(to_u64(n))) out.push_back(pp);
      return out;
    }
  }
  if (n == 1) return out;
  if (mpz_probab_prime_p(n.get_mpz_t(), 30) == 0 || !fits_u64(n)) {
    fail(ErrorCode::kCapExceeded,
         "factor: cofactor " + n.get_str() + " not resolved by trial division");
  }
  out.push_back({to_u64(n), 1});
  return out;
}

int valuation(const mpz_class& n, std::uint64_t p) {
  if (n == 0) return std::numeric_limits<int>::max();
  mpz_class m = n;
  int v = 0;
  while (mpz_divisible_ui_p(m.get_mpz_t(), p) != 0) {
    mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
    ++v;
  }
  return v;
}

mpz_class ipow(std::uint64_t p, int e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, static_cast<unsigned long>(e));
  return r;
}

std::uint64_t ipow_u64(std::uint64_t p, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / p) {
      fail(ErrorCode::kCapExceeded, "ipow_u64: overflow");
    }
    r *= p;
  }
  return r;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    const std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

int moebius(std::uint64_t n) {
  if (n == 0) return 0;
  int mu = 1;
  for (const auto& pp : factor_u64(n)) {
    if (pp.e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

std::vector<int> moebius_table(std::uint64_t n) {
  std::vector<int> mu(n + 1, 1);
  std::vector<bool> composite(n + 1, false);
  std::vector<std::uint64_t> primes;
  mu[0] = 0;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (!composite[i]) {
      primes.push_back(i);
      mu[i] = -1;
    }
    for (std::uint64_t p : primes) {
      if (i * p > n) break;
      composite[i * p] = true;
      if (i % p == 0) {
        mu[i * p] = 0;
        break;
      }
      mu[i * p] = -mu[i];
    }
  }
  return mu;
}

int omega(std::uint64_t n) {
  return n <= 1 ? 0 : static_cast<int>(factor_u64(n).size());
}

mpz_class to_mpz(std::uint64_t v) {
  mpz_class r;
  mpz_import(r.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return r;
}

bool fits_u64(const mpz_class& v) {
  return sgn(v) >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64;
}

std::uint64_t to_u64(const mpz_class& v) {
  if (!fits_u64(v)) fail(ErrorCode::kDomain, "value does not fit in 64 bits");
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, v.get_mpz_t());
  return out;
}

bool fits_i64(const mpz_class& v) {
  return mpz_sizeinbase(v.get_mpz_t(), 2) <= 63;
}

std::int64_t to_i64(const mpz_class& v) {
  if (!fits_i64(v)) fail(ErrorCode::kDomain, "value does not fit in int64");
  const std::uint64_t mag = to_u64(abs(v));
  return sgn(v) < 0 ? -static_cast<std::int64_t>(mag)
                    : static_cast<std::int64_t>(mag);
}

namespace {

std::uint64_t splitmix(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
  for (auto& s : s_) s = splitmix(seed);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) fail(ErrorCode::kInvalidArgument, "Rng::below: zero bound");
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % bound;
}

double Rng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

}  // namespace iwb
