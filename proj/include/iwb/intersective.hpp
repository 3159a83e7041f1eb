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

// p-adic roots, intersectivity verdicts and the auxiliary polynomials
// h_l(n) = h(r_l + l n) / lambda(l).

#ifndef IWB_INTERSECTIVE_HPP
#define IWB_INTERSECTIVE_HPP

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "iwb/polycore.hpp"

namespace iwb {

struct LocalRootData {
  std::uint64_t p = 0;
  mpz_class root;  // in [0, p^precision)
  int multiplicity = 0;
  int precision = 0;
};

/// A p-adic root of h, stored as a leaf of the lifting tree: the root is
/// r + p^e * t where t is the unique root of `node` lifting t0 (node'(t0)
/// is a unit mod p).
class PadicRoot {
 public:
  PadicRoot(std::uint64_t p, int multiplicity, mpz_class r, int e, IntPoly node, std::uint64_t t0);
  std::uint64_t p() const { return p_; }
  int multiplicity() const { return multiplicity_; }
  /// Residue of the root modulo p^precision, in [0, p^precision).
  mpz_class residue(int precision) const;
  LocalRootData data(int precision) const;

 private:
  std::uint64_t p_;
  int multiplicity_;
  mpz_class r_;
  int e_;
  IntPoly node_;
  std::uint64_t t0_;
};

/// All distinct p-adic roots of h (h not identically zero), sorted by
/// multiplicity and then by residue at the least precision separating them.
std::vector<PadicRoot> padic_root_list(const IntPoly& h, std::uint64_t p);
/// Roots as LocalRootData at the requested precision.
std::vector<LocalRootData> padic_roots(const IntPoly& h, std::uint64_t p, int precision);

/// Least precision at which the given roots have pairwise distinct residues.
int separating_precision(const std::vector<PadicRoot>& roots);

/// True when h(x) == 0 (mod p^e) has a solution.
bool has_root_mod(const IntPoly& h, std::uint64_t p, int e);

struct Verdict {
  enum class Kind { kCertified, kNotIntersective, kEmpiricalUpTo };
  Kind kind = Kind::kEmpiricalUpTo;
  mpz_class root;          // kCertified
  std::uint64_t witness_p = 0;  // kNotIntersective: p^witness_e
  int witness_e = 0;
  std::uint64_t prime_bound = 0;  // kEmpiricalUpTo
  nlohmann::json to_json() const;
};

Verdict intersectivity_verdict(const IntPoly& h, std::uint64_t prime_bound, int depth_bound);

/// Per-prime override of the default root choice: either an index into
/// padic_root_list or a residue selecting the root congruent to it modulo
/// p^separating_precision.
struct RootOverride {
  std::optional<int> index;
  std::optional<mpz_class> value;
};

/// The fixed choice of z_p for every prime, computed lazily. Default: the
/// first root in padic_root_list order (least multiplicity, then least
/// residue). Thread-safe.
class RootChoices {
 public:
  explicit RootChoices(IntPoly h, std::map<std::uint64_t, RootOverride> overrides = {});
  const IntPoly& base() const { return h_; }
  /// Throws kMissingRootData when h has no p-adic root.
  const PadicRoot& choose(std::uint64_t p) const;
  mpz_class root_residue(const mpz_class& ell) const;
  mpz_class lambda_of(const mpz_class& ell) const;

 private:
  IntPoly h_;
  std::map<std::uint64_t, RootOverride> overrides_;
  mutable std::mutex mu_;
  mutable std::map<std::uint64_t, std::unique_ptr<PadicRoot>> cache_;
};

struct AuxiliaryContext {
  IntPoly base;
  mpz_class ell = 1;
  mpz_class r_ell = 0;
  mpz_class lambda_ell = 1;
  IntPoly aux;
  std::vector<LocalRootData> roots;  // primes dividing ell
  std::shared_ptr<const RootChoices> choices;

  nlohmann::json to_json() const;
};

/// Throws kNonIntegral when lambda(ell) fails to divide h(r_ell + ell n).
AuxiliaryContext auxiliary_poly(std::shared_ptr<const RootChoices> choices, const mpz_class& ell);

/// R_h = (k+1) 2^k max|a_i|.
mpz_class coefficient_bound(const IntPoly& h);

struct InheritanceReport {
  mpz_class ell, q;
  bool shift_divisible = false;
  mpz_class shift;                 // (r_{q l} - r_l) / l when divisible
  std::vector<long> violations;    // n values where the identity fails
  int checked = 0;
  bool ok() const { return shift_divisible && violations.empty(); }
  nlohmann::json to_json() const;
};

InheritanceReport inheritance_check(std::shared_ptr<const RootChoices> choices, const mpz_class& ell,
                                    const mpz_class& q, int sample_count);

}  // namespace iwb

#endif  // IWB_INTERSECTIVE_HPP
