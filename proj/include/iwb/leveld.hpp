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

// Pairwise-coprime modulus families, the covering number l(r), fraction
// lifting, and a numerical audit of the arithmetic level-d inequality.

#ifndef IWB_LEVELD_HPP
#define IWB_LEVELD_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <vector>

#include "iwb/harmonic.hpp"
#include "iwb/numtheory.hpp"

namespace iwb {

struct FamilyConstants {
  double C1 = 10;
  double C2 = 100;
  double C3 = 100;
};

/// A member is held factored; its integer value may be astronomically large.
struct FamilyMember {
  Factorization factors;
  bool distinguished = false;
  mpz_class value() const;
  std::optional<std::uint64_t> value_u64() const;
  /// log2 of the value, from the factorization.
  double log2_value() const;
};

class ModulusFamily {
 public:
  /// variant 1 or 2. Throws kInvalidArgument unless 0 < alpha < 1/2.
  static ModulusFamily build(int variant, double alpha, double epsilon, const FamilyConstants& c = {});
  /// Explicit members (variant 0); throws kInvalidArgument if not pairwise coprime.
  static ModulusFamily from_members(const std::vector<std::uint64_t>& members);

  int variant() const { return variant_; }
  double alpha() const { return alpha_; }
  double epsilon() const { return epsilon_; }
  double L() const { return L_; }
  /// Primes at or below the cutoff go into the distinguished member.
  double cutoff() const { return cutoff_; }
  double P_max() const { return P_max_; }
  const std::vector<FamilyMember>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool degenerate() const;
  bool pairwise_coprime() const;
  /// Index of the member divisible by p, if any.
  std::optional<std::size_t> member_of(std::uint64_t p) const;

  nlohmann::json to_json() const;

 private:
  int variant_ = 0;
  double alpha_ = 0, epsilon_ = 0, L_ = 0, cutoff_ = 0, P_max_ = 0;
  FamilyConstants constants_;
  std::vector<FamilyMember> members_;
};

/// Member indices of the least S with r | prod_{q in S} q; nullopt when no
/// such S exists.
std::optional<std::vector<std::size_t>> cover(const mpz_class& r, const ModulusFamily& Q);
/// |cover(r)|, or nullopt for infinity.
std::optional<std::size_t> l_value(const mpz_class& r, const ModulusFamily& Q);

struct LiftedFraction {
  std::vector<std::size_t> S;
  mpz_class R;  // prod_{q in S} q
  mpz_class b;  // a R / q, so a/q = b/R
  nlohmann::json to_json() const;
};

/// Throws kInvalidArgument if gcd(a, q) != 1 and kInfeasible if l(q) is infinite.
LiftedFraction lift_fraction(const mpz_class& a, const mpz_class& q, const ModulusFamily& Q);

struct LevelDHypotheses {
  bool alpha_range = false;  // 0 < alpha < 1/2
  bool alpha_floor = false;  // alpha > 2 X^{-1/2}
  bool max_modulus = false;  // max q <= X^{1/(32 log(1/alpha))}
  bool d_range = false;      // d <= 2^{-7} log(1/alpha)
  bool all() const { return alpha_range && alpha_floor && max_modulus && d_range; }
};

struct DensityWitness {
  std::vector<std::size_t> S;
  std::uint64_t modulus = 0;
  std::uint64_t r = 0;
  double average = 0;
  double threshold = 0;  // 2^{|S|} alpha
};

struct LevelDReport {
  std::uint64_t X = 0;
  int d = 0;
  double alpha = 0;
  double lhs = 0;
  double rhs = 0;  // alpha^2 X^2 (C0 log(1/alpha) / d)^d
  bool energy_branch = false;
  std::optional<DensityWitness> density;
  LevelDHypotheses hypotheses;
  /// Neither branch holds.
  bool violated() const { return !energy_branch && !density; }
  nlohmann::json to_json() const;
};

inline constexpr double kLevelDC0 = 8192.0;

/// f[x - 1] = f(x) for x in [1, X], |f| <= 1. Requires 1 <= d <= |Q| and
/// every member of Q to fit a machine word.
LevelDReport level_d_audit(const std::vector<Complex>& f, const ModulusFamily& Q, int d, double alpha);

}  // namespace iwb

#endif  // IWB_LEVELD_HPP
