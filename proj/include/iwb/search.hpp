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

// Forbidden-difference sets and the extremal quantity D(F, X).

#ifndef IWB_SEARCH_HPP
#define IWB_SEARCH_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "iwb/avoiding_set.hpp"
#include "iwb/polycore.hpp"

namespace iwb {

enum class ForbiddenMode { kAll, kSieved };

struct ForbiddenOptions {
  ForbiddenMode mode = ForbiddenMode::kAll;
  double U = 2;                // sieve level for kSieved
  bool over_integers = false;  // image of Z instead of N
};

/// Sorted distinct values aux(n) in [1, X]. Over N, aux must be strictly
/// increasing from n = 1 (kDomain otherwise).
std::vector<std::uint64_t> forbidden_values(const IntPoly& aux, std::uint64_t X, const ForbiddenOptions& opts = {});

/// The k-th powers in [1, X].
std::vector<std::uint64_t> powers_up_to(std::uint64_t X, int k);

struct Violation {
  std::uint64_t a = 0, b = 0, diff = 0;  // a < b, b - a = diff in F
};

/// Smallest forbidden difference first, then smallest a.
std::optional<Violation> verify_avoiding(const AvoidingSet& A, const std::vector<std::uint64_t>& F);

AvoidingSet greedy_avoiding(const std::vector<std::uint64_t>& F, std::uint64_t X);

struct ExactResult {
  std::uint64_t size = 0;
  AvoidingSet witness;
  std::vector<std::uint64_t> table;  // table[m] = D(F, m) for m = 0..X
  std::uint64_t nodes = 0;
};

inline constexpr std::uint64_t kExactSearchCap = 2000;

/// D(F, X) by a Russian-doll search over prefixes: D(F, m) for every
/// m <= X comes out as a by-product. kCapExceeded when X > cap, or when a
/// positive time budget (seconds) runs out.
ExactResult exact_max_avoiding(const std::vector<std::uint64_t>& F, std::uint64_t X,
                               std::uint64_t cap = kExactSearchCap, double time_budget_s = 0);

}  // namespace iwb

#endif  // IWB_SEARCH_HPP
