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

#include "iwb/leveld.hpp"

#include <algorithm>
#include <cmath>

#include "iwb/errors.hpp"

namespace iwb {

namespace {

constexpr std::uint64_t kMaxFoldModulus = std::uint64_t{1} << 24;
constexpr double kMaxMemberBits = 1 << 26;

// Calls fn(indices) for every size-k subset of {0..n-1} in lexicographic order.
template <class Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::optional<std::uint64_t> product_u64(const std::vector<std::uint64_t>& m, const std::vector<std::size_t>& S) {
  unsigned __int128 r = 1;
  for (std::size_t i : S) {
    r *= m[i];
    if (r > UINT64_MAX) return std::nullopt;
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace

mpz_class FamilyMember::value() const {
  if (log2_value() > kMaxMemberBits) fail(ErrorCode::kCapExceeded, "family member too large to materialize");
  mpz_class v = 1;
  for (const auto& pp : factors) v *= ipow(pp.p, pp.e);
  return v;
}

std::optional<std::uint64_t> FamilyMember::value_u64() const {
  if (log2_value() > 64) return std::nullopt;
  const mpz_class v = value();
  if (!fits_u64(v)) return std::nullopt;
  return to_u64(v);
}

double FamilyMember::log2_value() const {
  double s = 0;
  for (const auto& pp : factors) s += pp.e * std::log2(static_cast<double>(pp.p));
  return s;
}

ModulusFamily ModulusFamily::build(int variant, double alpha, double epsilon, const FamilyConstants& c) {
  if (variant != 1 && variant != 2) fail(ErrorCode::kInvalidArgument, "build_family: variant must be 1 or 2");
  if (!(alpha > 0 && alpha < 0.5)) fail(ErrorCode::kInvalidArgument, "build_family: alpha must lie in (0, 1/2)");
  if (!(epsilon > 0)) fail(ErrorCode::kInvalidArgument, "build_family: epsilon must be positive");
  ModulusFamily Q;
  Q.variant_ = variant;
  Q.alpha_ = alpha;
  Q.epsilon_ = epsilon;
  Q.constants_ = c;
  const double L = std::log(1 / alpha);
  Q.L_ = L;
  double exponent_real;
  if (variant == 1) {
    Q.cutoff_ = std::pow(L, 2 + epsilon);
    Q.P_max_ = std::max(c.C1 * std::pow(alpha, -2 - epsilon), Q.cutoff_);
    exponent_real = 2 * (2 + epsilon) * L;
  } else {
    const double logL = std::log(L);
    Q.cutoff_ = c.C3 * std::pow(L, 3 + epsilon);
    Q.P_max_ = std::max(c.C2 * std::pow(L, (2 + epsilon) * std::floor(logL)), Q.cutoff_);
    exponent_real = 2 * (2 + epsilon) * logL * logL;
  }
  if (Q.P_max_ > 1e9) fail(ErrorCode::kCapExceeded, "build_family: P_max above 10^9");
  const int exponent = static_cast<int>(std::ceil(exponent_real));

  FamilyMember dist;
  dist.distinguished = true;
  const auto cut = static_cast<std::uint64_t>(std::floor(Q.cutoff_));
  const auto pmax = static_cast<std::uint64_t>(std::floor(Q.P_max_));
  const std::vector<std::uint64_t> primes = primes_up_to(pmax);
  for (std::uint64_t p : primes) {
    if (p <= cut) {
      if (exponent > 0) dist.factors.push_back({p, exponent});
      continue;
    }
    int b = 0;
    unsigned __int128 v = 1;
    while (v * p <= pmax) {
      v *= p;
      ++b;
    }
    Q.members_.push_back({{{p, b}}, false});
  }
  Q.members_.insert(Q.members_.begin(), std::move(dist));
  if (!Q.pairwise_coprime()) fail(ErrorCode::kInternal, "build_family: members not pairwise coprime");
  return Q;
}

ModulusFamily ModulusFamily::from_members(const std::vector<std::uint64_t>& members) {
  ModulusFamily Q;
  for (std::uint64_t m : members) {
    if (m < 1) fail(ErrorCode::kInvalidArgument, "family members must be positive");
    Q.members_.push_back({factor_u64(m), false});
  }
  if (!Q.pairwise_coprime()) fail(ErrorCode::kInvalidArgument, "family members must be pairwise coprime");
  return Q;
}

bool ModulusFamily::degenerate() const { return members_.size() <= 1; }

bool ModulusFamily::pairwise_coprime() const {
  std::vector<std::uint64_t> seen;
  for (const auto& m : members_) {
    for (const auto& pp : m.factors) seen.push_back(pp.p);
  }
  std::sort(seen.begin(), seen.end());
  return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

std::optional<std::size_t> ModulusFamily::member_of(std::uint64_t p) const {
  for (std::size_t i = 0; i < members_.size(); ++i) {
    for (const auto& pp : members_[i].factors) {
      if (pp.p == p) return i;
    }
  }
  return std::nullopt;
}

nlohmann::json ModulusFamily::to_json() const {
  nlohmann::json ms = nlohmann::json::array();
  nlohmann::json dist = nullptr;
  for (const auto& m : members_) {
    nlohmann::json f = nlohmann::json::array();
    for (const auto& pp : m.factors) f.push_back({{"p", pp.p}, {"b", pp.e}});
    if (m.distinguished) {
      dist = {{"factors", f}, {"log2", m.log2_value()}};
    } else {
      ms.push_back(f);
    }
  }
  return {{"variant", variant_}, {"alpha", alpha_}, {"epsilon", epsilon_}, {"L", L_},
          {"cutoff", cutoff_},   {"P_max", P_max_},  {"distinguished", dist}, {"members", ms},
          {"size", members_.size()}};
}

std::optional<std::vector<std::size_t>> cover(const mpz_class& r, const ModulusFamily& Q) {
  if (r < 1) fail(ErrorCode::kInvalidArgument, "l_value: r must be positive");
  std::vector<std::size_t> S;
  for (const auto& pp : factor(r)) {
    bool found = false;
    for (std::size_t i = 0; i < Q.members().size() && !found; ++i) {
      for (const auto& mp : Q.members()[i].factors) {
        if (mp.p != pp.p) continue;
        if (mp.e < pp.e) return std::nullopt;
        S.push_back(i);
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
  }
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());
  return S;
}

std::optional<std::size_t> l_value(const mpz_class& r, const ModulusFamily& Q) {
  auto S = cover(r, Q);
  if (!S) return std::nullopt;
  return S->size();
}

nlohmann::json LiftedFraction::to_json() const {
  return {{"S", S}, {"R", int_to_json(R)}, {"b", int_to_json(b)}};
}

LiftedFraction lift_fraction(const mpz_class& a, const mpz_class& q, const ModulusFamily& Q) {
  if (q < 1) fail(ErrorCode::kInvalidArgument, "lift_fraction: q must be positive");
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t());
  if (g != 1) fail(ErrorCode::kInvalidArgument, "lift_fraction: gcd(a, q) != 1");
  auto S = cover(q, Q);
  if (!S) fail(ErrorCode::kInfeasible, "lift_fraction: l(q) is infinite for q=" + q.get_str());
  LiftedFraction out;
  out.S = *S;
  out.R = 1;
  for (std::size_t i : out.S) out.R *= Q.members()[i].value();
  out.b = a * (out.R / q);
  mpz_class R_mod = out.R;
  out.b %= R_mod;
  if (out.b < 0) out.b += R_mod;
  // a/q = b/R mod 1 and no member of S divides b.
  mpq_class diff = mpq_class(a, q) - mpq_class(out.b, out.R);
  diff.canonicalize();
  if (diff.get_den() != 1) fail(ErrorCode::kInternal, "lift_fraction: fraction identity failed");
  for (std::size_t i : out.S) {
    if (mpz_divisible_p(out.b.get_mpz_t(), Q.members()[i].value().get_mpz_t()) != 0) {
      fail(ErrorCode::kInternal, "lift_fraction: a member divides b");
    }
  }
  return out;
}

nlohmann::json LevelDReport::to_json() const {
  nlohmann::json dens = nullptr;
  if (density) {
    dens = {{"S", density->S},
            {"modulus", density->modulus},
            {"r", density->r},
            {"average", density->average},
            {"threshold", density->threshold}};
  }
  return {{"X", X},
          {"d", d},
          {"alpha", alpha},
          {"lhs", lhs},
          {"rhs", rhs},
          {"energy_branch", energy_branch},
          {"density_branch", dens},
          {"violated", violated()},
          {"hypotheses",
           {{"alpha_range", hypotheses.alpha_range},
            {"alpha_floor", hypotheses.alpha_floor},
            {"max_modulus", hypotheses.max_modulus},
            {"d_range", hypotheses.d_range},
            {"all", hypotheses.all()}}}};
}

LevelDReport level_d_audit(const std::vector<Complex>& f, const ModulusFamily& Q, int d, double alpha) {
  if (d < 1 || static_cast<std::size_t>(d) > Q.size()) {
    fail(ErrorCode::kInvalidArgument, "level_d_audit: d=" + std::to_string(d) + " outside [1, |Q|]");
  }
  if (!(alpha > 0 && alpha < 1)) fail(ErrorCode::kInvalidArgument, "level_d_audit: alpha must lie in (0, 1)");
  std::vector<std::uint64_t> m;
  for (const auto& mem : Q.members()) {
    auto v = mem.value_u64();
    if (!v) fail(ErrorCode::kCapExceeded, "level_d_audit: family member exceeds 64 bits");
    m.push_back(*v);
  }
  const std::uint64_t X = f.size();
  LevelDReport rep;
  rep.X = X;
  rep.d = d;
  rep.alpha = alpha;
  const double L = std::log(1 / alpha);
  const double Xd = static_cast<double>(X);
  rep.rhs = alpha * alpha * Xd * Xd * std::pow(kLevelDC0 * L / d, d);
  rep.hypotheses.alpha_range = alpha < 0.5;
  rep.hypotheses.alpha_floor = X > 0 && alpha > 2 / std::sqrt(Xd);
  rep.hypotheses.max_modulus =
      static_cast<double>(*std::max_element(m.begin(), m.end())) <= std::pow(Xd, 1 / (32 * L));
  rep.hypotheses.d_range = d <= L / 128;

  // Left side: fold f mod R_S, DFT, keep frequencies divisible by no member of S.
  double lhs = 0, comp = 0;
  for_each_subset(m.size(), static_cast<std::size_t>(d), [&](const std::vector<std::size_t>& S) {
    const auto R = product_u64(m, S);
    if (!R || *R > kMaxFoldModulus) fail(ErrorCode::kCapExceeded, "level_d_audit: prod S above 2^24");
    std::vector<Complex> c(*R);
    for (std::uint64_t x = 1; x <= X; ++x) c[x % *R] += f[x - 1];
    const std::vector<Complex> F = complex_dft(std::move(c));
    for (std::uint64_t a = 0; a < *R; ++a) {
      bool ok = true;
      for (std::size_t i : S) {
        if (a % m[i] == 0) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      const double v = std::norm(F[a]);
      const double t = lhs + v;
      comp += std::fabs(lhs) >= v ? (lhs - t) + v : (v - t) + lhs;
      lhs = t;
    }
  });
  rep.lhs = lhs + comp;
  rep.energy_branch = rep.lhs <= rep.rhs;

  // Density alternative over 1 <= |S| <= 2 log(1/alpha).
  const auto max_size = std::min<std::size_t>(m.size(), static_cast<std::size_t>(std::floor(2 * L)));
  for (std::size_t k = 1; k <= max_size && !rep.density; ++k) {
    const double threshold = std::ldexp(alpha, static_cast<int>(k));
    for_each_subset(m.size(), k, [&](const std::vector<std::size_t>& S) {
      if (rep.density) return;
      const auto R = product_u64(m, S);
      if (!R) return;
      const std::uint64_t buckets = std::min<std::uint64_t>(*R, X + 1);
      std::vector<double> sum(buckets, 0.0);
      std::vector<std::uint64_t> cnt(buckets, 0);
      for (std::uint64_t x = 1; x <= X; ++x) {
        const std::uint64_t r = x % *R;
        const std::uint64_t slot = *R <= X ? r : x;
        sum[slot] += std::abs(f[x - 1]);
        ++cnt[slot];
      }
      for (std::uint64_t s = 0; s < buckets; ++s) {
        if (cnt[s] == 0) continue;
        const double avg = sum[s] / static_cast<double>(cnt[s]);
        if (avg > threshold) {
          rep.density = DensityWitness{S, *R, s % *R, avg, threshold};
          return;
        }
      }
    });
  }
  return rep;
}

}  // namespace iwb
