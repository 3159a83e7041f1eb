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

#include "iwb/search.hpp"

#include <algorithm>
#include <bit>
#include <chrono>

#include "iwb/errors.hpp"
#include "iwb/format.hpp"
#include "iwb/numtheory.hpp"
#include "iwb/sieve.hpp"

namespace iwb {

namespace {

using Words = std::vector<std::uint64_t>;

bool test_bit(const Words& w, std::uint64_t i) { return ((w[i >> 6] >> (i & 63)) & 1U) != 0; }
void set_bit(Words& w, std::uint64_t i) { w[i >> 6] |= std::uint64_t{1} << (i & 63); }
void clear_bit(Words& w, std::uint64_t i) { w[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

// out = w >> s (bit i of out is bit i + s of w).
Words shift_down(const Words& w, std::uint64_t s) {
  Words out(w.size(), 0);
  const std::size_t ws = s >> 6;
  const unsigned bs = s & 63;
  for (std::size_t i = 0; i + ws < w.size(); ++i) {
    std::uint64_t v = w[i + ws] >> bs;
    if (bs != 0 && i + ws + 1 < w.size()) v |= w[i + ws + 1] << (64 - bs);
    out[i] = v;
  }
  return out;
}

// Lowest set bit at or above `from`, or `limit` when none.
std::uint64_t next_bit(const Words& w, std::uint64_t from, std::uint64_t limit) {
  if (from >= limit) return limit;
  std::size_t i = from >> 6;
  std::uint64_t cur = w[i] & (~std::uint64_t{0} << (from & 63));
  while (true) {
    if (cur != 0) {
      const std::uint64_t b = (static_cast<std::uint64_t>(i) << 6) + static_cast<std::uint64_t>(std::countr_zero(cur));
      return b < limit ? b : limit;
    }
    if (++i >= w.size()) return limit;
    cur = w[i];
  }
}

}  // namespace

std::vector<std::uint64_t> forbidden_values(const IntPoly& aux, std::uint64_t X, const ForbiddenOptions& opts) {
  if (aux.degree() < 1) fail(ErrorCode::kDomain, "forbidden_values: aux must be nonconstant");
  std::optional<SieveTable> table;
  if (opts.mode == ForbiddenMode::kSieved) table.emplace(aux, opts.U);
  const mpz_class Xz = to_mpz(X);
  std::vector<std::uint64_t> out;
  auto admit = [&](const mpz_class& n, const mpz_class& v) {
    if (v < 1 || v > Xz) return;
    if (table && !table->in_W(n)) return;
    out.push_back(to_u64(v));
  };
  if (opts.over_integers) {
    // |aux(n)| <= X forces n to be a root of aux - c for some |c| <= X.
    const mpz_class B = std::max(root_bound(aux - IntPoly::constant(Xz)), root_bound(aux + IntPoly::constant(Xz)));
    for (mpz_class n = -B; n <= B; ++n) admit(n, aux(n));
  } else {
    mpz_class prev;
    for (mpz_class n = 1;; ++n) {
      const mpz_class v = aux(n);
      if (n > 1 && v <= prev) fail(ErrorCode::kDomain, "forbidden_values: aux is not increasing on N");
      if (v > Xz) break;
      prev = v;
      admit(n, v);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::uint64_t> powers_up_to(std::uint64_t X, int k) {
  if (k < 1) fail(ErrorCode::kInvalidArgument, "powers_up_to: k must be positive");
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 1;; ++n) {
    unsigned __int128 v = 1;
    for (int i = 0; i < k && v <= X; ++i) v *= n;
    if (v > X) break;
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

std::optional<Violation> verify_avoiding(const AvoidingSet& A, const std::vector<std::uint64_t>& F) {
  const std::uint64_t X = A.X();
  if (A.size() < 2) return std::nullopt;
  std::vector<std::uint64_t> fs(F);
  std::sort(fs.begin(), fs.end());
  const Words& w = A.words();
  for (std::uint64_t f : fs) {
    if (f == 0) continue;
    if (f >= X) break;
    const Words sh = shift_down(w, f);
    for (std::size_t i = 0; i < w.size(); ++i) {
      const std::uint64_t both = w[i] & sh[i];
      if (both != 0) {
        const std::uint64_t a = (static_cast<std::uint64_t>(i) << 6) + static_cast<std::uint64_t>(std::countr_zero(both));
        return Violation{a, a + f, f};
      }
    }
  }
  return std::nullopt;
}

AvoidingSet greedy_avoiding(const std::vector<std::uint64_t>& F, std::uint64_t X) {
  AvoidingSet A(X);
  std::vector<std::uint64_t> fs;
  for (auto f : F) {
    if (f >= 1 && f < X) fs.push_back(f);
  }
  std::sort(fs.begin(), fs.end());
  fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
  std::vector<char> blocked(X + 1, 0);
  for (std::uint64_t n = 1; n <= X; ++n) {
    if (blocked[n]) continue;
    A.insert(n);
    for (auto f : fs) {
      if (n + f > X) break;
      blocked[n + f] = 1;
    }
  }
  return A;
}

namespace {

// 64 bits of w starting at lo, truncated at limit.
std::uint64_t extract64(const Words& w, std::uint64_t lo, std::uint64_t limit) {
  const std::size_t i = lo >> 6;
  const unsigned off = lo & 63;
  std::uint64_t v = w[i] >> off;
  if (off != 0 && i + 1 < w.size()) v |= w[i + 1] << (64 - off);
  const std::uint64_t span = limit - lo;
  if (span < 64) v &= (std::uint64_t{1} << span) - 1;
  return v;
}

class RussianDoll {
 public:
  RussianDoll(const std::vector<std::uint64_t>& F, std::uint64_t X, double budget)
      : X_(X), nwords_((X >> 6) + 1), budget_(budget) {
    forbid_ = Words(nwords_, 0);
    for (auto f : F) {
      if (f >= 1 && f <= X) {
        set_bit(forbid_, f);
        fs_.push_back(f);
      }
    }
    std::sort(fs_.begin(), fs_.end());
    fs_.erase(std::unique(fs_.begin(), fs_.end()), fs_.end());
    D_.assign(X + 1, 0);
    stack_.resize(X + 2);  // depth never exceeds X
    build_window_table();
    start_ = std::chrono::steady_clock::now();
  }

  ExactResult run() {
    ExactResult res;
    std::vector<std::uint64_t> best;
    for (std::uint64_t m = 1; m <= X_; ++m) {
      // D(m) is D(m-1) or D(m-1) + 1, and a set of the larger size must
      // contain both 1 and m (otherwise it fits in a translate of [m-1]).
      target_ = D_[m - 1] + 1;
      m_ = m;
      found_.clear();
      if (m == 1) {
        found_ = {1};
      } else if (!test_bit(forbid_, m - 1)) {
        Words cand(nwords_, 0);
        for (std::uint64_t v = 2; v < m; ++v) {
          if (!test_bit(forbid_, v - 1) && !test_bit(forbid_, m - v)) set_bit(cand, v);
        }
        cur_ = {1, m};
        dfs(std::move(cand), 0);
      }
      if (!found_.empty()) {
        D_[m] = target_;
        best = found_;
      } else {
        D_[m] = D_[m - 1];
      }
    }
    std::sort(best.begin(), best.end());
    res.size = D_[X_];
    res.witness = AvoidingSet::from_members(X_, best);
    res.table = D_;
    res.nodes = nodes_;
    return res;
  }

 private:
  static constexpr unsigned kWindow = 22;

  // mis_[mask]: largest avoiding subset of the positions in mask, for a
  // window of kWindow consecutive integers.
  void build_window_table() {
    std::uint32_t forbid = 0;
    for (auto f : fs_) {
      if (f < kWindow) forbid |= 1U << f;
    }
    mis_.assign(std::size_t{1} << kWindow, 0);
    for (std::uint32_t mask = 1; mask < (1U << kWindow); ++mask) {
      const unsigned low = static_cast<unsigned>(std::countr_zero(mask));
      const std::uint32_t rest = mask & (mask - 1);
      const std::uint8_t take = 1 + mis_[rest & ~(forbid << low)];
      mis_[mask] = std::max(take, mis_[rest]);
    }
  }

  // part[a] bounds an avoiding subset of the candidates pos[a..]: the best
  // split into runs, a run of width w holding at most min(D(w), its length),
  // exactly mis_ when it fits a window.
  void bound(const Words& cand, std::vector<std::uint64_t>& pos, std::vector<std::uint64_t>& part) const {
    pos.clear();
    for (std::uint64_t v = next_bit(cand, 0, m_); v < m_; v = next_bit(cand, v + 1, m_)) pos.push_back(v);
    const std::size_t c = pos.size();
    part.assign(c + 1, 0);
    for (std::size_t a = c; a-- > 0;) {
      std::uint64_t best = UINT64_MAX;
      for (std::size_t b = a; b < c; ++b) {
        const std::uint64_t width = pos[b] - pos[a] + 1;
        const std::uint64_t run = width <= kWindow ? mis_[extract64(cand, pos[a], pos[b] + 1)]
                                                   : std::min<std::uint64_t>(D_[width], b - a + 1);
        best = std::min(best, run + part[b + 1]);
      }
      part[a] = best;
    }
  }

  void check_budget() {
    if (budget_ <= 0 || (nodes_ & 0xFFFF) != 0) return;
    const double spent = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (spent > budget_) {
      fail(ErrorCode::kCapExceeded, "exact_max_avoiding: time budget " + fmt17(budget_) + " s exhausted at m=" +
                                        std::to_string(m_) + " (D(" + std::to_string(m_ - 1) +
                                        ")=" + std::to_string(D_[m_ - 1]) + ")");
    }
  }

  // cand holds the vertices above the last chosen one compatible with cur_.
  void dfs(Words cand, std::size_t depth) {
    ++nodes_;
    check_budget();
    if (cur_.size() >= target_) {
      found_ = cur_;
      return;
    }
    auto& [pos, part] = stack_[depth];
    bound(cand, pos, part);
    for (std::size_t a = 0; a < pos.size(); ++a) {
      // Leaving pos[0..a) out keeps part[a] valid for what remains.
      if (cur_.size() + part[a] < target_) return;
      const std::uint64_t v = pos[a];
      clear_bit(cand, v);
      Words next = cand;
      for (auto f : fs_) {
        if (v + f >= m_) break;
        clear_bit(next, v + f);
      }
      cur_.push_back(v);
      dfs(std::move(next), depth + 1);
      cur_.pop_back();
      if (!found_.empty()) return;
    }
  }

  std::uint64_t X_;
  std::size_t nwords_;
  double budget_;
  Words forbid_;
  std::vector<std::uint64_t> fs_;
  std::vector<std::uint64_t> D_;
  std::vector<std::uint8_t> mis_;
  std::vector<std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>> stack_;
  std::chrono::steady_clock::time_point start_;
  std::uint64_t target_ = 0;
  std::uint64_t m_ = 0;
  std::vector<std::uint64_t> cur_;
  std::vector<std::uint64_t> found_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

ExactResult exact_max_avoiding(const std::vector<std::uint64_t>& F, std::uint64_t X, std::uint64_t cap,
                               double time_budget_s) {
  if (X > cap) {
    fail(ErrorCode::kCapExceeded, "exact_max_avoiding: X=" + std::to_string(X) + " above cap " + std::to_string(cap));
  }
  if (X == 0) {
    ExactResult r;
    r.table = {0};
    return r;
  }
  return RussianDoll(F, X, time_budget_s).run();
}

}  // namespace iwb
