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

#include "iwb/intersective.hpp"

#include <algorithm>
#include <limits>

#include "iwb/errors.hpp"
#include "iwb/numtheory.hpp"

namespace iwb {

namespace {

constexpr std::uint64_t kMaxScanPrime = 100000000;

std::vector<std::uint64_t> reduce_mod(const IntPoly& f, std::uint64_t m) {
  std::vector<std::uint64_t> out(static_cast<std::size_t>(f.degree()) + 1, 0);
  for (int i = 0; i <= f.degree(); ++i) out[i] = mpz_fdiv_ui(f.coeff(i).get_mpz_t(), m);
  return out;
}

std::uint64_t horner_mod(const std::vector<std::uint64_t>& c, std::uint64_t x, std::uint64_t m) {
  unsigned __int128 acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = (acc * x + *it) % m;
  return static_cast<std::uint64_t>(acc);
}

// Minimum p-adic valuation over the coefficients (INT_MAX for zero).
int poly_valuation(const IntPoly& f, std::uint64_t p) {
  int v = std::numeric_limits<int>::max();
  for (const auto& c : f.coeffs()) {
    if (c != 0) v = std::min(v, valuation(c, p));
    if (v == 0) break;
  }
  return v;
}

IntPoly strip_p(const IntPoly& f, std::uint64_t p, int v) {
  if (v == 0) return f;
  IntPoly out;
  divide_exact(f, ipow(p, v), out);
  return out;
}

// f(t) = s(r + p^e t) / p^v with f nonzero mod p.
void explore(const IntPoly& f, std::uint64_t p, int mult, const mpz_class& r, int e, int budget,
             std::vector<PadicRoot>& out) {
  const auto fc = reduce_mod(f, p);
  const auto fd = reduce_mod(poly_derivative(f), p);
  for (std::uint64_t t0 = 0; t0 < p; ++t0) {
    if (horner_mod(fc, t0, p) != 0) continue;
    if (horner_mod(fd, t0, p) != 0) {
      out.emplace_back(p, mult, r, e, f, t0);
      continue;
    }
    if (e + 1 > budget) {
      fail(ErrorCode::kPrecisionExhausted,
           "padic_roots: residue " + std::to_string(t0) + " unresolved at depth " + std::to_string(e + 1) +
               " for p=" + std::to_string(p));
    }
    IntPoly g = poly_compose_affine(f, to_mpz(t0), to_mpz(p));
    g = strip_p(g, p, poly_valuation(g, p));
    explore(g, p, mult, r + ipow(p, e) * to_mpz(t0), e + 1, budget, out);
  }
}

int lifting_budget(const IntPoly& s, std::uint64_t p) {
  const mpz_class res = resultant(s, poly_derivative(s));
  const int v = res == 0 ? 0 : valuation(res, p);
  return 2 * v + 2;
}

// Does g(t) == 0 mod p^need have a solution? g is nonzero mod p.
bool root_exists(const IntPoly& g, std::uint64_t p, int need) {
  if (need <= 0) return true;
  const auto gc = reduce_mod(g, p);
  const auto gd = reduce_mod(poly_derivative(g), p);
  for (std::uint64_t t0 = 0; t0 < p; ++t0) {
    if (horner_mod(gc, t0, p) != 0) continue;
    if (horner_mod(gd, t0, p) != 0) return true;  // Hensel
    const IntPoly g2 = poly_compose_affine(g, to_mpz(t0), to_mpz(p));
    if (g2.is_zero()) return true;
    const int v2 = poly_valuation(g2, p);
    if (v2 >= need) return true;
    if (root_exists(strip_p(g2, p, v2), p, need - v2)) return true;
  }
  return false;
}

}  // namespace

PadicRoot::PadicRoot(std::uint64_t p, int multiplicity, mpz_class r, int e, IntPoly node, std::uint64_t t0)
    : p_(p), multiplicity_(multiplicity), r_(std::move(r)), e_(e), node_(std::move(node)), t0_(t0) {}

mpz_class PadicRoot::residue(int precision) const {
  if (precision < 1) fail(ErrorCode::kInvalidArgument, "residue: precision must be >= 1");
  const mpz_class mod = ipow(p_, precision);
  mpz_class z;
  if (precision <= e_) {
    mpz_fdiv_r(z.get_mpz_t(), r_.get_mpz_t(), mod.get_mpz_t());
    return z;
  }
  const int need = precision - e_;
  const IntPoly d = poly_derivative(node_);
  mpz_class t = to_mpz(t0_);
  for (int prec = 1; prec < need;) {
    prec = std::min(2 * prec, need);
    const mpz_class m = ipow(p_, prec);
    mpz_class ft = node_(t);
    mpz_class dt = d(t);
    mpz_class inv;
    mpz_fdiv_r(dt.get_mpz_t(), dt.get_mpz_t(), m.get_mpz_t());
    if (mpz_invert(inv.get_mpz_t(), dt.get_mpz_t(), m.get_mpz_t()) == 0) {
      fail(ErrorCode::kInternal, "residue: derivative not invertible");
    }
    t -= ft * inv;
    mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), m.get_mpz_t());
  }
  z = r_ + ipow(p_, e_) * t;
  mpz_fdiv_r(z.get_mpz_t(), z.get_mpz_t(), mod.get_mpz_t());
  return z;
}

LocalRootData PadicRoot::data(int precision) const {
  return {p_, residue(precision), multiplicity_, precision};
}

int separating_precision(const std::vector<PadicRoot>& roots) {
  for (int prec = 1; prec <= 4096; ++prec) {
    std::vector<mpz_class> res;
    res.reserve(roots.size());
    for (const auto& z : roots) res.push_back(z.residue(prec));
    std::sort(res.begin(), res.end());
    if (std::adjacent_find(res.begin(), res.end()) == res.end()) return prec;
  }
  fail(ErrorCode::kInternal, "separating_precision: roots coincide");
}

std::vector<PadicRoot> padic_root_list(const IntPoly& h, std::uint64_t p) {
  if (h.degree() < 1) fail(ErrorCode::kDomain, "padic_roots: polynomial must be nonconstant");
  if (p < 2 || p > kMaxScanPrime || mpz_probab_prime_p(to_mpz(p).get_mpz_t(), 30) == 0) {
    fail(ErrorCode::kInvalidArgument, "padic_roots: p must be a prime below 10^8");
  }
  std::vector<PadicRoot> roots;
  for (const auto& [s, m] : squarefree_decomposition(h)) {
    explore(s, p, m, 0, 0, lifting_budget(s, p), roots);
  }
  if (roots.size() > 1) {
    const int prec = separating_precision(roots);
    std::stable_sort(roots.begin(), roots.end(), [prec](const PadicRoot& a, const PadicRoot& b) {
      if (a.multiplicity() != b.multiplicity()) return a.multiplicity() < b.multiplicity();
      return a.residue(prec) < b.residue(prec);
    });
  }
  return roots;
}

std::vector<LocalRootData> padic_roots(const IntPoly& h, std::uint64_t p, int precision) {
  if (precision < 1) fail(ErrorCode::kInvalidArgument, "padic_roots: precision must be >= 1");
  std::vector<LocalRootData> out;
  for (const auto& z : padic_root_list(h, p)) out.push_back(z.data(precision));
  return out;
}

bool has_root_mod(const IntPoly& h, std::uint64_t p, int e) {
  if (e <= 0 || h.is_zero()) return true;
  const int v = poly_valuation(h, p);
  if (v >= e) return true;
  return root_exists(strip_p(h, p, v), p, e - v);
}

nlohmann::json Verdict::to_json() const {
  switch (kind) {
    case Kind::kCertified:
      return {{"verdict", "certified"}, {"root", int_to_json(root)}};
    case Kind::kNotIntersective:
      return {{"verdict", "not_intersective"},
              {"witness", {{"p", witness_p}, {"e", witness_e}, {"modulus", int_to_json(ipow(witness_p, witness_e))}}}};
    case Kind::kEmpiricalUpTo:
      return {{"verdict", "empirical"}, {"prime_bound", prime_bound}};
  }
  return nullptr;
}

namespace {

std::optional<mpz_class> smallest_integer_root(const IntPoly& h) {
  const IntPoly s = squarefree_part(h);
  if (s.coeff(0) == 0) return mpz_class(0);
  Factorization fz;
  try {
    fz = factor(s.coeff(0));
  } catch (const Error&) {
    return std::nullopt;
  }
  std::vector<mpz_class> divisors{1};
  for (const auto& pp : fz) {
    const std::size_t n = divisors.size();
    mpz_class pk = 1;
    for (int k = 1; k <= pp.e; ++k) {
      pk *= static_cast<unsigned long>(pp.p);
      for (std::size_t i = 0; i < n; ++i) divisors.push_back(divisors[i] * pk);
    }
  }
  std::sort(divisors.begin(), divisors.end());
  for (const auto& d : divisors) {
    if (s(d) == 0) return d;
    if (s(-d) == 0) return mpz_class(-d);
  }
  return std::nullopt;
}

}  // namespace

Verdict intersectivity_verdict(const IntPoly& h, std::uint64_t prime_bound, int depth_bound) {
  if (h.degree() < 2) fail(ErrorCode::kDomain, "intersectivity_verdict: degree must be >= 2");
  if (depth_bound < 1) fail(ErrorCode::kInvalidArgument, "intersectivity_verdict: depth_bound must be >= 1");
  Verdict out;
  if (auto r = smallest_integer_root(h)) {
    out.kind = Verdict::Kind::kCertified;
    out.root = *r;
    return out;
  }
  const auto sqf = squarefree_decomposition(h);
  for (std::uint64_t p : primes_up_to(prime_bound)) {
    bool has_root = false;
    for (const auto& [s, m] : sqf) {
      const int budget = std::min(lifting_budget(s, p), depth_bound);
      std::vector<PadicRoot> roots;
      try {
        explore(s, p, m, 0, 0, budget, roots);
      } catch (const Error& err) {
        if (err.code() != ErrorCode::kPrecisionExhausted) throw;
        fail(ErrorCode::kDepthExhausted, std::string("intersectivity_verdict: ") + err.what());
      }
      if (!roots.empty()) {
        has_root = true;
        break;
      }
    }
    if (has_root) continue;
    for (int e = 1; e <= depth_bound; ++e) {
      if (!has_root_mod(h, p, e)) {
        out.kind = Verdict::Kind::kNotIntersective;
        out.witness_p = p;
        out.witness_e = e;
        return out;
      }
    }
    fail(ErrorCode::kDepthExhausted, "intersectivity_verdict: no witness for p=" + std::to_string(p) +
                                         " within depth " + std::to_string(depth_bound));
  }
  out.kind = Verdict::Kind::kEmpiricalUpTo;
  out.prime_bound = prime_bound;
  return out;
}

RootChoices::RootChoices(IntPoly h, std::map<std::uint64_t, RootOverride> overrides)
    : h_(std::move(h)), overrides_(std::move(overrides)) {
  if (h_.degree() < 1) fail(ErrorCode::kDomain, "RootChoices: polynomial must be nonconstant");
}

const PadicRoot& RootChoices::choose(std::uint64_t p) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (auto it = cache_.find(p); it != cache_.end()) return *it->second;
  std::vector<PadicRoot> roots = padic_root_list(h_, p);
  if (roots.empty()) {
    fail(ErrorCode::kMissingRootData, "no " + std::to_string(p) + "-adic root of " + h_.to_string());
  }
  std::size_t pick = 0;
  if (auto ov = overrides_.find(p); ov != overrides_.end()) {
    if (ov->second.index) {
      const int idx = *ov->second.index;
      if (idx < 0 || idx >= static_cast<int>(roots.size())) {
        fail(ErrorCode::kConfig, "root override index out of range for p=" + std::to_string(p));
      }
      pick = static_cast<std::size_t>(idx);
    } else if (ov->second.value) {
      const int prec = roots.size() > 1 ? separating_precision(roots) : 1;
      const mpz_class mod = ipow(p, prec);
      mpz_class want;
      mpz_fdiv_r(want.get_mpz_t(), ov->second.value->get_mpz_t(), mod.get_mpz_t());
      int found = -1;
      for (std::size_t i = 0; i < roots.size(); ++i) {
        if (roots[i].residue(prec) == want) {
          if (found >= 0) fail(ErrorCode::kConfig, "root override value ambiguous");
          found = static_cast<int>(i);
        }
      }
      if (found < 0) {
        fail(ErrorCode::kConfig, "root override value " + want.get_str() + " matches no " + std::to_string(p) +
                                     "-adic root");
      }
      pick = static_cast<std::size_t>(found);
    }
  }
  auto [it, inserted] = cache_.emplace(p, std::make_unique<PadicRoot>(roots[pick]));
  return *it->second;
}

mpz_class RootChoices::root_residue(const mpz_class& ell) const {
  if (ell < 1) fail(ErrorCode::kInvalidArgument, "root_residue: ell must be >= 1");
  mpz_class x = 0;
  mpz_class mod = 1;
  for (const auto& pp : factor(ell)) {
    const mpz_class pe = ipow(pp.p, pp.e);
    const mpz_class z = choose(pp.p).residue(pp.e);
    // x + mod * k == z (mod pe)
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), mod.get_mpz_t(), pe.get_mpz_t());
    mpz_class k = (z - x) * inv;
    mpz_fdiv_r(k.get_mpz_t(), k.get_mpz_t(), pe.get_mpz_t());
    x += mod * k;
    mod *= pe;
  }
  mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), ell.get_mpz_t());
  if (x > 0) x -= ell;
  return x;
}

mpz_class RootChoices::lambda_of(const mpz_class& ell) const {
  if (ell < 1) fail(ErrorCode::kInvalidArgument, "lambda_of: ell must be >= 1");
  mpz_class out = 1;
  for (const auto& pp : factor(ell)) out *= ipow(pp.p, pp.e * choose(pp.p).multiplicity());
  return out;
}

nlohmann::json AuxiliaryContext::to_json() const {
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : roots) {
    rs.push_back({{"p", r.p}, {"root", int_to_json(r.root)}, {"multiplicity", r.multiplicity},
                  {"precision", r.precision}});
  }
  return {{"ell", int_to_json(ell)},
          {"r_ell", int_to_json(r_ell)},
          {"lambda_ell", int_to_json(lambda_ell)},
          {"aux", poly_to_json(aux)},
          {"roots", rs}};
}

AuxiliaryContext auxiliary_poly(std::shared_ptr<const RootChoices> choices, const mpz_class& ell) {
  if (!choices) fail(ErrorCode::kInvalidArgument, "auxiliary_poly: missing root choices");
  if (ell < 1) fail(ErrorCode::kInvalidArgument, "auxiliary_poly: ell must be >= 1");
  const IntPoly& h = choices->base();
  if (h.leading() <= 0) fail(ErrorCode::kDomain, "auxiliary_poly: leading coefficient must be positive");
  AuxiliaryContext ctx;
  ctx.base = h;
  ctx.ell = ell;
  ctx.choices = choices;
  for (const auto& pp : factor(ell)) ctx.roots.push_back(choices->choose(pp.p).data(pp.e));
  ctx.r_ell = choices->root_residue(ell);
  ctx.lambda_ell = choices->lambda_of(ell);
  const IntPoly num = poly_compose_affine(h, ctx.r_ell, ell);
  if (!divide_exact(num, ctx.lambda_ell, ctx.aux)) {
    fail(ErrorCode::kNonIntegral, "auxiliary_poly: lambda(" + ell.get_str() + ") = " + ctx.lambda_ell.get_str() +
                                      " does not divide h(r + l n)");
  }
  return ctx;
}

mpz_class coefficient_bound(const IntPoly& h) {
  const int k = h.degree();
  if (k < 2) fail(ErrorCode::kDomain, "coefficient_bound: degree must be >= 2");
  mpz_class mx = 0;
  for (const auto& c : h.coeffs()) mx = std::max(mx, mpz_class(abs(c)));
  return mpz_class(k + 1) * (mpz_class(1) << k) * mx;
}

nlohmann::json InheritanceReport::to_json() const {
  return {{"ell", int_to_json(ell)},         {"q", int_to_json(q)},
          {"shift_divisible", shift_divisible}, {"shift", int_to_json(shift)},
          {"checked", checked},              {"violations", violations},
          {"ok", ok()}};
}

InheritanceReport inheritance_check(std::shared_ptr<const RootChoices> choices, const mpz_class& ell,
                                    const mpz_class& q, int sample_count) {
  InheritanceReport rep;
  rep.ell = ell;
  rep.q = q;
  const AuxiliaryContext base = auxiliary_poly(choices, ell);
  const AuxiliaryContext lifted = auxiliary_poly(choices, q * ell);
  const mpz_class diff = lifted.r_ell - base.r_ell;
  rep.shift_divisible = mpz_divisible_p(diff.get_mpz_t(), ell.get_mpz_t()) != 0;
  if (!rep.shift_divisible) return rep;
  mpz_divexact(rep.shift.get_mpz_t(), diff.get_mpz_t(), ell.get_mpz_t());
  const mpz_class lq = choices->lambda_of(q);
  for (long n = 1; n <= sample_count; ++n) {
    ++rep.checked;
    if (lq * lifted.aux(n) != base.aux(rep.shift + q * n)) rep.violations.push_back(n);
  }
  return rep;
}

}  // namespace iwb
