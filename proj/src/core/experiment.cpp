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

#include "iwb/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "iwb/errors.hpp"
#include "iwb/format.hpp"
#include "iwb/harmonic.hpp"
#include "iwb/intersective.hpp"
#include "iwb/leveld.hpp"
#include "iwb/numtheory.hpp"
#include "iwb/search.hpp"
#include "iwb/sieve.hpp"

namespace iwb {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Serialization

namespace {

constexpr std::uint64_t kExactDoubleLimit = std::uint64_t{1} << 53;

void dump_string(std::string& out, const std::string& s) { out += json(s).dump(); }

void dump_into(std::string& out, const json& j) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ',';
        first = false;
        dump_string(out, k);
        out += ':';
        dump_into(out, v);
      }
      out += '}';
      return;
    }
    case json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        dump_into(out, v);
      }
      out += ']';
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v)) {
        out += fmt17(v);
      } else {
        dump_string(out, fmt17(v));
      }
      return;
    }
    case json::value_t::number_unsigned: {
      const auto v = j.get<std::uint64_t>();
      out += v > kExactDoubleLimit ? json(std::to_string(v)).dump() : std::to_string(v);
      return;
    }
    case json::value_t::number_integer: {
      const auto v = j.get<std::int64_t>();
      const std::uint64_t mag = v < 0 ? 0 - static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v);
      out += mag > kExactDoubleLimit ? json(std::to_string(v)).dump() : std::to_string(v);
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const json& j) {
  std::string out;
  dump_into(out, j);
  return out;
}

// ---------------------------------------------------------------------------
// Constants and presets

json Tolerances::to_json() const {
  return {{"gauss_C_max", gauss_C_max},
          {"gauss_exponent", gauss_exponent},
          {"gauss_abs", gauss_abs},
          {"brun_rel", brun_rel},
          {"spectrum_rel", spectrum_rel}};
}

json Constants::to_json() const {
  json j = increment.to_json();
  j["U"] = U ? json(*U) : json(nullptr);
  j["Z"] = Z ? json(*Z) : json(nullptr);
  j["K"] = K;
  j["resolution"] = resolution;
  j["prime_bound"] = prime_bound;
  j["depth_bound"] = depth_bound;
  j["tolerances"] = tol.to_json();
  return j;
}

Preset preset_from_string(const std::string& s) {
  if (s == "desk") return Preset::kDesk;
  if (s == "paper") return Preset::kPaper;
  fail(ErrorCode::kConfig, "unknown preset '" + s + "' (expected desk or paper)");
}

const char* preset_name(Preset p) { return p == Preset::kPaper ? "paper" : "desk"; }

Constants preset_constants(Preset p, int degree) {
  Constants c;
  c.increment = p == Preset::kPaper ? IncrementConfig::paper(degree) : IncrementConfig::desk();
  return c;
}

namespace {

double need_number(const json& v, const std::string& key) {
  if (!v.is_number()) fail(ErrorCode::kConfig, "'" + key + "' must be a number");
  return v.get<double>();
}

std::uint64_t need_uint(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    if (!s.empty() && s.size() <= 20 && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      mpz_class z(s);
      if (fits_u64(z)) return to_u64(z);
    }
  }
  fail(ErrorCode::kConfig, "'" + key + "' must be a nonnegative integer");
}

Tolerances parse_tolerances(const json& j, Tolerances t) {
  if (!j.is_object()) fail(ErrorCode::kConfig, "'tolerances' must be an object");
  for (const auto& [k, v] : j.items()) {
    if (k == "gauss_C_max") t.gauss_C_max = need_number(v, k);
    else if (k == "gauss_exponent") t.gauss_exponent = need_number(v, k);
    else if (k == "gauss_abs") t.gauss_abs = need_number(v, k);
    else if (k == "brun_rel") t.brun_rel = need_number(v, k);
    else if (k == "spectrum_rel") t.spectrum_rel = need_number(v, k);
    else fail(ErrorCode::kConfig, "unknown tolerance '" + k + "'");
  }
  return t;
}

Constants parse_constants(const json& j, Constants c) {
  if (!j.is_object()) fail(ErrorCode::kConfig, "'constants' must be an object");
  json rest = json::object();
  for (const auto& [k, v] : j.items()) {
    if (k == "U") c.U = v.is_null() ? std::nullopt : std::optional<double>(need_number(v, k));
    else if (k == "Z") c.Z = v.is_null() ? std::nullopt : std::optional<double>(need_number(v, k));
    else if (k == "K") c.K = static_cast<int>(need_uint(v, k));
    else if (k == "resolution") c.resolution = static_cast<int>(need_uint(v, k));
    else if (k == "prime_bound") c.prime_bound = need_uint(v, k);
    else if (k == "depth_bound") c.depth_bound = static_cast<int>(need_uint(v, k));
    else if (k == "tolerances") c.tol = parse_tolerances(v, c.tol);
    else rest[k] = v;
  }
  c.increment = IncrementConfig::from_json(rest, c.increment);
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// Task parameters

namespace {

// Strict reader: every key must be consumed, and the resolved values are
// echoed back so a record can be replayed on its own.
class Params {
 public:
  explicit Params(const json& in) : in_(in.is_null() ? json::object() : in) {
    if (!in_.is_object()) fail(ErrorCode::kConfig, "task params must be an object");
  }

  bool has(const std::string& k) const { return in_.contains(k); }

  const json& raw(const std::string& k) {
    used_.insert(k);
    return in_.at(k);
  }

  double num(const std::string& k, double def) {
    const double v = has(k) ? need_number(raw(k), k) : def;
    out_[k] = v;
    return v;
  }
  double num(const std::string& k) {
    require(k);
    return num(k, 0);
  }
  std::uint64_t uint(const std::string& k, std::uint64_t def) {
    const std::uint64_t v = has(k) ? need_uint(raw(k), k) : def;
    out_[k] = v;
    return v;
  }
  std::uint64_t uint(const std::string& k) {
    require(k);
    return uint(k, 0);
  }
  bool flag(const std::string& k, bool def) {
    bool v = def;
    if (has(k)) {
      const json& j = raw(k);
      if (!j.is_boolean()) fail(ErrorCode::kConfig, "'" + k + "' must be a boolean");
      v = j.get<bool>();
    }
    out_[k] = v;
    return v;
  }
  std::string str(const std::string& k, const std::string& def) {
    std::string v = def;
    if (has(k)) {
      const json& j = raw(k);
      if (!j.is_string()) fail(ErrorCode::kConfig, "'" + k + "' must be a string");
      v = j.get<std::string>();
    }
    out_[k] = v;
    return v;
  }
  mpz_class integer(const std::string& k, const mpz_class& def) {
    mpz_class v = def;
    if (has(k)) {
      try {
        v = int_from_json(raw(k));
      } catch (const std::exception&) {
        fail(ErrorCode::kConfig, "'" + k + "' must be an integer");
      }
    }
    out_[k] = int_to_json(v);
    return v;
  }
  std::vector<std::uint64_t> uints(const std::string& k, const std::vector<std::uint64_t>& def) {
    std::vector<std::uint64_t> v = def;
    if (has(k)) {
      const json& j = raw(k);
      if (!j.is_array()) fail(ErrorCode::kConfig, "'" + k + "' must be an array");
      v.clear();
      for (const auto& e : j) v.push_back(need_uint(e, k));
    }
    out_[k] = v;
    return v;
  }
  std::vector<double> nums(const std::string& k, const std::vector<double>& def) {
    std::vector<double> v = def;
    if (has(k)) {
      const json& j = raw(k);
      if (!j.is_array()) fail(ErrorCode::kConfig, "'" + k + "' must be an array");
      v.clear();
      for (const auto& e : j) v.push_back(need_number(e, k));
    }
    out_[k] = v;
    return v;
  }
  void echo(const std::string& k, json v) { out_[k] = std::move(v); }

  json finish(const std::string& op) const {
    for (const auto& [k, v] : in_.items()) {
      if (!used_.count(k)) fail(ErrorCode::kConfig, "op '" + op + "': unknown parameter '" + k + "'");
    }
    return out_;
  }

 private:
  void require(const std::string& k) const {
    if (!has(k)) fail(ErrorCode::kConfig, "missing parameter '" + k + "'");
  }

  json in_;
  json out_ = json::object();
  std::set<std::string> used_;
};

struct OpContext {
  const TaskEnv& env;
  Params& p;
  TaskResult& out;

  std::shared_ptr<const RootChoices> choices() const {
    if (!choices_) {
      const Verdict v = intersectivity_verdict(env.polynomial, env.constants.prime_bound, env.constants.depth_bound);
      if (v.kind == Verdict::Kind::kNotIntersective) {
        fail(ErrorCode::kMissingRootData, "polynomial is not intersective (no root mod " +
                                              std::to_string(v.witness_p) + "^" + std::to_string(v.witness_e) + ")");
      }
      choices_ = std::make_shared<RootChoices>(env.polynomial);
    }
    return choices_;
  }

  AuxiliaryContext context(const mpz_class& ell) const { return auxiliary_poly(choices(), ell); }

  double U(double fallback) const { return env.constants.U.value_or(fallback); }

  mutable std::shared_ptr<const RootChoices> choices_;
};

// Forbidden differences: the polynomial's image by default.
std::vector<std::uint64_t> forbidden_spec(OpContext& c, std::uint64_t X) {
  if (!c.p.has("F")) {
    c.p.echo("F", "image");
    return forbidden_values(c.context(1).aux, X);
  }
  const json& spec = c.p.raw("F");
  c.p.echo("F", spec);
  if (spec.is_string() && spec.get<std::string>() == "image") return forbidden_values(c.context(1).aux, X);
  if (spec.is_array()) {
    std::vector<std::uint64_t> F;
    for (const auto& e : spec) F.push_back(need_uint(e, "F"));
    std::sort(F.begin(), F.end());
    F.erase(std::unique(F.begin(), F.end()), F.end());
    return F;
  }
  if (spec.is_object() && spec.size() == 1 && spec.contains("powers")) {
    return powers_up_to(X, static_cast<int>(need_uint(spec.at("powers"), "powers")));
  }
  fail(ErrorCode::kConfig, "'F' must be \"image\", {\"powers\": k} or an integer array");
}

AvoidingSet set_spec(OpContext& c, std::uint64_t seed) {
  if (!c.p.has("set")) fail(ErrorCode::kConfig, "missing parameter 'set'");
  const json& spec = c.p.raw("set");
  c.p.echo("set", spec);
  if (!spec.is_object() || spec.size() != 1) fail(ErrorCode::kConfig, "'set' must be an object with one key");
  const auto& [kind, v] = *spec.items().begin();
  if (kind == "greedy") {
    const std::uint64_t X = need_uint(v, "greedy");
    return greedy_avoiding(forbidden_values(c.context(1).aux, X), X);
  }
  if (kind == "interval") {
    const std::uint64_t X = need_uint(v, "interval");
    AvoidingSet A(X);
    for (std::uint64_t n = 1; n <= X; ++n) A.insert(n);
    return A;
  }
  if (kind == "members") {
    if (!v.is_object() || !v.contains("X") || !v.contains("members") || v.size() != 2) {
      fail(ErrorCode::kConfig, "'members' needs exactly X and members");
    }
    std::vector<std::uint64_t> ms;
    for (const auto& e : v.at("members")) ms.push_back(need_uint(e, "members"));
    return AvoidingSet::from_members(need_uint(v.at("X"), "X"), ms);
  }
  if (kind == "residue") {
    if (!v.is_object() || v.size() != 3 || !v.contains("X") || !v.contains("q") || !v.contains("r")) {
      fail(ErrorCode::kConfig, "'residue' needs exactly X, q, r");
    }
    const std::uint64_t X = need_uint(v.at("X"), "X");
    const std::uint64_t q = need_uint(v.at("q"), "q");
    const std::uint64_t r = need_uint(v.at("r"), "r");
    if (q == 0) fail(ErrorCode::kConfig, "'residue' needs q >= 1");
    AvoidingSet A(X);
    for (std::uint64_t n = 1; n <= X; ++n) {
      if (n % q == r % q) A.insert(n);
    }
    return A;
  }
  if (kind == "random") {
    if (!v.is_object() || v.size() != 2 || !v.contains("X") || !v.contains("alpha")) {
      fail(ErrorCode::kConfig, "'random' needs exactly X and alpha");
    }
    const std::uint64_t X = need_uint(v.at("X"), "X");
    const double alpha = need_number(v.at("alpha"), "alpha");
    Rng rng(seed);
    AvoidingSet A(X);
    for (std::uint64_t n = 1; n <= X; ++n) {
      if (rng.uniform() < alpha) A.insert(n);
    }
    return A;
  }
  fail(ErrorCode::kConfig, "unknown set kind '" + kind + "'");
}

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

using OpFn = std::function<json(OpContext&)>;

json op_verdict(OpContext& c) {
  const auto pb = c.p.uint("prime_bound", c.env.constants.prime_bound);
  const auto db = c.p.uint("depth_bound", static_cast<std::uint64_t>(c.env.constants.depth_bound));
  return intersectivity_verdict(c.env.polynomial, pb, static_cast<int>(db)).to_json();
}

json op_padic_roots(OpContext& c) {
  const auto p = c.p.uint("p");
  const auto prec = c.p.uint("precision", 4);
  json rows = json::array();
  for (const auto& r : padic_roots(c.env.polynomial, p, static_cast<int>(prec))) {
    rows.push_back({{"p", r.p}, {"root", int_to_json(r.root)}, {"multiplicity", r.multiplicity},
                    {"precision", r.precision}});
  }
  return {{"roots", rows}};
}

json op_aux(OpContext& c) {
  std::vector<std::uint64_t> ells = c.p.uints("ells", {});
  if (ells.empty()) {
    const auto lo = c.p.uint("ell_min", 1);
    const auto hi = c.p.uint("ell_max", 200);
    for (std::uint64_t l = lo; l <= hi; ++l) ells.push_back(l);
  }
  const bool with_rows = c.p.flag("rows", ells.size() <= 20);
  const mpz_class Rh = coefficient_bound(c.env.polynomial);
  const int k = c.env.polynomial.degree();
  json rows = json::array();
  bool ok = true;
  int bad = 0;
  for (auto l : ells) {
    const AuxiliaryContext ctx = c.context(l);
    mpz_class maxc = 0;
    for (const auto& co : ctx.aux.coeffs()) maxc = std::max(maxc, mpz_class(abs(co)));
    const mpz_class bound = Rh * ipow(l, k - 1);
    const bool this_ok = sgn(ctx.aux.leading()) > 0 && maxc <= bound && ctx.aux.degree() == k;
    if (!this_ok) {
      ok = false;
      ++bad;
    }
    if (with_rows) {
      json row = ctx.to_json();
      row["coefficient_bound_ok"] = maxc <= bound;
      rows.push_back(row);
    }
  }
  json r = {{"count", ells.size()}, {"failures", bad}, {"R_h", int_to_json(Rh)}, {"pass", ok}};
  if (with_rows) r["rows"] = rows;
  return r;
}

json op_inheritance(OpContext& c) {
  const auto pairs = c.p.uint("pairs", 100);
  const auto ell_max = c.p.uint("ell_max", 30);
  const auto q_max = c.p.uint("q_max", 30);
  const auto samples = c.p.uint("samples", 50);
  const auto seed = c.p.uint("seed", c.env.seed);
  Rng rng(seed);
  std::uint64_t violations = 0, checked = 0;
  json failures = json::array();
  for (std::uint64_t i = 0; i < pairs; ++i) {
    const std::uint64_t ell = 1 + rng.below(ell_max);
    const std::uint64_t q = 1 + rng.below(q_max);
    const InheritanceReport rep = inheritance_check(c.choices(), ell, q, static_cast<int>(samples));
    checked += static_cast<std::uint64_t>(rep.checked);
    if (!rep.ok()) {
      violations += rep.violations.size() + (rep.shift_divisible ? 0 : 1);
      if (failures.size() < 10) failures.push_back(rep.to_json());
    }
  }
  return {{"pairs", pairs}, {"checked", checked}, {"violations", violations}, {"failures", failures},
          {"pass", violations == 0}};
}

json op_sieve(OpContext& c) {
  const mpz_class ell = c.p.integer("ell", 1);
  const double U = c.p.num("U", c.U(2));
  const SieveTable t(c.context(ell).aux, U);
  json r = t.to_json();
  if (c.p.has("members_up_to")) {
    const auto n = c.p.uint("members_up_to");
    std::vector<std::uint64_t> ms;
    for (std::uint64_t i = 1; i <= n; ++i) {
      if (t.in_W(i)) ms.push_back(i);
    }
    r["members"] = ms;
  }
  return r;
}

json op_sieve_density(OpContext& c) {
  const mpz_class ell = c.p.integer("ell", 1);
  const std::vector<double> Us = c.p.nums("U", {2, 3, 5, 10});
  const auto cap = c.p.uint("period_cap", 20000000);
  const AuxiliaryContext ctx = c.context(ell);
  json rows = json::array();
  bool ok = true;
  for (double U : Us) {
    const SieveTable t(ctx.aux, U);
    if (!fits_u64(t.period()) || to_u64(t.period()) > cap) {
      fail(ErrorCode::kCapExceeded, "sieve_density: period " + t.period().get_str() + " above cap");
    }
    const std::uint64_t P = to_u64(t.period());
    std::uint64_t count = 0;
    for (std::uint64_t n = 1; n <= P; ++n) count += t.in_W(n) ? 1 : 0;
    const mpq_class J = t.J_factor();
    const mpq_class prod = mpq_class(mpz_class(static_cast<unsigned long>(count))) * J;
    const bool eq = prod == mpq_class(t.period());
    ok = ok && eq;
    rows.push_back({{"U", U}, {"period", int_to_json(t.period())}, {"count", count}, {"J", J.get_str()},
                    {"count_times_J", prod.get_str()}, {"exact", eq}});
  }
  return {{"rows", rows}, {"pass", ok}};
}

json op_brun(OpContext& c) {
  const mpz_class ell = c.p.integer("ell", 1);
  const double U = c.p.num("U", c.U(2));
  const auto q = c.p.uint("q", 1);
  const auto b = c.p.uint("b", 0);
  const auto t = c.p.uint("t");
  const SieveTable table(c.context(ell).aux, U);
  const BrunReport rep = brun_sum_audit(table, q, b, t);
  json r = rep.to_json();
  r["pass"] = !rep.main_term_applicable || rep.rel_error <= c.env.constants.tol.brun_rel;
  return r;
}

json op_weight_audit(OpContext& c) {
  const auto K = c.p.uint("K", static_cast<std::uint64_t>(c.env.constants.K));
  const auto R = c.p.uint("resolution", static_cast<std::uint64_t>(c.env.constants.resolution));
  const double t_max = c.p.num("t_max", 400);
  const bool samples = c.p.flag("samples", false);
  const SmoothWeight w(static_cast<int>(K), static_cast<int>(R));
  const WeightAuditReport rep = weight_fourier_audit(w, t_max);
  json r = rep.to_json(samples);
  r["decay_limit"] = weight_decay_limit(w);
  r["pass"] = rep.violations == 0;
  return r;
}

json op_gauss(OpContext& c) {
  const mpz_class ell = c.p.integer("ell", 1);
  const double U = c.p.num("U", c.U(2));
  const auto q_min = c.p.uint("q_min", 2);
  const auto q_max = c.p.uint("q_max", 200);
  const std::string which = c.p.str("a", "one");
  const bool primes_only = c.p.flag("primes_only", false);
  const bool odd_only = c.p.flag("odd_only", false);
  if (which != "one" && which != "all") fail(ErrorCode::kConfig, "gauss: 'a' must be \"one\" or \"all\"");
  const Tolerances& tol = c.env.constants.tol;
  const SieveTable table(c.context(ell).aux, U);
  json rows = json::array();
  double fitted = 0, worst_sqrt = 0;
  std::ostringstream csv;
  csv << "q,a,magnitude,sqrt_q\n";
  for (std::uint64_t q = std::max<std::uint64_t>(q_min, 1); q <= q_max; ++q) {
    if (primes_only && factor_u64(q).size() != 1) continue;
    if (primes_only && factor_u64(q)[0].e != 1) continue;
    if (odd_only && q % 2 == 0) continue;
    const std::uint64_t a_hi = which == "all" ? std::max<std::uint64_t>(q - 1, 1) : 1;
    for (std::uint64_t a = 1; a <= a_hi; ++a) {
      if (gcd_u64(a, q) != 1) continue;
      const double mag = std::abs(gauss_sum_sieved(table, a, q));
      const double sq = std::sqrt(static_cast<double>(q));
      fitted = std::max(fitted, mag / std::pow(static_cast<double>(q), tol.gauss_exponent));
      worst_sqrt = std::max(worst_sqrt, std::fabs(mag - sq));
      rows.push_back({{"q", q}, {"a", a}, {"magnitude", mag}, {"sqrt_q", sq}});
      csv << q << ',' << a << ',' << fmt17(mag) << ',' << fmt17(sq) << '\n';
    }
  }
  c.out.side_files["gauss"] = csv.str();
  return {{"rows", rows},
          {"fitted_C", fitted},
          {"exponent", tol.gauss_exponent},
          {"max_abs_minus_sqrt_q", worst_sqrt},
          {"pass", fitted <= tol.gauss_C_max}};
}

json op_weyl(OpContext& c) {
  const mpz_class ell = c.p.integer("ell", 1);
  const auto N = c.p.uint("N", 100000);
  const AuxiliaryContext ctx = c.context(ell);
  const HarmonicParams hp = HarmonicParams::make(ctx.aux, static_cast<double>(N));
  const double U = c.p.num("U", c.U(hp.U));
  std::vector<double> thetas = c.p.nums("thetas", {});
  if (thetas.empty()) {
    const auto samples = c.p.uint("samples", 16);
    const auto seed = c.p.uint("seed", c.env.seed);
    Rng rng(seed);
    for (std::uint64_t i = 0; i < samples; ++i) thetas.push_back(rng.uniform());
    c.p.echo("thetas", thetas);
  }
  std::optional<double> Z = c.env.constants.Z;
  if (c.p.has("Z")) Z = c.p.num("Z");
  const SieveTable table(ctx.aux, U);
  return weyl_sum_audit(table, N, thetas, Z).to_json();
}

json op_rational_approx(OpContext& c) {
  const double theta = c.p.num("theta");
  const mpz_class Qmax = c.p.integer("Qmax", 1000);
  return rational_approx(theta, Qmax).to_json();
}

json op_classify_arc(OpContext& c) {
  const double theta = c.p.num("theta");
  const double alpha = c.p.num("alpha");
  const double X = c.p.num("X");
  const ArcParams ap = ArcParams::make(alpha, c.env.constants.increment.epsilon, c.env.constants.increment.C1, X);
  json r = classify_arc(theta, ap).to_json();
  r["params"] = ap.to_json();
  return r;
}

json op_major_arc(OpContext& c) {
  const mpz_class ell = c.p.integer("ell", 1);
  const auto X = c.p.uint("X", 100000);
  const auto a = c.p.uint("a", 1);
  const auto q = c.p.uint("q", 1);
  const double theta = c.p.num("theta", 0);
  const bool enforce = c.p.flag("enforce", false);
  const AuxiliaryContext ctx = c.context(ell);
  const HarmonicParams hp = HarmonicParams::make(ctx.aux, static_cast<double>(X));
  const double U = c.p.num("U", c.U(hp.U));
  const auto K = c.p.uint("K", static_cast<std::uint64_t>(c.env.constants.K));
  const auto R = c.p.uint("resolution", static_cast<std::uint64_t>(c.env.constants.resolution));
  const SieveTable table(ctx.aux, U);
  const SmoothWeight w(static_cast<int>(K), static_cast<int>(R));
  return major_arc_predict(table, X, w, a, q, theta, enforce).to_json();
}

json op_minor_arc(OpContext& c) {
  const mpz_class ell = c.p.integer("ell", 1);
  const auto X = c.p.uint("X", 100000);
  const double alpha = c.p.num("alpha", 0.5);
  const AuxiliaryContext ctx = c.context(ell);
  const HarmonicParams hp = HarmonicParams::make(ctx.aux, static_cast<double>(X));
  const double U = c.p.num("U", c.U(hp.U));
  const auto K = c.p.uint("K", static_cast<std::uint64_t>(c.env.constants.K));
  const auto R = c.p.uint("resolution", static_cast<std::uint64_t>(c.env.constants.resolution));
  MinorArcOptions opts;
  opts.grid_factor = c.p.uint("grid_factor", opts.grid_factor);
  opts.adversarial_q_max = c.p.uint("adversarial_q_max", opts.adversarial_q_max);
  const SieveTable table(ctx.aux, U);
  const SmoothWeight w(static_cast<int>(K), static_cast<int>(R));
  const WeightedImage g = g_build(table, X, w);
  const auto& k = c.env.constants.increment;
  const ArcParams ap = ArcParams::make(alpha, k.epsilon, k.C1, static_cast<double>(X));
  json r = minor_arc_audit(g, ap, ctx.aux.degree(), opts).to_json();
  r["pass"] = r.at("clears");
  return r;
}

json op_mass(OpContext& c) {
  const auto seed = c.p.uint("seed", c.env.seed);
  const AvoidingSet A = set_spec(c, seed);
  const double xi = c.p.num("xi", 0);
  const double alpha = c.p.num("alpha", A.alpha());
  const bool direct = c.p.flag("direct", false);
  const auto top = c.p.uint("top", 10);
  const auto& k = c.env.constants.increment;
  ArcParams ap = ArcParams::make(alpha, k.epsilon, k.C1, static_cast<double>(A.X()));
  if (c.p.has("Qmax")) ap.Qmax = c.p.uint("Qmax");
  const MassProfile prof = initial_mass_profile(A, xi, ap);
  std::vector<std::uint64_t> order;
  for (std::uint64_t q = 2; q < prof.R.size(); ++q) order.push_back(q);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return prof.R[a] > prof.R[b]; });
  json best = json::array();
  for (std::size_t i = 0; i < order.size() && i < top; ++i) best.push_back({{"q", order[i]}, {"R", prof.R[order[i]]}});
  json r = {{"X", A.X()}, {"size", A.size()}, {"alpha", A.alpha()}, {"params", ap.to_json()},
            {"mass", prof.total}, {"top", best}};
  if (direct) r["mass_direct"] = initial_mass_direct(A, xi, ap);
  return r;
}

json op_family(OpContext& c) {
  const auto variant = c.p.uint("variant", 1);
  const double alpha = c.p.num("alpha");
  const double eps = c.p.num("epsilon", c.env.constants.increment.epsilon);
  FamilyConstants fc;
  fc.C1 = c.p.num("C1", c.env.constants.increment.C1);
  fc.C2 = c.p.num("C2", c.env.constants.increment.C2);
  fc.C3 = c.p.num("C3", c.env.constants.increment.C3);
  const ModulusFamily Q = ModulusFamily::build(static_cast<int>(variant), alpha, eps, fc);
  json r = Q.to_json();
  r["degenerate"] = Q.degenerate();
  r["pairwise_coprime"] = Q.pairwise_coprime();
  return r;
}

json op_lift(OpContext& c) {
  const mpz_class a = c.p.integer("a", 1);
  const mpz_class q = c.p.integer("q", 1);
  const ModulusFamily Q = ModulusFamily::from_members(c.p.uints("Q", {}));
  return lift_fraction(a, q, Q).to_json();
}

json op_leveld(OpContext& c) {
  const auto seed = c.p.uint("seed", c.env.seed);
  const AvoidingSet A = set_spec(c, seed);
  const ModulusFamily Q = ModulusFamily::from_members(c.p.uints("Q", {3, 4, 5, 7, 11}));
  const auto d = c.p.uint("d", 1);
  const double alpha = c.p.num("alpha", A.alpha());
  std::vector<Complex> f(A.X(), Complex(0, 0));
  for (auto n : A.members()) f[n - 1] = 1;
  const LevelDReport rep = level_d_audit(f, Q, static_cast<int>(d), alpha);
  json r = rep.to_json();
  r["pass"] = !rep.violated() || !rep.hypotheses.all();
  return r;
}

json op_F_eval(OpContext& c) {
  const double eps = c.p.num("epsilon", c.env.constants.increment.epsilon);
  double X = 0;
  if (c.p.has("log_X")) {
    X = std::exp(c.p.num("log_X"));
  } else {
    X = c.p.num("X");
  }
  return {{"value", F_eval(X, eps)}, {"d_eps", 1 / ((2 + eps) * (1 + eps) + 2)}};
}

json op_step(OpContext& c) {
  const auto seed = c.p.uint("seed", c.env.seed);
  const AvoidingSet A = set_spec(c, seed);
  const mpz_class ell = c.p.integer("ell", 1);
  const AuxiliaryContext ctx = c.context(ell);
  const StepOutcome o = increment_step(A, ctx, c.env.constants.increment);
  json r = o.to_json();
  bool ok = o.option != StepOption::kNone && o.option != StepOption::kOpt1 && o.new_alpha > o.old_alpha;
  if (o.rescaled && o.new_context) {
    ForbiddenOptions fo;
    fo.over_integers = true;
    const auto F = forbidden_values(o.new_context->aux, o.rescaled->X(), fo);
    const auto v = verify_avoiding(*o.rescaled, F);
    r["rescaled_verified"] = !v.has_value();
    ok = ok && !v.has_value();
  }
  r["pass"] = ok;
  return r;
}

json op_iterate(OpContext& c) {
  const auto seed = c.p.uint("seed", c.env.seed);
  const AvoidingSet A = set_spec(c, seed);
  const IterationTrace tr = iterate(A, c.choices(), c.env.constants.increment);
  c.out.side_files["trace"] = tr.to_csv();
  json r = tr.to_json();
  r["pass"] = tr.invariants_ok();
  return r;
}

json op_dmax(OpContext& c) {
  const auto X = c.p.uint("X", 60);
  const auto cap = c.p.uint("cap", kExactSearchCap);
  const double budget = c.p.num("time_budget_s", 0);
  const auto F = forbidden_spec(c, X);
  const ExactResult res = exact_max_avoiding(F, X, cap, budget);
  bool unit_steps = true;
  for (std::size_t m = 1; m < res.table.size(); ++m) {
    const auto step = res.table[m] - res.table[m - 1];
    unit_steps = unit_steps && res.table[m] >= res.table[m - 1] && step <= 1;
  }
  const bool verified = !verify_avoiding(res.witness, F).has_value() && res.witness.size() == res.size;
  std::ostringstream csv;
  csv << "X,D\n";
  for (std::size_t m = 1; m < res.table.size(); ++m) csv << m << ',' << res.table[m] << '\n';
  c.out.side_files["dmax"] = csv.str();
  return {{"X", X},
          {"size", res.size},
          {"witness", res.witness.to_json()},
          {"table", res.table},
          {"nodes", res.nodes},
          {"monotone_unit_steps", unit_steps},
          {"witness_verified", verified},
          {"pass", unit_steps && verified}};
}

json op_greedy(OpContext& c) {
  const std::vector<std::uint64_t> Xs = c.p.uints("X", {1000, 10000, 100000});
  const int k = c.env.polynomial.degree();
  const double expected = 1.0 - 1.0 / k;
  const double band = c.p.num("band", 0.05);
  json rows = json::array();
  std::vector<double> xs, ys;
  bool verified = true;
  std::ostringstream csv;
  csv << "X,size,X_pow\n";
  for (auto X : Xs) {
    const auto F = forbidden_values(c.context(1).aux, X);
    const AvoidingSet A = greedy_avoiding(F, X);
    const bool ok = !verify_avoiding(A, F).has_value();
    verified = verified && ok;
    const double xp = std::pow(static_cast<double>(X), expected);
    rows.push_back({{"X", X}, {"size", A.size()}, {"X_pow", xp}, {"verified", ok}});
    csv << X << ',' << A.size() << ',' << fmt17(xp) << '\n';
    if (A.size() > 0) {
      xs.push_back(static_cast<double>(X));
      ys.push_back(static_cast<double>(A.size()));
    }
  }
  c.out.side_files["greedy"] = csv.str();
  json r = {{"rows", rows}, {"expected_exponent", expected}, {"verified", verified}};
  if (xs.size() >= 2) {
    const double slope = loglog_slope(xs, ys);
    r["exponent"] = slope;
    r["pass"] = verified && std::fabs(slope - expected) <= band;
  } else {
    r["pass"] = verified;
  }
  return r;
}

json op_forbidden(OpContext& c) {
  const mpz_class ell = c.p.integer("ell", 1);
  const auto X = c.p.uint("X");
  ForbiddenOptions fo;
  const std::string mode = c.p.str("mode", "all");
  if (mode == "sieved") {
    fo.mode = ForbiddenMode::kSieved;
  } else if (mode != "all") {
    fail(ErrorCode::kConfig, "forbidden: mode must be all or sieved");
  }
  fo.U = c.p.num("U", c.U(2));
  fo.over_integers = c.p.flag("over_integers", false);
  return {{"values", forbidden_values(c.context(ell).aux, X, fo)}};
}

json op_verify(OpContext& c) {
  const auto seed = c.p.uint("seed", c.env.seed);
  const AvoidingSet A = set_spec(c, seed);
  const auto F = forbidden_spec(c, A.X());
  const auto v = verify_avoiding(A, F);
  json r = {{"avoiding", !v.has_value()}};
  if (v) r["violation"] = {{"a", v->a}, {"b", v->b}, {"diff", v->diff}};
  return r;
}

const std::map<std::string, OpFn>& registry() {
  static const std::map<std::string, OpFn> ops = {
      {"aux", op_aux},
      {"brun", op_brun},
      {"classify_arc", op_classify_arc},
      {"dmax", op_dmax},
      {"F_eval", op_F_eval},
      {"family", op_family},
      {"forbidden", op_forbidden},
      {"gauss", op_gauss},
      {"greedy", op_greedy},
      {"inheritance", op_inheritance},
      {"iterate", op_iterate},
      {"leveld", op_leveld},
      {"lift", op_lift},
      {"major_arc", op_major_arc},
      {"mass", op_mass},
      {"minor_arc", op_minor_arc},
      {"padic_roots", op_padic_roots},
      {"rational_approx", op_rational_approx},
      {"sieve", op_sieve},
      {"sieve_density", op_sieve_density},
      {"step", op_step},
      {"verdict", op_verdict},
      {"verify", op_verify},
      {"weight_audit", op_weight_audit},
      {"weyl", op_weyl},
  };
  return ops;
}

}  // namespace

std::vector<std::string> task_ops() {
  std::vector<std::string> out;
  for (const auto& [k, v] : registry()) out.push_back(k);
  return out;
}

TaskResult run_task(const std::string& op, const json& params, const TaskEnv& env) {
  const auto& ops = registry();
  auto it = ops.find(op);
  if (it == ops.end()) fail(ErrorCode::kConfig, "unknown op '" + op + "'");
  TaskResult out;
  Params p(params);
  OpContext ctx{env, p, out, nullptr};
  out.result = it->second(ctx);
  out.params = p.finish(op);
  return out;
}

// ---------------------------------------------------------------------------
// Configs

ExperimentConfig ExperimentConfig::parse(const json& j) {
  if (!j.is_object()) fail(ErrorCode::kConfig, "config must be a JSON object");
  static const std::set<std::string> keys = {"polynomial", "seed", "preset", "constants", "tasks", "output_dir"};
  for (const auto& [k, v] : j.items()) {
    if (!keys.count(k)) fail(ErrorCode::kConfig, "unknown config key '" + k + "'");
  }
  ExperimentConfig c;
  if (!j.contains("polynomial")) fail(ErrorCode::kConfig, "config needs 'polynomial'");
  try {
    c.polynomial = poly_from_json(j.at("polynomial"));
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(ErrorCode::kConfig, std::string("bad polynomial: ") + e.what());
  }
  if (c.polynomial.degree() < 1) fail(ErrorCode::kConfig, "polynomial must be nonconstant");
  if (j.contains("seed")) c.seed = need_uint(j.at("seed"), "seed");
  if (j.contains("preset")) {
    if (!j.at("preset").is_string()) fail(ErrorCode::kConfig, "'preset' must be a string");
    c.preset = preset_from_string(j.at("preset").get<std::string>());
  }
  c.constants = preset_constants(c.preset, c.polynomial.degree());
  if (j.contains("constants")) c.constants = parse_constants(j.at("constants"), c.constants);
  if (j.contains("output_dir")) {
    if (!j.at("output_dir").is_string()) fail(ErrorCode::kConfig, "'output_dir' must be a string");
    c.output_dir = j.at("output_dir").get<std::string>();
  }
  if (j.contains("tasks")) {
    const json& ts = j.at("tasks");
    if (!ts.is_array()) fail(ErrorCode::kConfig, "'tasks' must be an array");
    std::set<std::string> names;
    for (const auto& t : ts) {
      if (!t.is_object()) fail(ErrorCode::kConfig, "each task must be an object");
      TaskSpec spec;
      for (const auto& [k, v] : t.items()) {
        if (k == "name" && v.is_string()) spec.name = v.get<std::string>();
        else if (k == "op" && v.is_string()) spec.op = v.get<std::string>();
        else if (k == "params" && v.is_object()) spec.params = v;
        else if (k == "required" && v.is_boolean()) spec.required = v.get<bool>();
        else fail(ErrorCode::kConfig, "bad task key '" + k + "'");
      }
      if (spec.op.empty()) fail(ErrorCode::kConfig, "task without 'op'");
      if (!registry().count(spec.op)) fail(ErrorCode::kConfig, "unknown op '" + spec.op + "'");
      if (spec.name.empty()) spec.name = spec.op + "_" + std::to_string(c.tasks.size());
      if (!names.insert(spec.name).second) fail(ErrorCode::kConfig, "duplicate task name '" + spec.name + "'");
      c.tasks.push_back(std::move(spec));
    }
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kConfig, std::string("config is not valid JSON: ") + e.what());
  }
  return parse(j);
}

json ExperimentConfig::to_json() const {
  json ts = json::array();
  for (const auto& t : tasks) {
    ts.push_back({{"name", t.name}, {"op", t.op}, {"params", t.params}, {"required", t.required}});
  }
  return {{"polynomial", poly_to_json(polynomial)},
          {"seed", seed},
          {"preset", preset_name(preset)},
          {"constants", constants.to_json()},
          {"tasks", ts},
          {"output_dir", output_dir}};
}

// ---------------------------------------------------------------------------
// Runs

json TaskRecord::to_json() const {
  return {{"task", task}, {"op", op}, {"params", params}, {"result", result}, {"duration_ms", duration_ms}};
}

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorCode::kIo, "write failed for " + path.string());
}

std::string file_stem(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
    out += keep ? c : '_';
  }
  return out;
}

// splitmix64 step, to give each task its own stream.
std::uint64_t task_seed(std::uint64_t seed, std::size_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& cfg, const std::optional<std::string>& dir) {
  RunReport rep;
  rep.directory = dir.value_or(cfg.output_dir);
  // Nothing touches the disk until every task has run, so a config error
  // surfacing mid-run leaves no partial output.
  std::vector<std::pair<std::string, std::string>> files;
  std::string lines;
  for (std::size_t i = 0; i < cfg.tasks.size(); ++i) {
    const TaskSpec& t = cfg.tasks[i];
    TaskEnv env{cfg.polynomial, task_seed(cfg.seed, i), cfg.constants};
    TaskRecord rec;
    rec.task = t.name;
    rec.op = t.op;
    rec.required = t.required;
    const auto start = std::chrono::steady_clock::now();
    try {
      TaskResult r = run_task(t.op, t.params, env);
      rec.params = std::move(r.params);
      rec.result = std::move(r.result);
      for (const auto& [suffix, text] : r.side_files) files.emplace_back(file_stem(t.name) + "." + suffix + ".csv", text);
      rec.passed = !rec.result.is_object() || !rec.result.contains("pass") || rec.result.at("pass") == true;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kConfig) throw;
      rec.params = t.params;
      rec.result = {{"error", {{"code", error_code_name(e.code())}, {"message", e.what()}}}};
      rec.passed = false;
    }
    rec.duration_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (rec.required && !rec.passed) rep.failed_required.push_back(rec.task);
    lines += dump_json(rec.to_json()) + "\n";
    rep.records.push_back(std::move(rec));
  }
  std::error_code ec;
  fs::create_directories(rep.directory, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create " + rep.directory + ": " + ec.message());
  const fs::path root(rep.directory);
  write_file(root / "config.json", dump_json(cfg.to_json()) + "\n");
  for (const auto& [name, text] : files) write_file(root / name, text);
  write_file(root / "records.jsonl", lines);
  return rep;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

struct LoadedRun {
  std::string name;
  std::vector<json> records;
};

std::optional<LoadedRun> load_run(const fs::path& dir, const std::string& name) {
  const fs::path file = dir / "records.jsonl";
  if (!fs::is_regular_file(file)) return std::nullopt;
  std::ifstream in(file);
  if (!in) fail(ErrorCode::kIo, "cannot read " + file.string());
  LoadedRun run{name, {}};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      run.records.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      fail(ErrorCode::kIo, file.string() + ": bad record: " + e.what());
    }
  }
  return run;
}

std::string metric_of(const json& rec) {
  const json& r = rec.at("result");
  if (!r.is_object()) return "";
  if (r.contains("error")) return r.at("error").value("message", "");
  for (const char* key : {"fitted_C", "exponent", "margin", "violations", "rel_error", "size", "value", "new_alpha"}) {
    if (r.contains(key) && r.at(key).is_number()) return std::string(key) + "=" + fmt17(r.at(key).get<double>());
  }
  if (r.contains("stop_reason")) return "stop: " + r.at("stop_reason").get<std::string>();
  return "";
}

}  // namespace

std::string emit_report(const std::string& dir) {
  const fs::path root(dir);
  if (!fs::is_directory(root)) fail(ErrorCode::kIo, "no such directory " + dir);
  std::vector<LoadedRun> runs;
  if (auto r = load_run(root, ".")) runs.push_back(std::move(*r));
  std::vector<fs::path> subdirs;
  for (const auto& e : fs::directory_iterator(root)) {
    if (e.is_directory()) subdirs.push_back(e.path());
  }
  std::sort(subdirs.begin(), subdirs.end());
  for (const auto& s : subdirs) {
    if (auto r = load_run(s, s.filename().string())) runs.push_back(std::move(*r));
  }
  if (runs.empty()) fail(ErrorCode::kIo, "emit_report: no runs under " + dir);

  std::ostringstream md;
  std::ostringstream dmax, greedy, gauss, weight, trace;
  dmax << "run,task,X,D\n";
  greedy << "run,task,X,size,X_pow\n";
  gauss << "run,task,q,a,magnitude,sqrt_q\n";
  weight << "run,task,t,magnitude,envelope\n";
  trace << "run,task,m,X_m,alpha_m\n";
  bool any_dmax = false, any_greedy = false, any_gauss = false, any_weight = false, any_trace = false;

  md << "# Run summary\n\n";
  for (const auto& run : runs) {
    md << "## " << run.name << "\n\n";
    std::ostringstream table;
    int audits = 0, passed = 0;
    for (const auto& rec : run.records) {
      const json& r = rec.at("result");
      const std::string task = rec.value("task", "");
      const std::string rn = csv_escape(run.name), tn = csv_escape(task);
      if (r.is_object() && (r.contains("pass") || r.contains("error"))) {
        ++audits;
        const bool ok = r.contains("pass") && r.at("pass") == true;
        passed += ok ? 1 : 0;
        table << "| " << task << " | " << rec.value("op", "") << " | " << (ok ? "pass" : "FAIL") << " | "
              << metric_of(rec) << " |\n";
      }
      const std::string op = rec.value("op", "");
      if (op == "dmax" && r.contains("table")) {
        const auto& t = r.at("table");
        for (std::size_t m = 1; m < t.size(); ++m) dmax << rn << ',' << tn << ',' << m << ',' << t[m].dump() << '\n';
        any_dmax = true;
      } else if (op == "greedy" && r.contains("rows")) {
        for (const auto& row : r.at("rows")) {
          greedy << rn << ',' << tn << ',' << row.at("X").dump() << ',' << row.at("size").dump() << ','
                 << fmt17(row.at("X_pow").get<double>()) << '\n';
        }
        any_greedy = true;
      } else if (op == "gauss" && r.contains("rows")) {
        for (const auto& row : r.at("rows")) {
          gauss << rn << ',' << tn << ',' << row.at("q").dump() << ',' << row.at("a").dump() << ','
                << fmt17(row.at("magnitude").get<double>()) << ',' << fmt17(row.at("sqrt_q").get<double>()) << '\n';
        }
        any_gauss = true;
      } else if (op == "weight_audit" && r.contains("t") && r.contains("magnitude")) {
        const auto& ts = r.at("t");
        const auto& ms = r.at("magnitude");
        const double C = r.at("fitted_C").get<double>();
        for (std::size_t i = 0; i < ts.size() && i < ms.size(); ++i) {
          const double t = ts[i].get<double>();
          weight << rn << ',' << tn << ',' << fmt17(t) << ',' << fmt17(ms[i].get<double>()) << ','
                 << fmt17(C * std::exp(-std::sqrt(t / 2))) << '\n';
        }
        any_weight = true;
      } else if (op == "iterate" && r.contains("rows")) {
        for (const auto& row : r.at("rows")) {
          trace << rn << ',' << tn << ',' << row.at("m").dump() << ',' << row.at("X_m").dump() << ','
                << fmt17(row.at("alpha_m").get<double>()) << '\n';
        }
        any_trace = true;
      }
    }
    md << "Tasks: " << run.records.size() << "\n\n";
    if (audits == 0) {
      md << "no audits\n\n";
    } else {
      md << "Audits: " << passed << "/" << audits << " passed\n\n";
      md << "| task | op | status | metric |\n|---|---|---|---|\n" << table.str() << "\n";
    }
  }
  const std::string summary = md.str();
  write_file(root / "summary.md", summary);
  if (any_dmax) write_file(root / "plot_dmax.csv", dmax.str());
  if (any_greedy) write_file(root / "plot_greedy.csv", greedy.str());
  if (any_gauss) write_file(root / "plot_gauss.csv", gauss.str());
  if (any_weight) write_file(root / "plot_weight.csv", weight.str());
  if (any_trace) write_file(root / "plot_trace.csv", trace.str());
  return summary;
}

}  // namespace iwb
