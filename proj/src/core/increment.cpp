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

#include "iwb/increment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "iwb/errors.hpp"
#include "iwb/format.hpp"
#include "iwb/harmonic.hpp"
#include "iwb/numtheory.hpp"

namespace iwb {

nlohmann::json Progression::to_json() const {
  return {{"start", start}, {"step", step}, {"length", length}, {"q", q}};
}

nlohmann::json Extraction::to_json() const {
  return {{"progression", progression.to_json()},
          {"hits", hits},
          {"density", density},
          {"threshold", threshold},
          {"found", found}};
}

Extraction extract_increment(const AvoidingSet& A, std::uint64_t q, double xi, double eta, std::uint64_t lambda_q,
                             double c) {
  const std::uint64_t X = A.X();
  if (X == 0 || lambda_q == 0) fail(ErrorCode::kInvalidArgument, "extract_increment: X and lambda(q) must be positive");
  if (!(eta > 0 && eta <= 1)) fail(ErrorCode::kInvalidArgument, "extract_increment: eta must lie in (0, 1]");
  const double Xd = static_cast<double>(X);
  const double T = std::max(1.0, std::fabs(xi) * Xd);
  const double raw = c * eta * Xd / (static_cast<double>(lambda_q) * T);
  if (raw < 1) fail(ErrorCode::kInfeasible, "extract_increment: target length " + fmt17(raw) + " below 1");
  const auto len = static_cast<std::uint64_t>(std::ceil(raw));
  if (lambda_q > X || (len - 1) > (X - 1) / lambda_q) {
    fail(ErrorCode::kInfeasible, "extract_increment: no progression of length " + std::to_string(len) + " fits");
  }
  Extraction out;
  out.threshold = (1 + eta / 20) * A.alpha();
  bool have_best = false;
  for (std::uint64_t r = 1; r <= lambda_q && r <= X; ++r) {
    for (std::uint64_t start = r; start + (len - 1) * lambda_q <= X; start += len * lambda_q) {
      std::uint64_t hits = 0;
      for (std::uint64_t i = 0; i < len; ++i) hits += A.contains(start + i * lambda_q) ? 1 : 0;
      const double dens = static_cast<double>(hits) / static_cast<double>(len);
      if (!have_best || hits > out.hits) {
        have_best = true;
        out.progression = {start, lambda_q, len, q};
        out.hits = hits;
        out.density = dens;
      }
      if (dens >= out.threshold) {
        out.progression = {start, lambda_q, len, q};
        out.hits = hits;
        out.density = dens;
        out.found = true;
        return out;
      }
    }
  }
  return out;
}

double F_eval(double X, double epsilon) {
  if (!(X > 1)) fail(ErrorCode::kDomain, "F_eval: X must exceed 1");
  if (!(epsilon > 0)) fail(ErrorCode::kDomain, "F_eval: epsilon must be positive");
  const double d = 1 / ((2 + epsilon) * (1 + epsilon) + 2);
  const double lx = std::log(X);
  return std::pow(lx, d) / std::sqrt(std::log(3 + lx));
}

IncrementConfig IncrementConfig::desk() { return {}; }

IncrementConfig IncrementConfig::paper(int degree) {
  IncrementConfig c;
  c.rho = std::ldexp(1.0, -10 * degree);
  c.option1_short_circuit = true;
  return c;
}

nlohmann::json IncrementConfig::to_json() const {
  return {{"c_h", c_h},
          {"C_h", C_h},
          {"C1", C1},
          {"C2", C2},
          {"C3", C3},
          {"C4", C4},
          {"epsilon", epsilon},
          {"rho", rho},
          {"X_min", X_min},
          {"xi_points", xi_points},
          {"extract_c", extract_c},
          {"max_candidates", max_candidates},
          {"max_steps", max_steps},
          {"option1_short_circuit", option1_short_circuit}};
}

IncrementConfig IncrementConfig::from_json(const nlohmann::json& j, IncrementConfig c) {
  if (!j.is_object()) fail(ErrorCode::kConfig, "constants must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    auto num = [&]() {
      if (!v.is_number()) fail(ErrorCode::kConfig, "constant '" + key + "' must be a number");
      return v.get<double>();
    };
    auto integer = [&]() {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
        fail(ErrorCode::kConfig, "constant '" + key + "' must be a positive integer");
      }
      return v.get<std::int64_t>();
    };
    if (key == "c_h") c.c_h = num();
    else if (key == "C_h") c.C_h = num();
    else if (key == "C1") c.C1 = num();
    else if (key == "C2") c.C2 = num();
    else if (key == "C3") c.C3 = num();
    else if (key == "C4") c.C4 = num();
    else if (key == "epsilon") c.epsilon = num();
    else if (key == "rho") c.rho = num();
    else if (key == "X_min") c.X_min = static_cast<std::uint64_t>(integer());
    else if (key == "xi_points") c.xi_points = static_cast<int>(integer());
    else if (key == "extract_c") c.extract_c = num();
    else if (key == "max_candidates") c.max_candidates = static_cast<int>(integer());
    else if (key == "max_steps") c.max_steps = static_cast<int>(integer());
    else if (key == "option1_short_circuit") {
      if (!v.is_boolean()) fail(ErrorCode::kConfig, "option1_short_circuit must be a boolean");
      c.option1_short_circuit = v.get<bool>();
    } else {
      fail(ErrorCode::kConfig, "unknown constant '" + key + "'");
    }
  }
  if (!(c.epsilon > 0) || !(c.C1 > 0) || !(c.rho > 0) || !(c.c_h > 0) || !(c.C_h > 0) || !(c.extract_c > 0)) {
    fail(ErrorCode::kConfig, "constants must be positive");
  }
  return c;
}

const char* step_option_name(StepOption o) {
  switch (o) {
    case StepOption::kStar: return "star";
    case StepOption::kOpt1: return "opt1";
    case StepOption::kOpt2: return "opt2";
    case StepOption::kOpt3: return "opt3";
    case StepOption::kNone: return "none";
  }
  return "none";
}

nlohmann::json StepOutcome::to_json() const {
  nlohmann::json j = {{"option", step_option_name(option)},
                      {"old_alpha", old_alpha},
                      {"new_alpha", new_alpha},
                      {"option1_holds", option1_holds},
                      {"envelopes", {{"star", envelopes.star}, {"opt2", envelopes.opt2}, {"opt3", envelopes.opt3}}},
                      {"eta", eta},
                      {"xi", xi},
                      {"q", q},
                      {"candidates_tried", candidates_tried},
                      {"diagnostic", diagnostic}};
  j["progression"] = progression ? progression->to_json() : nlohmann::json(nullptr);
  j["j"] = this->j ? nlohmann::json(*this->j) : nlohmann::json(nullptr);
  j["new_ell"] = new_context ? int_to_json(new_context->ell) : nlohmann::json(nullptr);
  j["rescaled_size"] = rescaled ? nlohmann::json(rescaled->size()) : nlohmann::json(nullptr);
  return j;
}

AvoidingSet rescale(const AvoidingSet& A, const Progression& P) {
  AvoidingSet out(P.length);
  for (std::uint64_t j = 0; j < P.length; ++j) {
    if (A.contains(P.start + j * P.step)) out.insert(j + 1);
  }
  return out;
}

Envelopes classify_envelopes(double old_alpha, double new_alpha, std::uint64_t length, std::uint64_t X,
                             const IncrementConfig& cfg) {
  Envelopes e;
  if (!(old_alpha > 0)) return e;
  const double a = old_alpha;
  const double len = static_cast<double>(length);
  const double Xd = static_cast<double>(X);
  const double L = std::log(1 / a);
  const double boost = std::pow(a, cfg.C_h);
  e.star = len >= boost * Xd && new_alpha >= a + boost;
  const double ratio = new_alpha / a;
  if (ratio >= 2) {
    const int j = static_cast<int>(std::floor(std::log2(ratio)));
    const double logL = std::log(L);
    const double need = Xd * std::exp(-cfg.C_h * j * std::pow(L, 3 + cfg.epsilon) * logL * logL);
    if (j >= 1 && len >= need) {
      e.opt2 = true;
      e.j = j;
    }
  }
  e.opt3 = L > 0 && len >= Xd * std::pow(L, -cfg.C_h) &&
           new_alpha >= a * (1 + cfg.c_h * std::pow(L, -(2 + cfg.epsilon) * (1 + cfg.epsilon)));
  return e;
}

namespace {

struct Candidate {
  double score;
  std::uint64_t q;
  int xi_index;
};

}  // namespace

StepOutcome increment_step(const AvoidingSet& A, const AuxiliaryContext& ctx, const IncrementConfig& cfg) {
  if (A.size() == 0) fail(ErrorCode::kInvalidArgument, "increment_step: A must be nonempty");
  const std::uint64_t X = A.X();
  if (X < cfg.X_min || X < 16) {
    fail(ErrorCode::kInvalidArgument, "increment_step: X=" + std::to_string(X) + " below X_min");
  }
  if (!ctx.choices) fail(ErrorCode::kInvalidArgument, "increment_step: context carries no root choices");
  StepOutcome out;
  const double alpha = A.alpha();
  const double Xd = static_cast<double>(X);
  out.old_alpha = alpha;
  out.new_alpha = alpha;
  out.option1_holds = alpha <= std::exp(-cfg.c_h * F_eval(Xd, cfg.epsilon));
  if (cfg.option1_short_circuit && out.option1_holds) {
    out.option = StepOption::kOpt1;
    out.diagnostic = "alpha <= exp(-c_h F(X))";
    return out;
  }
  if (alpha >= 1) {
    out.diagnostic = "A = [X]; no density can exceed 1";
    return out;
  }

  ArcParams arcs = ArcParams::make(alpha, cfg.epsilon, cfg.C1, Xd);
  arcs.Qmax = std::min<std::uint64_t>(arcs.Qmax, X / 3);
  if (arcs.Qmax < 2) {
    out.diagnostic = "no admissible denominators";
    return out;
  }
  const int npts = std::max(1, cfg.xi_points);
  std::vector<double> xis(static_cast<std::size_t>(npts));
  for (int i = 0; i < npts; ++i) {
    xis[static_cast<std::size_t>(i)] = npts == 1 ? 0.0 : -arcs.tau + 2 * arcs.tau * i / (npts - 1);
  }

  // lambda(q) <= X/2 filter, cached.
  const mpz_class half = to_mpz(X / 2);
  std::map<std::uint64_t, std::uint64_t> lam;
  for (std::uint64_t q = 2; q <= arcs.Qmax; ++q) {
    const mpz_class l = ctx.choices->lambda_of(to_mpz(q));
    if (l <= half) lam[q] = to_u64(l);
  }
  if (lam.empty()) {
    out.diagnostic = "every lambda(q) exceeds X/2";
    return out;
  }

  const double expo = -1.0 / (2 + cfg.epsilon);
  std::vector<Candidate> cands;
  std::vector<MassProfile> profiles;
  for (int i = 0; i < npts; ++i) {
    profiles.push_back(initial_mass_profile(A, xis[static_cast<std::size_t>(i)], arcs));
    for (const auto& [q, l] : lam) {
      const double s = std::pow(static_cast<double>(q), expo) * profiles.back().R[q];
      if (s > 0) cands.push_back({s, q, i});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.q != b.q) return a.q < b.q;
    return a.xi_index < b.xi_index;
  });

  const double energy = alpha * alpha * Xd * Xd;
  std::optional<Extraction> best;
  for (const Candidate& c : cands) {
    if (out.candidates_tried >= cfg.max_candidates) break;
    ++out.candidates_tried;
    const double mass = profiles[static_cast<std::size_t>(c.xi_index)].R[c.q];
    const double eta = std::min(0.99, mass / energy);
    if (!(eta > 0)) continue;
    Extraction ex;
    try {
      ex = extract_increment(A, c.q, xis[static_cast<std::size_t>(c.xi_index)], eta, lam.at(c.q), cfg.extract_c);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kInfeasible) continue;
      throw;
    }
    if (ex.found) {
      best = ex;
      out.eta = eta;
      out.xi = xis[static_cast<std::size_t>(c.xi_index)];
      out.q = c.q;
      break;
    }
  }
  if (!best) {
    out.diagnostic = "no candidate progression met the (1 + eta/20) alpha threshold";
    return out;
  }

  const Progression& P = best->progression;
  out.progression = P;
  out.new_alpha = best->density;
  out.envelopes = classify_envelopes(alpha, out.new_alpha, P.length, X, cfg);
  // (*) wins whenever it holds; otherwise the larger guaranteed gain.
  double gain = -1;
  if (out.envelopes.opt3) {
    gain = alpha * cfg.c_h * std::pow(std::log(1 / alpha), -(2 + cfg.epsilon) * (1 + cfg.epsilon));
    out.option = StepOption::kOpt3;
  }
  if (out.envelopes.opt2) {
    const double g = (std::ldexp(1.0, out.envelopes.j) - 1) * alpha;
    if (g > gain) {
      gain = g;
      out.option = StepOption::kOpt2;
    }
    out.j = out.envelopes.j;
  }
  if (out.envelopes.star) {
    gain = std::pow(alpha, cfg.C_h);
    out.option = StepOption::kStar;
  }
  if (out.option != StepOption::kOpt2) out.j.reset();
  if (gain < 0) {
    out.option = StepOption::kNone;
    out.diagnostic = "increment found but no envelope is satisfied";
  }
  out.new_context = auxiliary_poly(ctx.choices, ctx.ell * static_cast<unsigned long>(out.q));
  out.rescaled = rescale(A, P);
  return out;
}

bool IterationTrace::invariants_ok() const {
  mpz_class prod = 1;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const TraceRow& r = rows[i];
    if (!r.ell_bound_ok) return false;
    if (i > 0) {
      prod *= static_cast<unsigned long>(r.q);
      if (prod != r.ell) return false;
      if (r.X >= rows[i - 1].X || r.alpha <= rows[i - 1].alpha) return false;
    }
  }
  return true;
}

nlohmann::json IterationTrace::to_json() const {
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : rows) {
    rs.push_back({{"m", r.m},
                  {"X_m", r.X},
                  {"alpha_m", r.alpha},
                  {"q_m", r.q},
                  {"ell_m", int_to_json(r.ell)},
                  {"option", r.option},
                  {"ell_bound_ok", r.ell_bound_ok}});
  }
  return {{"config", config}, {"rows", rs}, {"stop_reason", stop_reason}, {"invariants_ok", invariants_ok()}};
}

std::string IterationTrace::to_csv() const {
  std::ostringstream os;
  os << "# config " << config.dump() << '\n';
  os << "m,X_m,alpha_m,q_m,ell_m,option\n";
  for (const auto& r : rows) {
    os << r.m << ',' << r.X << ',' << fmt17(r.alpha) << ',' << r.q << ',' << r.ell.get_str() << ',' << r.option
       << '\n';
  }
  return os.str();
}

IterationTrace iterate(const AvoidingSet& A0, std::shared_ptr<const RootChoices> choices, const IncrementConfig& cfg) {
  IterationTrace trace;
  trace.config = cfg.to_json();
  if (A0.size() == 0) {
    trace.stop_reason = "empty set";
    return trace;
  }
  AuxiliaryContext ctx = auxiliary_poly(choices, 1);
  AvoidingSet A = A0;
  const std::uint64_t X0 = A0.X();
  trace.rows.push_back({0, X0, A.alpha(), 1, 1, "initial", true});
  for (int m = 1;; ++m) {
    const double alpha = A.alpha();
    const double Xd = static_cast<double>(A.X());
    if (alpha > 2.0 / 3.0) {
      trace.stop_reason = "alpha > 2/3";
      break;
    }
    if (A.X() < cfg.X_min || A.X() < 16) {
      trace.stop_reason = "X below X_min";
      break;
    }
    if (ctx.ell.get_d() >= std::pow(Xd, cfg.rho)) {
      trace.stop_reason = "ell >= X^rho";
      break;
    }
    if (m > cfg.max_steps) {
      trace.stop_reason = "step limit";
      break;
    }
    StepOutcome s = increment_step(A, ctx, cfg);
    if (s.option == StepOption::kOpt1) {
      trace.stop_reason = "option 1";
      break;
    }
    if (s.option == StepOption::kNone || !s.rescaled || !s.new_context) {
      trace.stop_reason = "no increment: " + s.diagnostic;
      break;
    }
    A = std::move(*s.rescaled);
    ctx = std::move(*s.new_context);
    TraceRow row{m, A.X(), A.alpha(), s.q, ctx.ell, step_option_name(s.option), true};
    // ell_m <= 2^m X_0 / X_m  <=>  ell_m X_m <= 2^m X_0.
    row.ell_bound_ok = ctx.ell * static_cast<unsigned long>(A.X()) <= (mpz_class(1) << m) * to_mpz(X0);
    trace.rows.push_back(std::move(row));
  }
  return trace;
}

}  // namespace iwb
