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

#include "iwb/iwb.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "iwb/avoiding_set.hpp"
#include "iwb/errors.hpp"
#include "iwb/experiment.hpp"
#include "iwb/intersective.hpp"
#include "iwb/polycore.hpp"
#include "iwb/search.hpp"
#include "iwb/sieve.hpp"

struct iwb_poly {
  iwb::IntPoly p;
};
struct iwb_context {
  iwb::AuxiliaryContext ctx;
};
struct iwb_sieve {
  iwb::SieveTable table;
};
struct iwb_set {
  iwb::AvoidingSet set;
};

namespace {

thread_local std::string g_last_error;

iwb_status set_error(iwb_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Runs f, mapping exceptions to status codes.
template <class F>
iwb_status guard(F&& f) {
  try {
    g_last_error.clear();
    f();
    return IWB_OK;
  } catch (const iwb::Error& e) {
    return set_error(static_cast<iwb_status>(static_cast<int>(e.code())), e.what());
  } catch (const nlohmann::json::exception& e) {
    return set_error(IWB_E_INVALID_ARGUMENT, std::string("json: ") + e.what());
  } catch (const std::bad_alloc&) {
    return set_error(IWB_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(IWB_E_INTERNAL, e.what());
  } catch (...) {
    return set_error(IWB_E_INTERNAL, "unknown exception");
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) iwb::fail(iwb::ErrorCode::kInvalidArgument, std::string(what) + " is NULL");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

mpz_class parse_int(const char* s, const char* what) {
  need(s, what);
  mpz_class v;
  if (v.set_str(s, 10) != 0) iwb::fail(iwb::ErrorCode::kInvalidArgument, std::string(what) + ": not an integer");
  return v;
}

nlohmann::json parse_json(const char* s, const char* what) {
  need(s, what);
  try {
    return nlohmann::json::parse(s);
  } catch (const nlohmann::json::parse_error& e) {
    iwb::fail(iwb::ErrorCode::kInvalidArgument, std::string(what) + ": " + e.what());
  }
}

std::vector<std::uint64_t> sorted_values(const uint64_t* F, size_t n) {
  if (n > 0) need(F, "F");
  std::vector<std::uint64_t> v(F, F + n);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

extern "C" {

const char* iwb_version(void) { return "1.0.0"; }

const char* iwb_status_name(iwb_status status) {
  if (status == IWB_OK) return "ok";
  const int c = static_cast<int>(status);
  if (c < 1 || c > 13) return "unknown";
  return iwb::error_code_name(static_cast<iwb::ErrorCode>(c));
}

const char* iwb_last_error(void) { return g_last_error.c_str(); }

void iwb_string_free(char* s) { std::free(s); }

void iwb_u64_free(uint64_t* values) { std::free(values); }

iwb_status iwb_poly_from_coeffs(const int64_t* coeffs, size_t count, iwb_poly** out) {
  return guard([&] {
    need(out, "out");
    if (count > 0) need(coeffs, "coeffs");
    std::vector<mpz_class> v;
    for (size_t i = 0; i < count; ++i) v.emplace_back(static_cast<long>(coeffs[i]));
    *out = new iwb_poly{iwb::IntPoly(std::move(v))};
  });
}

iwb_status iwb_poly_from_json(const char* json, iwb_poly** out) {
  return guard([&] {
    need(out, "out");
    *out = new iwb_poly{iwb::poly_from_json(parse_json(json, "json"))};
  });
}

void iwb_poly_free(iwb_poly* p) { delete p; }

int iwb_poly_degree(const iwb_poly* p) { return p == nullptr ? -1 : p->p.degree(); }

iwb_status iwb_poly_eval(const iwb_poly* p, const char* n, char** out) {
  return guard([&] {
    need(p, "poly");
    need(out, "out");
    *out = dup(p->p(parse_int(n, "n")).get_str());
  });
}

iwb_status iwb_poly_to_string(const iwb_poly* p, char** out) {
  return guard([&] {
    need(p, "poly");
    need(out, "out");
    *out = dup(p->p.to_string());
  });
}

iwb_status iwb_poly_to_json(const iwb_poly* p, char** out) {
  return guard([&] {
    need(p, "poly");
    need(out, "out");
    *out = dup(iwb::dump_json(iwb::poly_to_json(p->p)));
  });
}

iwb_status iwb_poly_verdict(const iwb_poly* p, uint64_t prime_bound, int depth_bound, char** out_json) {
  return guard([&] {
    need(p, "poly");
    need(out_json, "out_json");
    *out_json = dup(iwb::dump_json(iwb::intersectivity_verdict(p->p, prime_bound, depth_bound).to_json()));
  });
}

iwb_status iwb_context_new(const iwb_poly* h, const char* ell, iwb_context** out) {
  return guard([&] {
    need(h, "h");
    need(out, "out");
    const mpz_class l = parse_int(ell, "ell");
    auto choices = std::make_shared<const iwb::RootChoices>(h->p);
    *out = new iwb_context{iwb::auxiliary_poly(choices, l)};
  });
}

void iwb_context_free(iwb_context* c) { delete c; }

iwb_status iwb_context_aux(const iwb_context* c, iwb_poly** out) {
  return guard([&] {
    need(c, "context");
    need(out, "out");
    *out = new iwb_poly{c->ctx.aux};
  });
}

iwb_status iwb_context_to_json(const iwb_context* c, char** out_json) {
  return guard([&] {
    need(c, "context");
    need(out_json, "out_json");
    *out_json = dup(iwb::dump_json(c->ctx.to_json()));
  });
}

iwb_status iwb_sieve_new(const iwb_poly* aux, double U, iwb_sieve** out) {
  return guard([&] {
    need(aux, "aux");
    need(out, "out");
    *out = new iwb_sieve{iwb::SieveTable(aux->p, U)};
  });
}

void iwb_sieve_free(iwb_sieve* s) { delete s; }

iwb_status iwb_sieve_in_W(const iwb_sieve* s, uint64_t n, int* out) {
  return guard([&] {
    need(s, "sieve");
    need(out, "out");
    *out = s->table.in_W(static_cast<std::uint64_t>(n)) ? 1 : 0;
  });
}

iwb_status iwb_sieve_J(const iwb_sieve* s, char** out) {
  return guard([&] {
    need(s, "sieve");
    need(out, "out");
    *out = dup(s->table.J_factor().get_str());
  });
}

iwb_status iwb_sieve_period(const iwb_sieve* s, char** out) {
  return guard([&] {
    need(s, "sieve");
    need(out, "out");
    *out = dup(s->table.period().get_str());
  });
}

iwb_status iwb_set_new(uint64_t X, iwb_set** out) {
  return guard([&] {
    need(out, "out");
    *out = new iwb_set{iwb::AvoidingSet(X)};
  });
}

void iwb_set_free(iwb_set* s) { delete s; }

iwb_status iwb_set_insert(iwb_set* s, uint64_t n) {
  return guard([&] {
    need(s, "set");
    s->set.insert(n);
  });
}

uint64_t iwb_set_X(const iwb_set* s) { return s == nullptr ? 0 : s->set.X(); }

uint64_t iwb_set_size(const iwb_set* s) { return s == nullptr ? 0 : s->set.size(); }

iwb_status iwb_set_members(const iwb_set* s, uint64_t* buf, size_t cap, size_t* count) {
  return guard([&] {
    need(s, "set");
    need(count, "count");
    if (cap > 0) need(buf, "buf");
    const auto ms = s->set.members();
    for (size_t i = 0; i < ms.size() && i < cap; ++i) buf[i] = ms[i];
    *count = ms.size();
  });
}

iwb_status iwb_forbidden_values(const iwb_poly* aux, uint64_t X, uint64_t** out, size_t* count) {
  return guard([&] {
    need(aux, "aux");
    need(out, "out");
    need(count, "count");
    const auto v = iwb::forbidden_values(aux->p, X);
    auto* buf = static_cast<uint64_t*>(std::malloc(std::max<size_t>(v.size(), 1) * sizeof(uint64_t)));
    if (buf == nullptr) throw std::bad_alloc();
    std::copy(v.begin(), v.end(), buf);
    *out = buf;
    *count = v.size();
  });
}

iwb_status iwb_set_verify(const iwb_set* s, const uint64_t* F, size_t nF, int* avoiding) {
  return guard([&] {
    need(s, "set");
    need(avoiding, "avoiding");
    *avoiding = iwb::verify_avoiding(s->set, sorted_values(F, nF)).has_value() ? 0 : 1;
  });
}

iwb_status iwb_greedy_avoiding(const uint64_t* F, size_t nF, uint64_t X, iwb_set** out) {
  return guard([&] {
    need(out, "out");
    *out = new iwb_set{iwb::greedy_avoiding(sorted_values(F, nF), X)};
  });
}

iwb_status iwb_exact_max_avoiding(const uint64_t* F, size_t nF, uint64_t X, double time_budget_s, uint64_t* size,
                                  iwb_set** witness) {
  return guard([&] {
    need(size, "size");
    auto r = iwb::exact_max_avoiding(sorted_values(F, nF), X, iwb::kExactSearchCap,
                                     time_budget_s > 0 ? time_budget_s : 0);
    *size = r.size;
    if (witness != nullptr) *witness = new iwb_set{std::move(r.witness)};
  });
}

iwb_status iwb_task_ops(char** out_json) {
  return guard([&] {
    need(out_json, "out_json");
    *out_json = dup(iwb::dump_json(iwb::task_ops()));
  });
}

iwb_status iwb_task_run(const char* poly_json, uint64_t seed, const char* preset, const char* constants_json,
                        const char* op, const char* params_json, char** out_json) {
  return guard([&] {
    need(op, "op");
    need(out_json, "out_json");
    // Reuse the config parser so presets and constants resolve identically.
    nlohmann::json cfg = {{"polynomial", parse_json(poly_json, "poly_json")}, {"seed", seed}};
    if (preset != nullptr) cfg["preset"] = preset;
    if (constants_json != nullptr) cfg["constants"] = parse_json(constants_json, "constants_json");
    const iwb::ExperimentConfig c = iwb::ExperimentConfig::parse(cfg);
    const nlohmann::json params = params_json == nullptr ? nlohmann::json::object() : parse_json(params_json, "params");
    iwb::TaskEnv env{c.polynomial, c.seed, c.constants};
    const iwb::TaskResult r = iwb::run_task(op, params, env);
    *out_json = dup(iwb::dump_json({{"params", r.params}, {"result", r.result}, {"side_files", r.side_files}}));
  });
}

iwb_status iwb_experiment_run(const char* config_json, const char* out_dir, const uint64_t* seed, const char* preset,
                              int* ok, char** out_report) {
  return guard([&] {
    nlohmann::json j = parse_json(config_json, "config_json");
    if (!j.is_object()) iwb::fail(iwb::ErrorCode::kConfig, "config must be a JSON object");
    if (seed != nullptr) j["seed"] = *seed;
    if (preset != nullptr) j["preset"] = preset;
    const iwb::ExperimentConfig cfg = iwb::ExperimentConfig::parse(j);
    const auto dir = out_dir == nullptr ? std::nullopt : std::optional<std::string>(out_dir);
    const iwb::RunReport rep = iwb::run_experiment(cfg, dir);
    if (ok != nullptr) *ok = rep.ok() ? 1 : 0;
    if (out_report != nullptr) {
      nlohmann::json tasks = nlohmann::json::array();
      for (const auto& r : rep.records) {
        tasks.push_back({{"task", r.task}, {"op", r.op}, {"required", r.required}, {"passed", r.passed},
                         {"duration_ms", r.duration_ms}});
      }
      *out_report = dup(iwb::dump_json({{"directory", rep.directory},
                                        {"tasks", tasks},
                                        {"failed_required", rep.failed_required},
                                        {"ok", rep.ok()}}));
    }
  });
}

iwb_status iwb_report_emit(const char* dir, char** out_summary) {
  return guard([&] {
    need(dir, "dir");
    const std::string s = iwb::emit_report(dir);
    if (out_summary != nullptr) *out_summary = dup(s);
  });
}

}  // extern "C"
