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

// iwb: command-line front end over the C API.
//
// Exit status: 0 success, 1 a required audit failed, 2 usage or runtime error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "iwb/iwb.h"
#include "json.hpp"

using nlohmann::json;

namespace {

constexpr int kExitAuditFailed = 1;
constexpr int kExitError = 2;

struct CliError {
  std::string message;
};

std::string take(char* s) {
  std::string out = s == nullptr ? "" : s;
  iwb_string_free(s);
  return out;
}

void check(iwb_status st) {
  if (st != IWB_OK) throw CliError{std::string(iwb_status_name(st)) + ": " + iwb_last_error()};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{"cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_or_string(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return text;
  }
}

struct OpOptions {
  std::string config_path;
  std::string poly;
  std::optional<std::uint64_t> seed;
  std::string preset;
  std::string out;
  std::string params_text;
  std::vector<std::string> param_pairs;
};

void add_common(CLI::App* sub, OpOptions& o) {
  sub->add_option("--config", o.config_path, "Config file supplying polynomial, seed, preset and constants");
  sub->add_option("--poly", o.poly, "Polynomial as a JSON coefficient array, ascending degree");
  sub->add_option("--seed", o.seed, "Seed");
  sub->add_option("--preset", o.preset, "Constant preset")->check(CLI::IsMember({"desk", "paper"}));
  sub->add_option("--out", o.out, "Write a run directory instead of printing");
}

void add_params(CLI::App* sub, OpOptions& o) {
  sub->add_option("--params", o.params_text, "Task parameters as a JSON object");
  sub->add_option("--param", o.param_pairs, "One parameter as key=value (value parsed as JSON when possible)");
}

json build_params(const OpOptions& o) {
  json p = o.params_text.empty() ? json::object() : json::parse(o.params_text);
  if (!p.is_object()) throw CliError{"--params must be a JSON object"};
  for (const auto& kv : o.param_pairs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw CliError{"--param expects key=value, got '" + kv + "'"};
    p[kv.substr(0, eq)] = parse_or_string(kv.substr(eq + 1));
  }
  return p;
}

// Config skeleton from --config and the command-line overrides, without tasks.
json base_config(const OpOptions& o) {
  json cfg = json::object();
  if (!o.config_path.empty()) {
    cfg = json::parse(read_file(o.config_path));
    if (!cfg.is_object()) throw CliError{"config must be a JSON object"};
    cfg.erase("tasks");
    cfg.erase("output_dir");
  }
  if (!o.poly.empty()) cfg["polynomial"] = json::parse(o.poly);
  if (!cfg.contains("polynomial")) cfg["polynomial"] = json::array({0, 0, 1});
  if (o.seed) cfg["seed"] = *o.seed;
  if (!o.preset.empty()) cfg["preset"] = o.preset;
  return cfg;
}

int run_config(const json& cfg, const std::string& out, const std::optional<std::uint64_t>& seed,
               const std::string& preset) {
  int ok = 0;
  char* report = nullptr;
  const std::string text = cfg.dump();
  check(iwb_experiment_run(text.c_str(), out.empty() ? nullptr : out.c_str(), seed ? &*seed : nullptr,
                           preset.empty() ? nullptr : preset.c_str(), &ok, &report));
  std::cout << take(report) << '\n';
  return ok ? 0 : kExitAuditFailed;
}

int run_op(const std::string& op, const OpOptions& o) {
  json cfg = base_config(o);
  const json params = build_params(o);
  if (!o.out.empty()) {
    cfg["tasks"] = json::array({{{"name", op}, {"op", op}, {"params", params}, {"required", true}}});
    return run_config(cfg, o.out, std::nullopt, "");
  }
  const std::string poly = cfg.at("polynomial").dump();
  const std::string params_text = params.dump();
  const std::string constants = cfg.contains("constants") ? cfg.at("constants").dump() : "";
  const std::uint64_t seed = cfg.contains("seed") ? cfg.at("seed").get<std::uint64_t>() : 0;
  const std::string preset = cfg.contains("preset") ? cfg.at("preset").get<std::string>() : "";
  char* out = nullptr;
  check(iwb_task_run(poly.c_str(), seed, preset.empty() ? nullptr : preset.c_str(),
                     constants.empty() ? nullptr : constants.c_str(), op.c_str(), params_text.c_str(), &out));
  const std::string text = take(out);
  const json r = json::parse(text);
  // Side files only go to disk with --out; print the record fields.
  std::cout << json({{"params", r.at("params")}, {"result", r.at("result")}}).dump() << '\n';
  const json& res = r.at("result");
  return res.is_object() && res.contains("pass") && res.at("pass") == false ? kExitAuditFailed : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"iwb: intersective polynomial workbench"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(iwb_version()));

  struct Command {
    const char* name;
    const char* op;
    const char* help;
  };
  const std::vector<Command> commands = {
      {"check", "verdict", "Intersectivity verdict"},
      {"aux", "aux", "Auxiliary polynomial table over an ell range"},
      {"sieve", "sieve", "Sieve local data and J factor"},
      {"gauss", "gauss", "Sieved Gauss sum sweep"},
      {"mass", "mass", "Initial major-arc mass of a set"},
      {"leveld", "leveld", "Level-d audit over a modulus family"},
      {"step", "step", "One density-increment step"},
      {"iterate", "iterate", "Full increment trace"},
      {"dmax", "dmax", "Exact D(F, X) table"},
      {"greedy", "greedy", "Greedy avoiding sets and scaling fit"},
  };

  std::map<std::string, OpOptions> opts;
  std::map<CLI::App*, std::string> op_of;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(sub, opts[c.name]);
    add_params(sub, opts[c.name]);
    op_of[sub] = c.op;
  }

  std::string task_op;
  CLI::App* task = app.add_subcommand("task", "Run any registered operation");
  task->add_option("op", task_op, "Operation name")->required();
  add_common(task, opts["task"]);
  add_params(task, opts["task"]);

  CLI::App* ops = app.add_subcommand("ops", "List registered operations");

  OpOptions run_opts;
  CLI::App* run = app.add_subcommand("run", "Run every task of a config");
  run->add_option("--config", run_opts.config_path, "Config file")->required();
  run->add_option("--out", run_opts.out, "Run directory (default: the config's output_dir)");
  run->add_option("--seed", run_opts.seed, "Seed override");
  run->add_option("--preset", run_opts.preset, "Preset override")->check(CLI::IsMember({"desk", "paper"}));

  std::string report_dir;
  CLI::App* report = app.add_subcommand("report", "Summarize run directories");
  report->add_option("dir", report_dir, "Directory holding one or more runs")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    for (auto* sub : app.get_subcommands()) {
      if (auto it = op_of.find(sub); it != op_of.end()) return run_op(it->second, opts[sub->get_name()]);
      if (sub == task) return run_op(task_op, opts["task"]);
      if (sub == ops) {
        char* out = nullptr;
        check(iwb_task_ops(&out));
        for (const auto& name : json::parse(take(out))) std::cout << name.get<std::string>() << '\n';
        return 0;
      }
      if (sub == run) {
        const json cfg = json::parse(read_file(run_opts.config_path));
        return run_config(cfg, run_opts.out, run_opts.seed, run_opts.preset);
      }
      if (sub == report) {
        char* out = nullptr;
        check(iwb_report_emit(report_dir.c_str(), &out));
        std::cout << take(out);
        return 0;
      }
    }
  } catch (const CliError& e) {
    std::cerr << "iwb: " << e.message << '\n';
    return kExitError;
  } catch (const json::exception& e) {
    std::cerr << "iwb: bad JSON: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
