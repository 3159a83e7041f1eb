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

// Experiment harness: strict JSON configs, a registry of named operations,
// JSON-lines run records and report emission.

#ifndef IWB_EXPERIMENT_HPP
#define IWB_EXPERIMENT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iwb/increment.hpp"
#include "iwb/polycore.hpp"
#include "json.hpp"

namespace iwb {

/// Compact JSON with doubles at 17 significant digits, non-finite doubles
/// as the strings "nan", "inf", "-inf", and integers beyond 2^53 as
/// decimal strings.
std::string dump_json(const nlohmann::json& j);

struct Tolerances {
  double gauss_C_max = 10;      // |G(a, q)| <= C q^gauss_exponent
  double gauss_exponent = 0.6;
  double gauss_abs = 1e-9;
  double brun_rel = 0.05;
  double spectrum_rel = 1e-9;
  nlohmann::json to_json() const;
};

struct Constants {
  IncrementConfig increment;
  std::optional<double> U;  // sieve level override
  std::optional<double> Z;  // Weyl level override
  int K = 24;               // smooth weight depth
  int resolution = 1 << 16;
  std::uint64_t prime_bound = 100;  // for the intersectivity verdict
  int depth_bound = 12;
  Tolerances tol;
  nlohmann::json to_json() const;
};

enum class Preset { kDesk, kPaper };
Preset preset_from_string(const std::string& s);
const char* preset_name(Preset p);
Constants preset_constants(Preset p, int degree);

struct TaskSpec {
  std::string name;
  std::string op;
  nlohmann::json params = nlohmann::json::object();
  bool required = false;
};

struct ExperimentConfig {
  IntPoly polynomial;
  std::uint64_t seed = 0;
  Preset preset = Preset::kDesk;
  Constants constants;
  std::vector<TaskSpec> tasks;
  std::string output_dir = "runs";

  /// Strict: unknown keys, unknown ops and malformed values raise kConfig.
  static ExperimentConfig parse(const nlohmann::json& j);
  static ExperimentConfig load(const std::string& path);
  nlohmann::json to_json() const;
};

/// Names of every registered operation, sorted.
std::vector<std::string> task_ops();

/// Everything one task sees besides its own params.
struct TaskEnv {
  IntPoly polynomial;
  std::uint64_t seed = 0;
  Constants constants;
};

struct TaskResult {
  nlohmann::json params;  // resolved, sufficient to re-run the task alone
  nlohmann::json result;
  std::map<std::string, std::string> side_files;  // suffix -> CSV text
};

/// Runs one operation. Unknown ops and unknown params raise kConfig; the
/// operation's own failures propagate as iwb::Error.
TaskResult run_task(const std::string& op, const nlohmann::json& params, const TaskEnv& env);

struct TaskRecord {
  std::string task;
  std::string op;
  nlohmann::json params;
  nlohmann::json result;
  double duration_ms = 0;
  bool required = false;
  bool passed = true;
  nlohmann::json to_json() const;
};

struct RunReport {
  std::string directory;
  std::vector<TaskRecord> records;
  std::vector<std::string> failed_required;
  bool ok() const { return failed_required.empty(); }
};

/// Executes the tasks in order and writes <dir>/records.jsonl, the config
/// echo and CSV side-files. dir defaults to the config's output_dir.
RunReport run_experiment(const ExperimentConfig& cfg, const std::optional<std::string>& dir = std::nullopt);

/// Aggregates every records.jsonl under dir (itself or one level down)
/// into summary.md and plot-data CSVs; returns the summary text. kIo
/// when no run is found.
std::string emit_report(const std::string& dir);

}  // namespace iwb

#endif  // IWB_EXPERIMENT_HPP
