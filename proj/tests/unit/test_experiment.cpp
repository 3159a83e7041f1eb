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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "iwb/errors.hpp"
#include "iwb/experiment.hpp"

using namespace iwb;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::current_path() / "unit_scratch" / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string strip_durations(const std::string& s) {
  return std::regex_replace(s, std::regex("\"duration_ms\":[^,}]*"), "\"duration_ms\":0");
}

TaskEnv squares_env() { return TaskEnv{IntPoly{0, 0, 1}, 1, preset_constants(Preset::kDesk, 2)}; }

const json kSmallConfig = json::parse(R"({
  "polynomial": [0, 0, 1],
  "seed": 42,
  "tasks": [
    {"name": "F", "op": "F_eval", "params": {"log_X": 256, "epsilon": 1}, "required": true},
    {"name": "gauss", "op": "gauss", "params": {"q_max": 12}, "required": true},
    {"name": "mass", "op": "mass", "params": {"set": {"random": {"X": 300, "alpha": 0.2}}}},
    {"name": "greedy", "op": "greedy", "params": {"X": [1000, 10000]}}
  ]
})");

}  // namespace

TEST_CASE("dump_json formats") {
  CHECK(dump_json(json{{"a", 1}}) == R"({"a":1})");
  CHECK(dump_json(json(0.1)) == "0.10000000000000001");
  CHECK(dump_json(json(std::nan(""))) == "\"nan\"");
  CHECK(dump_json(json(INFINITY)) == "\"inf\"");
  CHECK(dump_json(json(std::uint64_t{1} << 60)) == "\"1152921504606846976\"");
  CHECK(dump_json(json(std::int64_t{1} << 40)) == "1099511627776");
}

TEST_CASE("F_eval task") {
  const TaskResult r = run_task("F_eval", {{"log_X", 256}, {"epsilon", 1}}, squares_env());
  CHECK(r.result.at("value").get<double>() == doctest::Approx(0.8484).epsilon(1e-4));
  CHECK(r.result.at("d_eps") == 0.125);
  CHECK(r.params.at("epsilon") == 1);
}

TEST_CASE("unknown ops and keys are config errors") {
  CHECK_THROWS_WITH_AS(run_task("nope", json::object(), squares_env()), doctest::Contains("nope"), Error);
  try {
    run_task("F_eval", {{"log_X", 4}, {"bogus", 1}}, squares_env());
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConfig);
  }
  json bad = kSmallConfig;
  bad["extra"] = 1;
  CHECK_THROWS_AS(ExperimentConfig::parse(bad), Error);
  bad = kSmallConfig;
  bad["tasks"].push_back(bad["tasks"][0]);
  CHECK_THROWS_AS(ExperimentConfig::parse(bad), Error);
}

TEST_CASE("a config error mid-run writes nothing") {
  json j = kSmallConfig;
  j["tasks"].push_back({{"name", "bad"}, {"op", "F_eval"}, {"params", {{"wrong", 1}}}});
  const ExperimentConfig cfg = ExperimentConfig::parse(j);
  const fs::path dir = scratch("midrun");
  CHECK_THROWS_AS(run_experiment(cfg, dir.string()), Error);
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("empty task list") {
  const ExperimentConfig cfg = ExperimentConfig::parse(json::parse(R"({"polynomial": [0,0,1], "tasks": []})"));
  const fs::path dir = scratch("empty");
  const RunReport r = run_experiment(cfg, dir.string());
  CHECK(r.ok());
  CHECK(r.records.empty());
  CHECK(fs::exists(dir / "config.json"));
  CHECK(slurp(dir / "records.jsonl").empty());
  const std::string md = emit_report(dir.string());
  CHECK(md.find("no audits") != std::string::npos);
}

TEST_CASE("run, side files and report") {
  const ExperimentConfig cfg = ExperimentConfig::parse(kSmallConfig);
  const fs::path dir = scratch("small");
  const RunReport r = run_experiment(cfg, dir.string());
  REQUIRE(r.records.size() == 4);
  CHECK(r.ok());
  CHECK(fs::exists(dir / "gauss.gauss.csv"));
  const std::string csv = slurp(dir / "gauss.gauss.csv");
  CHECK(csv.rfind("q,a,", 0) == 0);

  std::istringstream lines(slurp(dir / "records.jsonl"));
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    const json rec = json::parse(line);
    CHECK(rec.contains("duration_ms"));
    CHECK(rec.contains("params"));
    ++n;
  }
  CHECK(n == 4);

  const std::string md = emit_report(dir.string());
  CHECK(md.find("# Run summary") != std::string::npos);
  CHECK(md.find("Tasks: 4") != std::string::npos);
  CHECK(fs::exists(dir / "summary.md"));
  CHECK(fs::exists(dir / "plot_gauss.csv"));
  CHECK(fs::exists(dir / "plot_greedy.csv"));
  CHECK_THROWS_AS(emit_report((dir / "nothing_here").string()), Error);
}

TEST_CASE("same seed gives identical records") {
  const ExperimentConfig cfg = ExperimentConfig::parse(kSmallConfig);
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  run_experiment(cfg, a.string());
  run_experiment(cfg, b.string());
  CHECK(strip_durations(slurp(a / "records.jsonl")) == strip_durations(slurp(b / "records.jsonl")));
  CHECK(slurp(a / "config.json") == slurp(b / "config.json"));

  json other = kSmallConfig;
  other["seed"] = 43;
  const fs::path c = scratch("det_c");
  run_experiment(ExperimentConfig::parse(other), c.string());
  CHECK(strip_durations(slurp(a / "records.jsonl")) != strip_durations(slurp(c / "records.jsonl")));
}

TEST_CASE("resolved params re-run the task alone") {
  const ExperimentConfig cfg = ExperimentConfig::parse(kSmallConfig);
  const RunReport r = run_experiment(cfg, scratch("rerun").string());
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    const TaskRecord& rec = r.records[i];
    TaskEnv env{cfg.polynomial, 0, cfg.constants};
    const TaskResult again = run_task(rec.op, rec.params, env);
    CHECK(dump_json(again.result) == dump_json(rec.result));
  }
}

TEST_CASE("config round trip and presets") {
  const ExperimentConfig cfg = ExperimentConfig::parse(kSmallConfig);
  const ExperimentConfig back = ExperimentConfig::parse(cfg.to_json());
  CHECK(dump_json(back.to_json()) == dump_json(cfg.to_json()));
  CHECK(preset_from_string("paper") == Preset::kPaper);
  CHECK_THROWS_AS(preset_from_string("lab"), Error);
  CHECK(preset_constants(Preset::kPaper, 2).increment.rho == std::ldexp(1.0, -20));
  CHECK_THROWS_AS(ExperimentConfig::load("no/such/file.json"), Error);
}

TEST_CASE("task errors other than config are recorded") {
  const ExperimentConfig cfg = ExperimentConfig::parse(json::parse(R"({
    "polynomial": [1, 0, 1],
    "tasks": [{"name": "aux", "op": "aux", "params": {"ells": [1, 2]}, "required": true}]
  })"));
  const RunReport r = run_experiment(cfg, scratch("errs").string());
  REQUIRE(r.records.size() == 1);
  CHECK_FALSE(r.ok());
  CHECK(r.records[0].result.at("error").at("code") == "missing-root-data");
}
