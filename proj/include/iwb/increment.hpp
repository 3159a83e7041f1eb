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

// Density increments on progressions of step lambda(q) and the iteration
// that chains them.

#ifndef IWB_INCREMENT_HPP
#define IWB_INCREMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iwb/avoiding_set.hpp"
#include "iwb/intersective.hpp"

namespace iwb {

struct Progression {
  std::uint64_t start = 0;
  std::uint64_t step = 0;
  std::uint64_t length = 0;
  std::uint64_t q = 0;
  std::uint64_t last() const { return start + (length - 1) * step; }
  nlohmann::json to_json() const;
};

struct Extraction {
  Progression progression;  // first hit, or the densest tile when nothing qualifies
  std::uint64_t hits = 0;   // |A cap P|
  double density = 0;
  double threshold = 0;     // (1 + eta/20) alpha
  bool found = false;
  nlohmann::json to_json() const;
};

/// Tiles each residue class mod lambda_q by blocks of length
/// ceil(c eta X / (lambda_q T)), T = max(1, |xi| X), and returns the first
/// block whose density reaches the threshold. kInfeasible when the target
/// length is below 1 or exceeds every class.
Extraction extract_increment(const AvoidingSet& A, std::uint64_t q, double xi, double eta, std::uint64_t lambda_q,
                             double c = 1.0);

/// d_eps = 1/((2 + eps)(1 + eps) + 2); F(x) = log(x)^{d_eps} / sqrt(log(3 + log x)).
double F_eval(double X, double epsilon);

struct IncrementConfig {
  double c_h = 0.01;
  double C_h = 20;
  double C1 = 10;
  double C2 = 100;
  double C3 = 100;
  double C4 = 100;
  double epsilon = 1;
  double rho = 0.5;
  std::uint64_t X_min = 16;
  int xi_points = 33;
  double extract_c = 1.0;
  int max_candidates = 32;
  int max_steps = 64;
  bool option1_short_circuit = false;

  static IncrementConfig desk();
  /// rho = 2^{-10k} and option (1) short-circuits.
  static IncrementConfig paper(int degree);
  nlohmann::json to_json() const;
  /// Unknown keys are rejected.
  static IncrementConfig from_json(const nlohmann::json& j, IncrementConfig base);
};

enum class StepOption { kStar, kOpt1, kOpt2, kOpt3, kNone };
const char* step_option_name(StepOption o);

struct Envelopes {
  bool star = false;
  bool opt2 = false;
  int j = 0;
  bool opt3 = false;
};

struct StepOutcome {
  StepOption option = StepOption::kNone;
  std::optional<Progression> progression;
  double old_alpha = 0;
  double new_alpha = 0;
  std::optional<int> j;
  Envelopes envelopes;
  bool option1_holds = false;  // alpha <= exp(-c_h F(X))
  double eta = 0;
  double xi = 0;
  std::uint64_t q = 0;
  int candidates_tried = 0;
  std::optional<AuxiliaryContext> new_context;
  std::optional<AvoidingSet> rescaled;
  std::string diagnostic;
  nlohmann::json to_json() const;
};

/// Rescaling: start + j step maps to j + 1.
AvoidingSet rescale(const AvoidingSet& A, const Progression& P);

Envelopes classify_envelopes(double old_alpha, double new_alpha, std::uint64_t length, std::uint64_t X,
                             const IncrementConfig& cfg);

/// Throws kInvalidArgument for empty A or X < X_min.
StepOutcome increment_step(const AvoidingSet& A, const AuxiliaryContext& ctx, const IncrementConfig& cfg);

struct TraceRow {
  int m = 0;
  std::uint64_t X = 0;
  double alpha = 0;
  std::uint64_t q = 1;
  mpz_class ell = 1;
  std::string option;
  bool ell_bound_ok = true;  // ell_m <= 2^m X_0 / X_m
};

struct IterationTrace {
  std::vector<TraceRow> rows;
  std::string stop_reason;
  nlohmann::json config;
  bool invariants_ok() const;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

IterationTrace iterate(const AvoidingSet& A, std::shared_ptr<const RootChoices> choices, const IncrementConfig& cfg);

}  // namespace iwb

#endif  // IWB_INCREMENT_HPP
