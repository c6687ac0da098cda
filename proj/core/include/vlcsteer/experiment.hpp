// Copyright 2026 The vlcsteer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vlcsteer/noma.hpp"
#include "vlcsteer/report.hpp"
#include "vlcsteer/scenario.hpp"

namespace vlcsteer {

enum class ExperimentKind {
  kSingleBeamSweep,
  kMultiBeamSweep,
  kBeamCountSweep,
  kPowerOptSweep,
  kNomaCoeffSweep,
  kNomaThresholdSweep,
  kCdfReport,
};

enum class Scheme {
  kNoSteering,
  kSbs,
  kSbsf,
  kGaFbs,
  kSingleStream,
  kMultiStream,
  kPowerOptSum,
  kPowerOptLog,
  kNoma,
};

std::string_view to_string(ExperimentKind kind);
std::string_view to_string(Scheme scheme);
std::optional<ExperimentKind> parse_kind(std::string_view name);
std::optional<Scheme> parse_scheme(std::string_view name);

/// Raised when a solver cannot produce any result at all.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::kSingleBeamSweep;
  std::string name;  // defaults to the kind name
  std::vector<std::size_t> users;  // K values
  std::vector<std::size_t> beams;  // N values
  std::size_t trials = 200;
  std::vector<Scheme> schemes;
  std::uint64_t seed = 1;
  std::vector<double> xi_stars;  // threshold sweep; empty means the scenario value
  std::vector<double> rho2s;     // fixed weak-user coefficients; empty means optimized
  NomaObjective noma_mode = NomaObjective::kLogRate;
};

/// Sweep ranges, schemes and trial count for each kind.
ExperimentSpec default_spec(ExperimentKind kind);

struct RunOptions {
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Master seed and trial index to the trial's placement seed. The same trial
/// index sees the same users at every sweep point.
std::uint64_t trial_seed(std::uint64_t master, std::size_t trial);

/// Trials run concurrently; rows are assembled by sweep point, then trial,
/// then scheme, then user. A trial in which any scheme fails is dropped and
/// counted. Throws SolverError when every trial of a non-empty run fails.
RateReport run_experiment(const Scenario& scenario, const ExperimentSpec& spec, const RunOptions& options = {});

/// Per-pair outcome of the NOMA pipeline within one trial.
struct PairOutcome {
  NomaPair pair;
  NomaSolution solution;
  double tdma_sum_bps = 0.0;  // (R_weak + R_strong) / 2 within the pair's slot
  double gain_bps = 0.0;      // NOMA minus TDMA within the slot, 0 on fallback
  bool fallback = false;
};

struct NomaTrial {
  std::vector<double> rates_bps;  // delivered per user
  std::vector<PairOutcome> pairs;
  std::size_t candidate_pairs = 0;  // pairs formed before the SIC gate
  std::size_t sic_feasible = 0;     // candidates passing the gate at the evaluated eta
};

/// Clusters with steered beams, optimizes powers for sum rate, pairs users in
/// each beam and serves pairs by NOMA when it beats TDMA. A fixed rho2 skips
/// the coefficient optimization.
NomaTrial noma_trial(const Scenario& scenario, std::span<const Vec3> users, std::size_t beams, double xi_star,
                     std::optional<double> fixed_rho2, NomaObjective mode);

}  // namespace vlcsteer
