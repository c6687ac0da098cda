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
#include <span>
#include <vector>

#include "vlcsteer/channel.hpp"
#include "vlcsteer/clustering.hpp"

namespace vlcsteer {

enum class PowerObjective {
  kLogRate,  // sum_k log(tau_k (R_k + floor))
  kSumRate,  // sum_k tau_k R_k
};

struct PowerAllocation {
  std::vector<double> powers;

  double total() const;
};

/// Per-beam power problem for a fixed clustering.
struct PowerProblem {
  GainMatrix gains;                 // h(k, n)
  std::vector<std::size_t> beam_of_user;
  std::vector<double> tau;          // 1 / |J(n)|
  double p_max = 1.0;
  NoiseModel noise;
  PowerObjective objective = PowerObjective::kSumRate;
  double rate_floor_bps = 1e-6;     // keeps log objectives finite at zero rate

  std::size_t users() const { return gains.users(); }
  std::size_t beams() const { return gains.beams(); }
};

PowerProblem make_power_problem(const MultiBeamSolution& clusters, std::span<const ReceiverParams> users,
                                double p_max, const NoiseModel& noise, PowerObjective objective);

/// p_n = p_max / N.
PowerAllocation equal_power(std::size_t beams, double p_max);

/// Per-user link rates and the objective under the exact SINR.
std::vector<double> user_rates(const PowerProblem& problem, std::span<const double> powers);
double true_objective(const PowerProblem& problem, std::span<const double> powers);

/// Tangent of p^2 / kappa at (a, b): 2 (a/b) p - (a/b)^2 kappa. Never above
/// p^2 / kappa for kappa > 0 and tight at (a, b).
double taylor_minorant(double p, double kappa, double a, double b);

struct AuxiliaryBounds {
  std::vector<double> eta;    // rate lower bounds, bits/s
  std::vector<double> zeta;   // SINR lower bounds
  std::vector<double> kappa;  // interference-plus-noise upper bounds
};

struct InnerOptions {
  double gap_tolerance = 1e-10;  // absolute barrier gap on the surrogate
  int max_newton = 200;
};

struct InnerResult {
  PowerAllocation allocation;
  AuxiliaryBounds bounds;
  double surrogate = 0.0;  // surrogate objective at the solution
  bool infeasible = false;
  int newton_steps = 0;
};

/// Maximizes the surrogate objective in which each SINR is replaced by its
/// tangent minorant around `ratios[k]` = a_n / b_k. Auxiliary variables are
/// set to their binding values, which leaves a concave program in p solved
/// by a log-barrier Newton method. `start` must be strictly feasible.
InnerResult inner_convex_solve(const PowerProblem& problem, std::span<const double> ratios,
                               std::span<const double> start, const InnerOptions& options = {});

struct ScaOptions {
  double ratio_tolerance = 1e-4;  // max relative change of a/b between rounds
  int max_iters = 50;
  bool multi_start = true;  // also start from beam-weighted allocations
  InnerOptions inner;
};

struct ScaState {
  std::vector<double> ratios;           // a_n / b_k per user
  int iteration = 0;
  std::vector<double> objective_trace;  // true objective, starting at equal power
  bool converged = false;
  bool infeasible = false;
};

struct ScaResult {
  PowerAllocation allocation;
  ScaState state;
  AuxiliaryBounds bounds;
};

/// Equal power first, then with multi_start one allocation favouring each
/// beam and one starving each beam.
std::vector<std::vector<double>> sca_starting_points(std::size_t beams, double p_max, bool multi_start);

/// Successive convex approximation. Each round re-expands the minorant at the
/// previous solution; a round that does not improve the true objective is
/// discarded, so the trace never decreases. With several starting points the
/// run with the best final objective is returned.
ScaResult sca_power_opt(const PowerProblem& problem, const ScaOptions& options = {});

/// Exhaustive scan of {p : p_n in {0, s, 2s, ...}, sum p <= p_max}. Throws
/// std::domain_error for more than three beams.
PowerAllocation brute_force_power_oracle(const PowerProblem& problem, double step);

}  // namespace vlcsteer
