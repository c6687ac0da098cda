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

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "vlcsteer/channel.hpp"
#include "vlcsteer/geometry.hpp"

namespace vlcsteer {

enum class SteeringObjective {
  kLogRate,  // sum of log rates, equal time shares
  kSumRate,  // time shares optimized too, so the best single user takes all
};

/// Per-user channel gains over every (alpha, beta, gamma) cell of a grid.
/// Only unmasked directions are stored; masked cells read as zero.
class GainTable {
 public:
  GainTable() = default;
  GainTable(AngleGrid grid, std::size_t users);

  const AngleGrid& grid() const { return grid_; }
  std::size_t user_count() const { return users_; }

  /// Flattened indices of the stored cells, ascending.
  std::size_t active_cell_count() const { return directions_.size() * grid_.gammas.size(); }
  std::size_t active_flat_index(std::size_t active) const;
  std::span<const double> active_gains(std::size_t user) const;
  std::span<double> active_gains(std::size_t user);

  double gain(std::size_t user, std::size_t flat) const;
  std::vector<double> dense(std::size_t user) const;

  std::span<const std::size_t> directions() const { return directions_; }

 private:
  AngleGrid grid_;
  std::size_t users_ = 0;
  std::vector<std::size_t> directions_;
  std::vector<std::int64_t> slot_of_direction_;
  std::vector<double> values_;  // [user][active direction][gamma]
};

/// Throws std::domain_error when the grid has no unmasked cell.
GainTable build_gain_table(std::span<const ReceiverParams> users, const Vec3& beam_position,
                           const AngleGrid& grid);

struct SteeringSolution {
  SteeringAngles angles;
  double gamma = 0.0;
  std::size_t cell = 0;                 // flattened grid index
  std::vector<double> tau;              // time shares
  std::vector<double> per_user_rate_bps;  // link rate while the user is served
  double objective = 0.0;               // sum_k log(tau_k R_k)
  bool feasible = true;                 // false when some user gets rate 0

  double sum_rate_bps() const;
};

/// Solution for one grid cell.
SteeringSolution evaluate_cell(const GainTable& table, std::size_t flat, double power_w,
                               const NoiseModel& noise,
                               SteeringObjective objective = SteeringObjective::kLogRate);

/// Exact optimum over the grid; ties go to the lowest flattened index.
SteeringSolution solve_enumeration(const GainTable& table, double power_w, const NoiseModel& noise,
                                   SteeringObjective objective = SteeringObjective::kLogRate);

struct MmOptions {
  double q = 0.5;
  double epsilon = 1e-8;
  double lambda0 = 1e-3;
  double lambda_growth = 2.0;
  int max_outer = 100;
  int max_inner = 40;
  double concentration = 0.99;
  int restarts = 5;
  std::uint64_t seed = 0x5eed;
  bool polish = true;  // hill-climb on the grid from the rounded cell
};

/// Relaxed selection weights over the stored cells of a gain table.
struct SelectionVector {
  std::vector<double> weights;  // indexed like GainTable::active_gains

  double max_weight() const;
  std::size_t argmax() const;
};

struct MmResult {
  SelectionVector selection;
  SteeringSolution rounded;   // one-hot rounding of the selection vector
  SteeringSolution solution;  // rounded, or its polished neighbour
  bool converged = false;
  int iterations = 0;
};

/// Reweighted l_q sparsity penalty with lambda continuation. The selection
/// vector is rounded to its argmax cell, then (with polish) moved to the best
/// improving neighbour on the grid until none improves.
MmResult solve_mm(const GainTable& table, double power_w, const NoiseModel& noise,
                  const MmOptions& options = {});

/// Beam facing straight down at the default directivity.
SteeringSolution baseline_no_steering(std::span<const ReceiverParams> users, const Vec3& beam_position,
                                      double gamma_def, double power_w, const NoiseModel& noise);

struct GenieResult {
  std::vector<double> per_user_rate_bps;  // rate with the beam on the user
  std::vector<double> tau;
  double sum_rate_bps() const;
};

/// Idealized per-slot steering: each user gets 1/K of the time with the beam
/// pointed exactly at them at the given directivity.
GenieResult baseline_genie_fast(std::span<const ReceiverParams> users, const Vec3& beam_position,
                                double gamma_max, double power_w, const NoiseModel& noise);

/// Steering back end used by the clustering loop.
using SteeringSolver =
    std::function<SteeringSolution(const GainTable&, double power_w, const NoiseModel&)>;

SteeringSolver enumeration_solver();
SteeringSolver mm_solver(MmOptions options = {});

/// Euclidean projection onto the probability simplex, in place.
void project_to_simplex(std::span<double> v);

}  // namespace vlcsteer
