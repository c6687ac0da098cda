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
#include "vlcsteer/steering.hpp"

namespace vlcsteer {

struct ClusterAssignment {
  std::vector<std::size_t> beam_of_user;
  std::vector<std::vector<std::size_t>> members;  // ascending user indices per beam

  static ClusterAssignment from_beams(std::vector<std::size_t> beam_of_user, std::size_t beams);

  friend bool operator==(const ClusterAssignment&, const ClusterAssignment&) = default;
};

struct MultiBeamSolution {
  std::vector<BeamState> beams;
  ClusterAssignment assignment;
  std::vector<double> tau;                // 1 / |J(n)| for each user's beam
  std::vector<double> per_user_rate_bps;  // multi-stream link rate
  double objective = 0.0;                 // sum_k log(tau_k R_k), floored
  bool converged = false;
  int iterations = 0;
};

/// Each user to the beam with the largest gain; ties to the lowest beam.
ClusterAssignment assign_best_beam(std::span<const ReceiverParams> users, std::span<const BeamState> beams);
ClusterAssignment assign_best_beam(const GainMatrix& gains);

struct VucOptions {
  int max_iters = 20;
  SteeringSolver solver = enumeration_solver();
};

/// Alternates per-cluster steering over reduced grids with best-gain
/// reassignment, starting from user n alone in cluster n. Stops when all
/// steering parameters repeat. A revisited state ends the loop with the best
/// iterate seen and converged = false. Throws std::domain_error when there
/// are fewer users than beams.
MultiBeamSolution vuc(std::span<const ReceiverParams> users, const Vec3& ap_position, std::size_t beams,
                      double per_beam_power_w, const GridLimits& limits, const NoiseModel& noise,
                      const VucOptions& options = {});

/// Multi-stream rates: every beam carries its own stream and the other beams
/// interfere. Time shares are 1/|J(n)| within each beam.
struct StreamRates {
  std::vector<double> tau;
  std::vector<double> link_rate_bps;

  double sum_rate_bps() const;
  double log_objective(double floor_bps = 1e-6) const;
};

StreamRates multi_stream_rates(const GainMatrix& gains, const ClusterAssignment& assignment,
                               std::span<const double> powers, const NoiseModel& noise);

/// Single-stream rates: all beams send the same signal, so received
/// amplitudes add and every user gets 1/K of the time.
StreamRates single_stream_rates(const GainMatrix& gains, std::span<const double> powers,
                                const NoiseModel& noise);

}  // namespace vlcsteer
