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

#include "vlcsteer/geometry.hpp"

namespace vlcsteer {

/// Photodetector. Area in square meters, responsivity in A/W.
struct ReceiverParams {
  double area_m2 = 1e-4;
  double responsivity = 1.0;
  Vec3 orientation{0.0, 0.0, 1.0};
  Vec3 position;

  friend bool operator==(const ReceiverParams&, const ReceiverParams&) = default;
};

struct BeamState {
  Vec3 position;
  SteeringAngles angles;
  double gamma = 1.0;
  double power_w = 1.0;

  friend bool operator==(const BeamState&, const BeamState&) = default;
};

struct NoiseModel {
  double n0 = 2.5e-20;          // A^2/Hz
  double bandwidth_hz = 20e6;

  double power() const { return n0 * bandwidth_hz; }

  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

/// Lambertian line-of-sight gain; zero when the receiver sits behind the
/// beam or faces away from it.
double los_gain(const BeamState& beam, const ReceiverParams& rx);

/// Same gain from precomputed link terms, for inner loops over gamma.
inline double lambertian_gain(double gamma, double cos_phi_pow_gamma, double area_resp_cos_theta_over_d2) {
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  return (gamma + 1.0) / kTwoPi * cos_phi_pow_gamma * area_resp_cos_theta_over_d2;
}

/// Shannon rate in bits/s for one beam and no interference.
double link_rate(double gain, double power_w, const NoiseModel& noise);

/// B log2(1 + sinr).
double rate_from_sinr(double sinr, const NoiseModel& noise);

/// SINR of a user served by beam `serving` while the other beams interfere.
/// gains[m] is the user's gain from beam m.
double sinr_multibeam(std::span<const double> gains, std::span<const double> powers,
                      std::size_t serving, const NoiseModel& noise);

/// SINRs of a two-user NOMA pair on beam n: the weak user's decoding SINR,
/// the strong user's SINR after cancellation, and the strong user's SINR when
/// decoding the weak user's message.
struct NomaSinrs {
  double xi_weak = 0.0;
  double xi_strong = 0.0;
  double xi_cross = 0.0;
};

/// eta is the weak user's power share rho_1^2. Throws std::domain_error
/// outside [0, 1].
NomaSinrs noma_sinrs(std::span<const double> weak_gains, std::span<const double> strong_gains,
                     std::size_t serving, std::span<const double> powers, double eta,
                     const NoiseModel& noise);

/// Dense gains h(k, n) of every user k from every beam n.
class GainMatrix {
 public:
  GainMatrix() = default;
  GainMatrix(std::size_t users, std::size_t beams) : users_(users), beams_(beams), values_(users * beams, 0.0) {}

  std::size_t users() const { return users_; }
  std::size_t beams() const { return beams_; }
  double& operator()(std::size_t k, std::size_t n) { return values_[k * beams_ + n]; }
  double operator()(std::size_t k, std::size_t n) const { return values_[k * beams_ + n]; }
  std::span<const double> row(std::size_t k) const { return {values_.data() + k * beams_, beams_}; }

 private:
  std::size_t users_ = 0;
  std::size_t beams_ = 0;
  std::vector<double> values_;
};

GainMatrix gain_matrix(std::span<const ReceiverParams> users, std::span<const BeamState> beams);

}  // namespace vlcsteer
