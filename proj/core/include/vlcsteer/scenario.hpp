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
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vlcsteer/channel.hpp"
#include "vlcsteer/geometry.hpp"

namespace vlcsteer {

/// Room, transmitter and link parameters. Angles in degrees, lengths in
/// meters, detector area in cm^2 (converted to m^2 by receiver_at).
struct Scenario {
  Vec3 room{8.0, 8.0, 4.0};
  Vec3 ap_position{4.0, 4.0, 4.0};
  std::size_t n_beams = 3;
  double user_height_m = 0.85;
  double alpha_min_deg = 200.0;
  double alpha_max_deg = 340.0;
  double gamma_min = 1.0;
  double gamma_max = 15.0;
  double gamma_def = 5.0;
  double delta_deg = 2.0;
  double receiver_area_cm2 = 1.0;
  double responsivity_a_per_w = 1.0;
  double n0_a2_per_hz = 2.5e-20;
  double bandwidth_hz = 20e6;
  double total_power_w = 1.0;
  double xi_star = 3.0;
  std::uint64_t seed = 1;
  std::vector<Vec3> users;  // fixed placements; empty means sampled

  NoiseModel noise() const;
  ReceiverParams receiver_at(const Vec3& position) const;
  std::vector<ReceiverParams> receivers(std::span<const Vec3> positions) const;
  /// Integer directivity indices gamma_min..gamma_max, or gamma_def alone
  /// when `focus` is false.
  GridLimits grid_limits(bool focus = true) const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Every offending field is listed, in document order.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// Throws ValidationError.
void validate(const Scenario& scenario);

/// Omitted keys take the defaults above; unknown keys are rejected.
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);
std::string emit_scenario(const Scenario& scenario);

/// Uniform over the room floor at the user height. Deterministic per seed.
/// Throws std::domain_error for K = 0.
std::vector<Vec3> sample_users(const Scenario& scenario, std::size_t k, std::uint64_t seed);

}  // namespace vlcsteer
