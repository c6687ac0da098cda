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

#include "vlcsteer/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vlcsteer {

double los_gain(const BeamState& beam, const ReceiverParams& rx) {
  const LinkGeometry g =
      link_geometry(beam.position, orientation_from_angles(beam.angles), rx.position, rx.orientation);
  if (g.cos_phi <= 0.0 || g.cos_theta <= 0.0) return 0.0;
  return lambertian_gain(beam.gamma, std::pow(g.cos_phi, beam.gamma),
                         rx.area_m2 * rx.responsivity * g.cos_theta / (g.distance * g.distance));
}

double rate_from_sinr(double sinr, const NoiseModel& noise) {
  return noise.bandwidth_hz * std::log1p(sinr) / std::numbers::ln2;
}

double link_rate(double gain, double power_w, const NoiseModel& noise) {
  const double amplitude = power_w * gain;
  return rate_from_sinr(amplitude * amplitude / noise.power(), noise);
}

double sinr_multibeam(std::span<const double> gains, std::span<const double> powers,
                      std::size_t serving, const NoiseModel& noise) {
  if (gains.size() != powers.size() || serving >= gains.size())
    throw std::invalid_argument("sinr_multibeam: mismatched beam vectors");
  double interference = noise.power();
  for (std::size_t m = 0; m < gains.size(); ++m) {
    if (m == serving) continue;
    const double a = powers[m] * gains[m];
    interference += a * a;
  }
  const double s = powers[serving] * gains[serving];
  return s * s / interference;
}

NomaSinrs noma_sinrs(std::span<const double> weak_gains, std::span<const double> strong_gains,
                     std::size_t serving, std::span<const double> powers, double eta,
                     const NoiseModel& noise) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::domain_error("NOMA power share outside [0, 1]");
  if (weak_gains.size() != powers.size() || strong_gains.size() != powers.size() ||
      serving >= powers.size())
    throw std::invalid_argument("noma_sinrs: mismatched beam vectors");

  auto inter_beam = [&](std::span<const double> gains) {
    double sum = noise.power();
    for (std::size_t m = 0; m < gains.size(); ++m) {
      if (m == serving) continue;
      const double a = powers[m] * gains[m];
      sum += a * a;
    }
    return sum;
  };
  const double i_weak = inter_beam(weak_gains);
  const double i_strong = inter_beam(strong_gains);
  const double s_weak = std::pow(weak_gains[serving] * powers[serving], 2);
  const double s_strong = std::pow(strong_gains[serving] * powers[serving], 2);

  NomaSinrs out;
  out.xi_weak = s_weak * eta / (i_weak + s_weak * (1.0 - eta));
  out.xi_strong = s_strong * (1.0 - eta) / i_strong;
  out.xi_cross = s_strong * eta / (i_strong + s_strong * (1.0 - eta));
  return out;
}

GainMatrix gain_matrix(std::span<const ReceiverParams> users, std::span<const BeamState> beams) {
  GainMatrix h(users.size(), beams.size());
  for (std::size_t k = 0; k < users.size(); ++k)
    for (std::size_t n = 0; n < beams.size(); ++n) h(k, n) = los_gain(beams[n], users[k]);
  return h;
}

}  // namespace vlcsteer
