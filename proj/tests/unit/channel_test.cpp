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

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "frozen_values.hpp"
#include "vlcsteer/channel.hpp"

namespace vlcsteer {
namespace {

BeamState nadir_beam(double gamma = 5.0) {
  BeamState b;
  b.position = {0, 0, 4};
  b.angles = {270.0, 0.0};
  b.gamma = gamma;
  return b;
}

ReceiverParams rx_at(Vec3 p) {
  ReceiverParams r;
  r.position = p;
  return r;
}

TEST(LosGain, NadirLink) {
  EXPECT_NEAR(los_gain(nadir_beam(), rx_at({0, 0, 0.85})), frozen::kNadirGain, 1e-12 * frozen::kNadirGain);
}

TEST(LosGain, OffAxisLink) {
  EXPECT_NEAR(los_gain(nadir_beam(), rx_at({3.15, 0, 0.85})), frozen::kOffAxisGain, 1e-12 * frozen::kOffAxisGain);
}

TEST(LosGain, ReceiverBehindBeamIsZero) {
  BeamState up = nadir_beam();
  up.angles = {90.0, 0.0};
  EXPECT_EQ(los_gain(up, rx_at({0, 0, 0.85})), 0.0);
}

TEST(LosGain, ReceiverFacingAwayIsZero) {
  ReceiverParams r = rx_at({0, 0, 0.85});
  r.orientation = {0, 0, -1};
  EXPECT_EQ(los_gain(nadir_beam(), r), 0.0);
}

TEST(LosGain, DoublingGammaOnAxis) {
  const double g = 5.0;
  const double ratio = los_gain(nadir_beam(2 * g), rx_at({0, 0, 0.85})) / los_gain(nadir_beam(g), rx_at({0, 0, 0.85}));
  EXPECT_NEAR(ratio, (2 * g + 1) / (g + 1), 1e-14);
}

TEST(LosGain, MaximizedWhenPointedAtUser) {
  const ReceiverParams r = rx_at({2.0, 1.0, 0.85});
  const Vec3 v = r.position - Vec3{0, 0, 4};
  BeamState aimed = nadir_beam(10.0);
  // Orientation pointing straight at the receiver.
  aimed.angles.alpha_deg = 360.0 + std::asin(v.z / v.norm()) * 180.0 / M_PI;
  aimed.angles.beta_deg = std::atan2(v.y, v.x) * 180.0 / M_PI;
  const double best = los_gain(aimed, r);
  for (double a = 200.0; a <= 340.0; a += 1.0)
    for (double b = 0.0; b < 360.0; b += 2.0) {
      BeamState s = aimed;
      s.angles = {a, b};
      ASSERT_LE(los_gain(s, r), best * (1 + 1e-12));
    }
}

TEST(LinkRate, ZeroGainZeroRate) { EXPECT_EQ(link_rate(0.0, 1.0, NoiseModel{}), 0.0); }

TEST(LinkRate, NadirRate) {
  const NoiseModel n;
  const double h = frozen::kNadirGain;
  EXPECT_NEAR(h * h / n.power(), frozen::kNadirSnr, 1e-9);
  EXPECT_NEAR(link_rate(h, 1.0, n), frozen::kNadirRate, 1e-12 * frozen::kNadirRate);
}

TEST(LinkRate, DoublingPowerAddsTwoBandwidths) {
  const NoiseModel n;
  const double h = 1e-2;  // SNR around 2e8
  EXPECT_NEAR(link_rate(h, 2.0, n) - link_rate(h, 1.0, n), 2 * n.bandwidth_hz, 1e-6 * n.bandwidth_hz);
}

TEST(LinkRate, MonotoneInGainAndPower) {
  const NoiseModel n;
  double prev = 0.0;
  for (double h = 1e-7; h < 1e-4; h *= 1.5) {
    const double r = link_rate(h, 0.5, n);
    EXPECT_GT(r, prev);
    prev = r;
  }
  EXPECT_LT(link_rate(1e-5, 0.2, n), link_rate(1e-5, 0.3, n));
}

TEST(SinrMultibeam, SingleBeamIsSnr) {
  const NoiseModel n;
  const std::vector<double> g{frozen::kNadirGain};
  const std::vector<double> p{1.0};
  EXPECT_NEAR(sinr_multibeam(g, p, 0, n), frozen::kNadirSnr, 1e-9);
}

TEST(SinrMultibeam, SymmetricInterference) {
  const NoiseModel n;
  const std::vector<double> g{1e-5, 1e-5};
  const std::vector<double> p{1.0, 1.0};
  EXPECT_NEAR(sinr_multibeam(g, p, 0, n), frozen::kSinrEqual, 1e-15);
}

TEST(SinrMultibeam, TenfoldInterferer) {
  const NoiseModel n;
  const std::vector<double> g{1e-5, 1e-5};
  const std::vector<double> p{1.0, 10.0};
  const double xi = sinr_multibeam(g, p, 0, n);
  EXPECT_NEAR(xi, frozen::kSinrTenfold, 1e-16);
  EXPECT_NEAR(frozen::kSinrEqual / xi, 100.0, 1.0);
}

TEST(NomaSinrs, FullWeakShare) {
  const NoiseModel n;
  const std::vector<double> w{1e-6, 2e-7};
  const std::vector<double> s{3e-6, 1e-7};
  const std::vector<double> p{0.5, 0.5};
  const NomaSinrs x = noma_sinrs(w, s, 0, p, 1.0, n);
  EXPECT_EQ(x.xi_strong, 0.0);
  EXPECT_NEAR(x.xi_weak, sinr_multibeam(w, p, 0, n), 1e-12);
}

TEST(NomaSinrs, ZeroWeakShare) {
  const std::vector<double> w{1e-6};
  const std::vector<double> s{3e-6};
  const std::vector<double> p{1.0};
  EXPECT_EQ(noma_sinrs(w, s, 0, p, 0.0, NoiseModel{}).xi_weak, 0.0);
}

TEST(NomaSinrs, EqualGainsCrossEqualsWeak) {
  const std::vector<double> g{2e-6};
  const std::vector<double> p{1.0};
  const NomaSinrs x = noma_sinrs(g, g, 0, p, 0.5, NoiseModel{});
  EXPECT_NEAR(x.xi_cross, x.xi_weak, 1e-15 * x.xi_weak);
}

TEST(NomaSinrs, OutOfRangeEtaRejected) {
  const std::vector<double> g{2e-6};
  const std::vector<double> p{1.0};
  EXPECT_THROW(noma_sinrs(g, g, 0, p, 1.5, NoiseModel{}), std::domain_error);
  EXPECT_THROW(noma_sinrs(g, g, 0, p, -0.1, NoiseModel{}), std::domain_error);
}

TEST(NomaSinrs, MonotoneInEta) {
  const std::vector<double> w{1e-6};
  const std::vector<double> s{4e-6};
  const std::vector<double> p{1.0};
  NomaSinrs prev = noma_sinrs(w, s, 0, p, 0.01, NoiseModel{});
  for (double eta = 0.02; eta < 1.0; eta += 0.01) {
    const NomaSinrs x = noma_sinrs(w, s, 0, p, eta, NoiseModel{});
    EXPECT_GT(x.xi_cross, prev.xi_cross);
    EXPECT_LT(x.xi_strong, prev.xi_strong);
    prev = x;
  }
}

TEST(GainMatrix, MatchesLosGain) {
  std::vector<ReceiverParams> users{rx_at({0, 0, 0.85}), rx_at({1, 2, 0.85})};
  BeamState second = nadir_beam(3.0);
  second.angles = {300.0, 45.0};
  std::vector<BeamState> beams{nadir_beam(), second};
  const GainMatrix m = gain_matrix(users, beams);
  ASSERT_EQ(m.users(), 2u);
  ASSERT_EQ(m.beams(), 2u);
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t n = 0; n < 2; ++n) EXPECT_EQ(m(k, n), los_gain(beams[n], users[k]));
}

}  // namespace
}  // namespace vlcsteer
