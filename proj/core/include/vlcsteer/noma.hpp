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

namespace vlcsteer {

/// Two users sharing beam `serving_beam`; the weak user has the lower gain
/// from that beam (ties: lower user index is weak).
struct NomaPair {
  std::size_t weak_user = 0;
  std::size_t strong_user = 0;
  std::size_t serving_beam = 0;

  friend bool operator==(const NomaPair&, const NomaPair&) = default;
};

/// Power split of a pair. eta is the weak user's share rho_1^2.
struct NomaCoefficients {
  double eta = 1.0;

  double rho1() const;
  double rho2() const;
};

enum class NomaObjective {
  kLogRate,  // log R_weak + log R_strong
  kSumRate,  // R_weak + R_strong
};

struct NomaSolution {
  NomaCoefficients coefficients;
  double weak_rate_bps = 0.0;
  double strong_rate_bps = 0.0;
  double sic_margin = 0.0;  // xi_cross - xi_star
  NomaObjective objective_mode = NomaObjective::kLogRate;
  double objective = 0.0;
  bool feasible = false;    // false: serve the pair by TDMA
  int iterations = 0;

  double sum_rate_bps() const { return weak_rate_bps + strong_rate_bps; }
};

/// Channel context shared by the NOMA operations.
struct NomaChannel {
  const GainMatrix& gains;
  std::span<const double> powers;
  NoiseModel noise;
};

NomaSinrs pair_sinrs(const NomaPair& pair, const NomaChannel& channel, double eta);

/// True iff the strong user can decode the weak user's message at eta.
bool sic_feasible(const NomaPair& pair, const NomaChannel& channel, double eta, double xi_star);

/// Orders two users of one beam into a pair.
NomaPair make_pair(std::size_t a, std::size_t b, std::size_t beam, const GainMatrix& gains);

struct Pairing {
  std::vector<NomaPair> pairs;
  std::vector<std::size_t> singles;
};

/// Sorts the members of beam `beam` by serving gain and pairs extremes
/// inward. A candidate is kept only if SIC is feasible at eta = 1; otherwise
/// both users stay single.
Pairing pair_users(std::span<const std::size_t> members, std::size_t beam, const NomaChannel& channel,
                   double xi_star);

/// Objective of a pair at eta under the exact SINRs.
double noma_objective(double weak_rate_bps, double strong_rate_bps, NomaObjective mode);
NomaSolution evaluate_coefficients(const NomaPair& pair, const NomaChannel& channel, double eta,
                                   double xi_star, NomaObjective mode);

struct NomaMmOptions {
  double eta_tolerance = 1e-6;
  int max_iters = 50;
  double initial_eta = 0.75;
};

/// Majorization-minimization over the weak user's SINR: eta / kappa_2 is
/// replaced by its tangent at the expansion point (a, b), which leaves a
/// concave problem on eta in [max(0.5, eta_sic), 1]. Returns feasible = false
/// when no eta in that interval satisfies the SIC constraint.
NomaSolution optimize_coefficients(const NomaPair& pair, const NomaChannel& channel, double xi_star,
                                   NomaObjective mode, const NomaMmOptions& options = {});

/// Scan of eta over {0.5, 0.5 + step, ..., 1} under the exact SINRs.
NomaSolution oracle_1d(const NomaPair& pair, const NomaChannel& channel, double xi_star, NomaObjective mode,
                       double step);

/// Tangent of eta / kappa at (a, b): eta / b - a kappa / b^2 + a / b.
double noma_taylor_minorant(double eta, double kappa, double a, double b);

/// Slot fractions within one beam: a pair holds one full slot, a single
/// half a slot.
struct SlotShares {
  double pair = 0.0;
  double single = 0.0;
};
SlotShares tdma_slot_shares(std::size_t pairs, std::size_t singles);

/// Rates of the two pair users when they split their slot by TDMA: each gets
/// half the slot at full beam power.
struct TdmaPairRates {
  double weak_bps = 0.0;
  double strong_bps = 0.0;
};
TdmaPairRates tdma_pair_rates(const NomaPair& pair, const NomaChannel& channel, double slot_share);

}  // namespace vlcsteer
