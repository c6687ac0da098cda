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

#include "vlcsteer/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vlcsteer {

ClusterAssignment ClusterAssignment::from_beams(std::vector<std::size_t> beam_of_user, std::size_t beams) {
  ClusterAssignment a;
  a.members.resize(beams);
  for (std::size_t k = 0; k < beam_of_user.size(); ++k) {
    if (beam_of_user[k] >= beams) throw std::invalid_argument("beam index out of range");
    a.members[beam_of_user[k]].push_back(k);
  }
  a.beam_of_user = std::move(beam_of_user);
  return a;
}

ClusterAssignment assign_best_beam(const GainMatrix& gains) {
  if (gains.beams() == 0) throw std::invalid_argument("assignment without beams");
  std::vector<std::size_t> beam_of_user(gains.users());
  for (std::size_t k = 0; k < gains.users(); ++k) {
    const auto row = gains.row(k);
    beam_of_user[k] = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return ClusterAssignment::from_beams(std::move(beam_of_user), gains.beams());
}

ClusterAssignment assign_best_beam(std::span<const ReceiverParams> users, std::span<const BeamState> beams) {
  return assign_best_beam(gain_matrix(users, beams));
}

double StreamRates::sum_rate_bps() const {
  double s = 0.0;
  for (std::size_t k = 0; k < tau.size(); ++k) s += tau[k] * link_rate_bps[k];
  return s;
}

double StreamRates::log_objective(double floor_bps) const {
  double s = 0.0;
  for (std::size_t k = 0; k < tau.size(); ++k) s += std::log(std::max(tau[k] * link_rate_bps[k], floor_bps));
  return s;
}

StreamRates multi_stream_rates(const GainMatrix& gains, const ClusterAssignment& assignment,
                               std::span<const double> powers, const NoiseModel& noise) {
  if (powers.size() != gains.beams() || assignment.beam_of_user.size() != gains.users())
    throw std::invalid_argument("multi_stream_rates: mismatched sizes");
  StreamRates out;
  out.tau.resize(gains.users());
  out.link_rate_bps.resize(gains.users());
  for (std::size_t k = 0; k < gains.users(); ++k) {
    const std::size_t n = assignment.beam_of_user[k];
    out.tau[k] = 1.0 / static_cast<double>(assignment.members[n].size());
    out.link_rate_bps[k] = rate_from_sinr(sinr_multibeam(gains.row(k), powers, n, noise), noise);
  }
  return out;
}

StreamRates single_stream_rates(const GainMatrix& gains, std::span<const double> powers,
                                const NoiseModel& noise) {
  if (powers.size() != gains.beams()) throw std::invalid_argument("single_stream_rates: mismatched sizes");
  StreamRates out;
  const std::size_t users = gains.users();
  out.tau.assign(users, users ? 1.0 / static_cast<double>(users) : 0.0);
  out.link_rate_bps.resize(users);
  for (std::size_t k = 0; k < users; ++k) {
    double amplitude = 0.0;
    for (std::size_t n = 0; n < gains.beams(); ++n) amplitude += powers[n] * gains(k, n);
    out.link_rate_bps[k] = link_rate(amplitude, 1.0, noise);
  }
  return out;
}

namespace {

struct BeamKey {
  SteeringAngles angles;
  double gamma;
  friend bool operator==(const BeamKey&, const BeamKey&) = default;
};

struct IterateKey {
  std::vector<BeamKey> beams;
  std::vector<std::size_t> beam_of_user;
  friend bool operator==(const IterateKey&, const IterateKey&) = default;
};

// Empty clusters take the worst-served user of a cluster with two or more
// members; ties go to the lowest user index.
void repair_empty_clusters(const GainMatrix& gains, std::vector<std::size_t>& beam_of_user, std::size_t beams) {
  for (std::size_t n = 0; n < beams; ++n) {
    std::vector<std::size_t> size(beams, 0);
    for (std::size_t b : beam_of_user) ++size[b];
    if (size[n] > 0) continue;
    std::size_t pick = beam_of_user.size();
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < beam_of_user.size(); ++k) {
      const std::size_t b = beam_of_user[k];
      if (size[b] < 2) continue;
      const double h = gains(k, b);
      if (h < worst) {
        worst = h;
        pick = k;
      }
    }
    if (pick == beam_of_user.size()) throw std::logic_error("no cluster can give up a user");
    beam_of_user[pick] = n;
  }
}

BeamState steer_cluster(std::span<const ReceiverParams> users, std::span<const std::size_t> members,
                        const Vec3& ap, double power, const GridLimits& limits, const NoiseModel& noise,
                        const SteeringSolver& solver) {
  std::vector<ReceiverParams> rx;
  std::vector<Vec3> positions;
  rx.reserve(members.size());
  for (std::size_t k : members) {
    rx.push_back(users[k]);
    positions.push_back(users[k].position);
  }
  const AngleGrid grid = search_grid_for_users(positions, ap, limits);
  const GainTable table = build_gain_table(rx, ap, grid);
  const SteeringSolution sol = solver(table, power, noise);
  return {ap, sol.angles, sol.gamma, power};
}

}  // namespace

MultiBeamSolution vuc(std::span<const ReceiverParams> users, const Vec3& ap_position, std::size_t beams,
                      double per_beam_power_w, const GridLimits& limits, const NoiseModel& noise,
                      const VucOptions& options) {
  if (beams == 0) throw std::domain_error("at least one beam is required");
  if (users.size() < beams) throw std::domain_error("fewer users than beams");
  if (!options.solver) throw std::invalid_argument("missing steering solver");

  const std::vector<double> powers(beams, per_beam_power_w);
  std::vector<std::vector<std::size_t>> members(beams);
  for (std::size_t n = 0; n < beams; ++n) members[n] = {n};

  std::vector<BeamState> previous;
  std::vector<IterateKey> seen;
  MultiBeamSolution best;
  best.objective = -std::numeric_limits<double>::infinity();
  bool have_best = false;

  for (int it = 1; it <= std::max(1, options.max_iters); ++it) {
    std::vector<BeamState> current(beams);
    for (std::size_t n = 0; n < beams; ++n)
      current[n] = steer_cluster(users, members[n], ap_position, per_beam_power_w, limits, noise, options.solver);

    const GainMatrix gains = gain_matrix(users, current);
    std::vector<std::size_t> beam_of_user = assign_best_beam(gains).beam_of_user;
    repair_empty_clusters(gains, beam_of_user, beams);
    ClusterAssignment assignment = ClusterAssignment::from_beams(beam_of_user, beams);

    const StreamRates rates = multi_stream_rates(gains, assignment, powers, noise);
    MultiBeamSolution sol;
    sol.beams = current;
    sol.assignment = std::move(assignment);
    sol.tau = rates.tau;
    sol.per_user_rate_bps = rates.link_rate_bps;
    sol.objective = rates.log_objective();
    sol.iterations = it;

    if (!previous.empty() && previous == current) {
      sol.converged = true;
      return sol;
    }

    IterateKey key;
    for (const BeamState& b : current) key.beams.push_back({b.angles, b.gamma});
    key.beam_of_user = sol.assignment.beam_of_user;
    const bool cycled = std::find(seen.begin(), seen.end(), key) != seen.end();
    seen.push_back(std::move(key));

    if (!have_best || sol.objective > best.objective) {
      best = sol;
      have_best = true;
    }
    best.iterations = it;
    if (cycled) return best;

    previous = std::move(current);
    members = sol.assignment.members;
  }
  return best;
}

}  // namespace vlcsteer
