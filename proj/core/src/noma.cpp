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

#include "vlcsteer/noma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vlcsteer {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Per-user received signal and interference-plus-noise on the serving beam.
struct PairTerms {
  double s1, i1;  // weak
  double s2, i2;  // strong
};

double inter_beam(const NomaChannel& ch, std::size_t user, std::size_t serving) {
  double s = ch.noise.power();
  for (std::size_t m = 0; m < ch.powers.size(); ++m) {
    if (m == serving) continue;
    const double a = ch.gains(user, m) * ch.powers[m];
    s += a * a;
  }
  return s;
}

PairTerms terms(const NomaPair& pair, const NomaChannel& ch) {
  const std::size_t n = pair.serving_beam;
  if (n >= ch.powers.size() || ch.gains.beams() != ch.powers.size())
    throw std::invalid_argument("NOMA: serving beam out of range");
  const double a1 = ch.gains(pair.weak_user, n) * ch.powers[n];
  const double a2 = ch.gains(pair.strong_user, n) * ch.powers[n];
  return {a1 * a1, inter_beam(ch, pair.weak_user, n), a2 * a2, inter_beam(ch, pair.strong_user, n)};
}

// Smallest eta meeting the SIC threshold, or +inf when even eta = 1 fails.
double sic_lower_bound(const PairTerms& t, double xi_star) {
  if (!(t.s2 > 0.0)) return std::numeric_limits<double>::infinity();
  const double lo = xi_star * (t.i2 + t.s2) / (t.s2 * (1.0 + xi_star));
  return lo <= 1.0 ? lo : std::numeric_limits<double>::infinity();
}

}  // namespace

double NomaCoefficients::rho1() const { return std::sqrt(eta); }
double NomaCoefficients::rho2() const { return std::sqrt(1.0 - eta); }

NomaSinrs pair_sinrs(const NomaPair& pair, const NomaChannel& ch, double eta) {
  return noma_sinrs(ch.gains.row(pair.weak_user), ch.gains.row(pair.strong_user), pair.serving_beam, ch.powers,
                    eta, ch.noise);
}

bool sic_feasible(const NomaPair& pair, const NomaChannel& ch, double eta, double xi_star) {
  return pair_sinrs(pair, ch, eta).xi_cross >= xi_star;
}

NomaPair make_pair(std::size_t a, std::size_t b, std::size_t beam, const GainMatrix& gains) {
  const double ha = gains(a, beam);
  const double hb = gains(b, beam);
  if (ha < hb || (ha == hb && a < b)) return {a, b, beam};
  return {b, a, beam};
}

Pairing pair_users(std::span<const std::size_t> members, std::size_t beam, const NomaChannel& ch,
                   double xi_star) {
  std::vector<std::size_t> order(members.begin(), members.end());
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ha = ch.gains(a, beam);
    const double hb = ch.gains(b, beam);
    return ha < hb || (ha == hb && a < b);
  });

  Pairing out;
  std::size_t i = 0;
  std::size_t j = order.size();
  while (j >= i + 2) {
    const NomaPair candidate{order[i], order[j - 1], beam};
    if (sic_feasible(candidate, ch, 1.0, xi_star)) {
      out.pairs.push_back(candidate);
    } else {
      out.singles.push_back(order[i]);
      out.singles.push_back(order[j - 1]);
    }
    ++i;
    --j;
  }
  if (j > i) out.singles.push_back(order[i]);
  std::sort(out.singles.begin(), out.singles.end());
  return out;
}

double noma_objective(double weak_rate_bps, double strong_rate_bps, NomaObjective mode) {
  if (mode == NomaObjective::kSumRate) return weak_rate_bps + strong_rate_bps;
  if (!(weak_rate_bps > 0.0) || !(strong_rate_bps > 0.0)) return kNegInf;
  return std::log(weak_rate_bps) + std::log(strong_rate_bps);
}

NomaSolution evaluate_coefficients(const NomaPair& pair, const NomaChannel& ch, double eta, double xi_star,
                                   NomaObjective mode) {
  const NomaSinrs s = pair_sinrs(pair, ch, eta);
  NomaSolution sol;
  sol.coefficients.eta = eta;
  sol.weak_rate_bps = rate_from_sinr(s.xi_weak, ch.noise);
  sol.strong_rate_bps = rate_from_sinr(s.xi_strong, ch.noise);
  sol.sic_margin = s.xi_cross - xi_star;
  sol.objective_mode = mode;
  sol.objective = noma_objective(sol.weak_rate_bps, sol.strong_rate_bps, mode);
  sol.feasible = sol.sic_margin >= 0.0;
  return sol;
}

double noma_taylor_minorant(double eta, double kappa, double a, double b) {
  return eta / b - a * kappa / (b * b) + a / b;
}

NomaSolution optimize_coefficients(const NomaPair& pair, const NomaChannel& ch, double xi_star,
                                   NomaObjective mode, const NomaMmOptions& opt) {
  const PairTerms t = terms(pair, ch);
  const double lo = std::max(0.5, sic_lower_bound(t, xi_star));
  if (!(lo <= 1.0) || !(t.s1 > 0.0)) {
    NomaSolution none = evaluate_coefficients(pair, ch, 1.0, xi_star, mode);
    none.feasible = false;
    return none;
  }

  auto kappa2 = [&](double eta) { return t.i1 + t.s1 * (1.0 - eta); };
  const double xi2_slope = -t.s2 / t.i2;  // xi_2(eta) = s2 (1 - eta) / i2

  // Maximizer of the concave surrogate over [lo, 1] for expansion point (a, b).
  auto solve_surrogate = [&](double a, double b) {
    // zeta(eta) = c0 + c1 eta, the tangent-based weak-user SINR.
    const double c1 = t.s1 * (1.0 / b + a * t.s1 / (b * b));
    const double c0 = t.s1 * (a / b - a * (t.i1 + t.s1) / (b * b));
    auto g = [&](double x) {
      return mode == NomaObjective::kSumRate ? 1.0 / (1.0 + x) : 1.0 / ((1.0 + x) * std::log1p(x));
    };
    auto derivative = [&](double eta) {
      const double zeta = c0 + c1 * eta;
      const double xi2 = t.s2 * (1.0 - eta) / t.i2;
      return c1 * g(zeta) + xi2_slope * g(xi2);
    };

    // log1p needs zeta > -1; the log of a rate needs zeta > 0 and eta < 1.
    const double zeta_min = mode == NomaObjective::kLogRate ? 0.0 : -1.0;
    double left = std::max(lo, (zeta_min - c0) / c1);
    double right = 1.0;
    if (!(left < right)) return right;
    if (mode == NomaObjective::kSumRate && derivative(right) >= 0.0) return right;
    if (c0 + c1 * left > zeta_min && derivative(left) <= 0.0) return left;
    for (int it = 0; it < 200 && right - left > 1e-15; ++it) {
      const double mid = 0.5 * (left + right);
      if (derivative(mid) > 0.0)
        left = mid;
      else
        right = mid;
    }
    return 0.5 * (left + right);
  };

  double a = opt.initial_eta;
  double b = kappa2(a);
  double eta = a;
  int calm = 0;
  int it = 0;
  while (it < opt.max_iters) {
    ++it;
    const double next = solve_surrogate(a, b);
    calm = std::abs(next - eta) <= opt.eta_tolerance ? calm + 1 : 0;
    eta = next;
    a = eta;
    b = kappa2(eta);
    if (calm >= 2) break;
  }

  eta = std::clamp(eta, lo, 1.0);
  NomaSolution sol = evaluate_coefficients(pair, ch, eta, xi_star, mode);
  // The analytic bound can land a rounding error short of the threshold.
  for (int nudge = 0; nudge < 64 && sol.sic_margin < 0.0 && eta < 1.0; ++nudge) {
    eta = std::min(1.0, std::nextafter(eta, 2.0) + 1e-15 * nudge);
    sol = evaluate_coefficients(pair, ch, eta, xi_star, mode);
  }
  sol.iterations = it;
  return sol;
}

NomaSolution oracle_1d(const NomaPair& pair, const NomaChannel& ch, double xi_star, NomaObjective mode,
                       double step) {
  if (!(step > 0.0)) throw std::domain_error("oracle step must be positive");
  NomaSolution best;
  best.feasible = false;
  best.objective = kNegInf;
  bool found = false;
  const auto count = static_cast<std::size_t>(std::floor(0.5 / step + 1e-9));
  for (std::size_t i = 0; i <= count + 1; ++i) {
    const double eta = i <= count ? 0.5 + static_cast<double>(i) * step : 1.0;
    if (eta > 1.0) break;
    const NomaSolution s = evaluate_coefficients(pair, ch, eta, xi_star, mode);
    if (!s.feasible || s.objective == kNegInf) continue;
    if (!found || s.objective > best.objective) {
      best = s;
      found = true;
    }
  }
  if (!found) {
    best = evaluate_coefficients(pair, ch, 1.0, xi_star, mode);
    best.feasible = false;
  }
  return best;
}

SlotShares tdma_slot_shares(std::size_t pairs, std::size_t singles) {
  const double slots = static_cast<double>(pairs) + 0.5 * static_cast<double>(singles);
  if (slots == 0.0) return {};
  return {1.0 / slots, 0.5 / slots};
}

TdmaPairRates tdma_pair_rates(const NomaPair& pair, const NomaChannel& ch, double slot_share) {
  const std::size_t n = pair.serving_beam;
  const double r1 = rate_from_sinr(sinr_multibeam(ch.gains.row(pair.weak_user), ch.powers, n, ch.noise), ch.noise);
  const double r2 = rate_from_sinr(sinr_multibeam(ch.gains.row(pair.strong_user), ch.powers, n, ch.noise), ch.noise);
  return {0.5 * slot_share * r1, 0.5 * slot_share * r2};
}

}  // namespace vlcsteer
