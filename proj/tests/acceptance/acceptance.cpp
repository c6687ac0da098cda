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

// Desk-scale acceptance run. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.
//
//   acceptance            all criteria
//   acceptance 3 9        selected criteria

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "vlcsteer/clustering.hpp"
#include "vlcsteer/experiment.hpp"
#include "vlcsteer/noma.hpp"
#include "vlcsteer/power.hpp"
#include "vlcsteer/report.hpp"
#include "vlcsteer/scenario.hpp"
#include "vlcsteer/steering.hpp"

namespace {

using namespace vlcsteer;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double mbps(double bps) { return bps / 1e6; }

// Mean sum rate per (scheme, K, N).
std::map<std::tuple<std::string, std::size_t, std::size_t>, double> means(const RateReport& r) {
  std::map<std::tuple<std::string, std::size_t, std::size_t>, double> out;
  for (const Aggregate& a : r.aggregates) out[{a.scheme, a.k, a.n}] = a.mean_sum_rate_bps;
  return out;
}

ExperimentSpec spec_of(ExperimentKind kind, std::vector<std::size_t> k, std::vector<std::size_t> n,
                       std::vector<Scheme> schemes, std::size_t trials) {
  ExperimentSpec s = default_spec(kind);
  s.users = std::move(k);
  s.beams = std::move(n);
  s.schemes = std::move(schemes);
  s.trials = trials;
  return s;
}

std::vector<ReceiverParams> receivers(const Scenario& s, const std::vector<Vec3>& pos) { return s.receivers(pos); }

Verdict criterion1() {
  const auto t0 = Clock::now();
  const RateReport r = run_experiment(
      Scenario{}, spec_of(ExperimentKind::kSingleBeamSweep, {1}, {1}, {Scheme::kNoSteering, Scheme::kSbsf}, 200));
  const double secs = seconds_since(t0);
  auto m = means(r);
  const double ratio = m[{"sbsf", 1, 1}] / m[{"no_steering", 1, 1}];
  return {ratio >= 3.5 && secs <= 120.0,
          "SBSF / no-steering at K=1 = " + fmt("%.3f", ratio) + " (need >= 3.5), " + fmt("%.1f", secs) +
              " s (need <= 120 s)"};
}

Verdict criterion2() {
  std::vector<std::size_t> ks(10);
  std::iota(ks.begin(), ks.end(), 1);
  const RateReport r =
      run_experiment(Scenario{}, spec_of(ExperimentKind::kSingleBeamSweep, ks, {1},
                                         {Scheme::kNoSteering, Scheme::kSbs, Scheme::kSbsf, Scheme::kGaFbs}, 200));
  auto m = means(r);
  std::string bad;
  std::string table;
  for (std::size_t k : ks) {
    const double no = m[{"no_steering", k, 1}], sbs = m[{"sbs", k, 1}], sbsf = m[{"sbsf", k, 1}],
                 ga = m[{"ga_fbs", k, 1}];
    table += " K=" + std::to_string(k) + ":" + fmt("%.1f", mbps(ga)) + "/" + fmt("%.1f", mbps(sbsf)) + "/" +
             fmt("%.1f", mbps(sbs)) + "/" + fmt("%.1f", mbps(no));
    if (!(ga >= sbsf && sbsf >= sbs && sbs >= no)) bad += (bad.empty() ? "" : ",") + std::to_string(k);
  }
  return {bad.empty(), "GA-FBS/SBSF/SBS/none Mbps" + table + (bad.empty() ? "" : "; ordering broken at K=" + bad)};
}

Verdict criterion3() {
  const auto t0 = Clock::now();
  const RateReport r = run_experiment(
      Scenario{}, spec_of(ExperimentKind::kBeamCountSweep, {10}, {1, 2, 3, 4, 5},
                          {Scheme::kNoSteering, Scheme::kMultiStream}, 100));
  const double secs = seconds_since(t0);
  auto m = means(r);
  std::size_t best = 1;
  std::string series;
  for (std::size_t n = 1; n <= 5; ++n) {
    series += " N=" + std::to_string(n) + ":" + fmt("%.1f", mbps(m[{"multi_stream", 10, n}]));
    if (m[{"multi_stream", 10, n}] > m[{"multi_stream", 10, best}]) best = n;
  }
  const double ratio = m[{"multi_stream", 10, 3}] / m[{"no_steering", 10, 3}];
  const bool argmax_ok = best >= 2 && best <= 4;
  return {argmax_ok && ratio >= 3.0 && secs <= 600.0,
          "multi-stream Mbps" + series + "; argmax N=" + std::to_string(best) + " (need 3 +- 1); N=3 ratio " +
              fmt("%.2f", ratio) + " (need >= 3.0); " + fmt("%.1f", secs) + " s (need <= 600 s)"};
}

Verdict criterion4() {
  const RateReport r =
      run_experiment(Scenario{}, spec_of(ExperimentKind::kPowerOptSweep, {6, 7, 8, 9, 10}, {3},
                                         {Scheme::kMultiStream, Scheme::kPowerOptSum}, 100));
  auto m = means(r);
  bool ok = true;
  std::string series;
  for (std::size_t k = 6; k <= 10; ++k) {
    const double gain = mbps(m[{"power_opt_sum", k, 3}] - m[{"multi_stream", k, 3}]);
    series += " K=" + std::to_string(k) + ":" + fmt("%.1f", gain);
    ok &= gain >= 20.0 && gain <= 90.0;
  }
  return {ok, "sum-rate gain over equal power, Mbps" + series + " (need each in [20, 90])"};
}

Verdict criterion5() {
  const RateReport r = run_experiment(
      Scenario{}, spec_of(ExperimentKind::kPowerOptSweep, {10}, {10}, {Scheme::kNoSteering, Scheme::kPowerOptSum}, 50));
  auto m = means(r);
  const double ratio = m[{"power_opt_sum", 10, 10}] / m[{"no_steering", 10, 10}];
  return {ratio >= 8.0, "max-sum-rate N=10 / no-steering at K=10 = " + fmt("%.2f", ratio) + " (need >= 8)"};
}

Verdict criterion6() {
  const Scenario s;
  std::vector<double> gains;
  std::size_t fallbacks = 0;
  for (std::size_t trial = 0; gains.size() < 200; ++trial) {
    const auto users = sample_users(s, 10, trial_seed(s.seed, trial));
    const NomaTrial t = noma_trial(s, users, 3, 3.0, std::nullopt, NomaObjective::kLogRate);
    for (const PairOutcome& p : t.pairs) {
      if (gains.size() == 200) break;
      gains.push_back(mbps(p.gain_bps));
      fallbacks += p.fallback ? 1 : 0;
    }
  }
  std::sort(gains.begin(), gains.end());
  const double median = 0.5 * (gains[99] + gains[100]);
  return {median >= 5.0 && median <= 15.0, "median per-pair gain " + fmt("%.2f", median) +
                                               " Mbps over 200 pairs (need [5, 15]); " + std::to_string(fallbacks) +
                                               " pairs kept TDMA"};
}

Verdict criterion7() {
  const Scenario s;
  const std::vector<double> xis{1, 2, 3, 5, 10};
  const std::vector<double> rhos{0.1, 0.2, 0.3};
  std::map<std::pair<double, double>, std::pair<std::size_t, std::size_t>> counts;
  for (std::size_t trial = 0; trial < 100; ++trial) {
    const auto users = sample_users(s, 10, trial_seed(s.seed, trial));
    for (double xi : xis)
      for (double rho : rhos) {
        const NomaTrial t = noma_trial(s, users, 3, xi, rho, NomaObjective::kLogRate);
        counts[{xi, rho}].first += t.sic_feasible;
        counts[{xi, rho}].second += t.candidate_pairs;
      }
  }
  auto frac = [&](double xi, double rho) {
    const auto& c = counts.at({xi, rho});
    return c.second ? static_cast<double>(c.first) / static_cast<double>(c.second) : 0.0;
  };
  bool ok = true;
  std::string table;
  for (double rho : rhos) {
    table += " rho2=" + fmt("%.1f", rho) + ":";
    for (std::size_t i = 0; i < xis.size(); ++i) {
      table += fmt(" %.3f", frac(xis[i], rho));
      if (i > 0) ok &= frac(xis[i], rho) <= frac(xis[i - 1], rho);
    }
  }
  for (double xi : xis)
    for (std::size_t j = 1; j < rhos.size(); ++j) ok &= frac(xi, rhos[j]) <= frac(xi, rhos[j - 1]);
  return {ok, "feasible fraction by xi* in {1,2,3,5,10}" + table};
}

Verdict criterion8() {
  const Scenario s;
  std::mt19937_64 rng(8);
  std::size_t within = 0, raw = 0;
  const std::size_t total = 200;
  for (std::size_t i = 0; i < total; ++i) {
    const auto pos = sample_users(s, 1 + i % 5, rng());
    const auto users = receivers(s, pos);
    const GainTable t = build_gain_table(users, s.ap_position, search_grid_for_users(pos, s.ap_position, s.grid_limits()));
    const SteeringSolution e = solve_enumeration(t, s.total_power_w, s.noise());
    const MmResult m = solve_mm(t, s.total_power_w, s.noise());
    within += m.solution.objective >= e.objective - 0.01 * std::abs(e.objective) ? 1 : 0;
    raw += m.rounded.objective >= e.objective - 0.01 * std::abs(e.objective) ? 1 : 0;
  }
  const double share = static_cast<double>(within) / total;
  return {share >= 0.95, "MM within 1% of enumeration on " + std::to_string(within) + "/200 scenarios (" +
                             fmt("%.1f", 100 * share) + "%, need >= 95%); argmax rounding before grid polish: " +
                             std::to_string(raw) + "/200"};
}

Verdict criterion9() {
  const Scenario s;
  std::mt19937_64 rng(9);
  double worst = 0.0;
  bool monotone = true;
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 2 + i % 2;
    const auto pos = sample_users(s, 6, rng());
    const auto users = receivers(s, pos);
    const MultiBeamSolution c =
        vuc(users, s.ap_position, n, s.total_power_w / n, s.grid_limits(), s.noise());
    const auto obj = (i / 2) % 2 ? PowerObjective::kLogRate : PowerObjective::kSumRate;
    const PowerProblem p = make_power_problem(c, users, s.total_power_w, s.noise(), obj);
    const ScaResult r = sca_power_opt(p);
    const double sca = true_objective(p, r.allocation.powers);
    const double oracle = true_objective(p, brute_force_power_oracle(p, s.total_power_w / 200).powers);
    worst = std::max(worst, (oracle - sca) / std::abs(oracle));
    const auto& tr = r.state.objective_trace;
    for (std::size_t j = 1; j < tr.size(); ++j) monotone &= tr[j] >= tr[j - 1] - 1e-6 * std::abs(tr[j - 1]);
  }
  return {worst <= 0.02 && monotone, "worst SCA shortfall vs oracle " + fmt("%.4f", 100 * worst) +
                                         "% (need <= 2%); traces non-decreasing: " + (monotone ? "yes" : "no")};
}

Verdict criterion10() {
  const Scenario s;
  std::size_t pairs = 0, within = 0;
  double worst = 0.0;
  for (std::size_t trial = 0; pairs < 200; ++trial) {
    const auto pos = sample_users(s, 10, trial_seed(s.seed + 10, trial));
    const auto users = receivers(s, pos);
    const MultiBeamSolution c = vuc(users, s.ap_position, 3, s.total_power_w / 3, s.grid_limits(), s.noise());
    const PowerProblem p = make_power_problem(c, users, s.total_power_w, s.noise(), PowerObjective::kSumRate);
    const auto powers = sca_power_opt(p).allocation.powers;
    const NomaChannel ch{p.gains, powers, s.noise()};
    for (std::size_t n = 0; n < 3 && pairs < 200; ++n) {
      for (const NomaPair& pair : pair_users(c.assignment.members[n], n, ch, s.xi_star).pairs) {
        if (pairs == 200) break;
        const NomaSolution mm = optimize_coefficients(pair, ch, s.xi_star, NomaObjective::kLogRate);
        const NomaSolution oracle = oracle_1d(pair, ch, s.xi_star, NomaObjective::kLogRate, 1e-4);
        if (!oracle.feasible) continue;
        ++pairs;
        const double gap = (oracle.objective - mm.objective) / std::abs(oracle.objective);
        worst = std::max(worst, gap);
        within += mm.feasible && gap <= 0.01 ? 1 : 0;
      }
    }
  }
  return {within == pairs, "MM within 1% of 1-D oracle on " + std::to_string(within) + "/" + std::to_string(pairs) +
                               " feasible pairs; worst gap " + fmt("%.2e", worst)};
}

Verdict criterion11() {
  const Scenario s;
  std::mt19937_64 rng(11);
  std::size_t containment = 0, mismatch = 0;
  double worst_distance = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto pos = sample_users(s, i < 100 ? 2 : 3, rng());
    const auto users = receivers(s, pos);
    const GridLimits limits = s.grid_limits();
    const GainTable full = build_gain_table(users, s.ap_position, full_grid(limits));
    const AngleGrid reduced = search_grid_for_users(pos, s.ap_position, limits);
    const SteeringSolution ef = solve_enumeration(full, s.total_power_w, s.noise());
    const SteeringSolution er =
        solve_enumeration(build_gain_table(users, s.ap_position, reduced), s.total_power_w, s.noise());
    const auto c = reduced.unflatten(ef.cell);
    containment += reduced.mask[reduced.direction_index(c.alpha_index, c.beta_index)] ? 0 : 1;
    std::vector<Point2> floor;
    for (const Vec3& q : pos) floor.push_back({q.x, q.y});
    const auto hit = axis_plane_intersection(s.ap_position, orientation_from_angles(ef.angles), s.user_height_m);
    worst_distance = std::max(worst_distance, hit ? distance_to_hull(convex_hull(floor), *hit) : HUGE_VAL);
    mismatch += ef.cell == er.cell ? 0 : 1;
  }
  std::size_t norm_bad = 0, taylor_bad = 0;
  std::uniform_real_distribution<double> angle(0.0, 360.0), u(0.01, 2.0);
  for (int i = 0; i < 10000; ++i) {
    norm_bad += std::abs(orientation_from_angles({angle(rng), angle(rng)}).norm() - 1.0) <= 1e-12 ? 0 : 1;
    const double a = u(rng), b = u(rng), p = u(rng), k = u(rng);
    const bool tight = std::abs(taylor_minorant(a, b, a, b) - a * a / b) <= 1e-12 * a * a / b;
    const bool below = taylor_minorant(p, k, a, b) <= p * p / k * (1 + 1e-12);
    taylor_bad += tight && below ? 0 : 1;
  }
  return {containment == 0 && mismatch == 0 && norm_bad == 0 && taylor_bad == 0,
          "optimum outside the grid-resolution hull " + std::to_string(containment) +
              "/200 (largest distance of the axis point from the exact hull " + fmt("%.3f", worst_distance) +
              " m), reduced != full " + std::to_string(mismatch) +
              "/200, norm failures " + std::to_string(norm_bad) + "/10000, minorant failures " +
              std::to_string(taylor_bad) + "/10000"};
}

Verdict criterion12() {
  bool same = true;
  std::string kinds;
  for (ExperimentKind kind : {ExperimentKind::kSingleBeamSweep, ExperimentKind::kPowerOptSweep,
                              ExperimentKind::kNomaThresholdSweep, ExperimentKind::kCdfReport}) {
    ExperimentSpec spec = default_spec(kind);
    spec.trials = 6;
    if (spec.users.size() > 2) spec.users = {spec.users.front(), spec.users.back()};
    const RateReport a = run_experiment(Scenario{}, spec, RunOptions{1});
    const RateReport b = run_experiment(Scenario{}, spec, RunOptions{3});
    const bool eq = report_csv(a) == report_csv(b) && report_json(a) == report_json(b);
    same &= eq;
    kinds += std::string(" ") + std::string(to_string(kind)) + (eq ? ":same" : ":DIFFERENT");
  }
  return {same, "1 vs 3 threads, byte comparison of CSV and JSON:" + kinds};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Verdict()>> criteria{criterion1, criterion2, criterion3,  criterion4,
                                                       criterion5, criterion6, criterion7,  criterion8,
                                                       criterion9, criterion10, criterion11, criterion12};
  std::set<int> chosen;
  for (int i = 1; i < argc; ++i) chosen.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!chosen.empty() && !chosen.count(id)) continue;
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = criteria[i]();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    failed += v.pass ? 0 : 1;
    std::printf("criterion %2d %s  %s  [%.1f s]\n", id, v.pass ? "PASS" : "FAIL", v.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
