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

#include "vlcsteer/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>
#include <thread>
#include <utility>

#include "vlcsteer/clustering.hpp"
#include "vlcsteer/power.hpp"
#include "vlcsteer/steering.hpp"

namespace vlcsteer {

namespace {

constexpr std::array<std::pair<ExperimentKind, std::string_view>, 7> kKindNames{{
    {ExperimentKind::kSingleBeamSweep, "single_beam_sweep"},
    {ExperimentKind::kMultiBeamSweep, "multi_beam_sweep"},
    {ExperimentKind::kBeamCountSweep, "beam_count_sweep"},
    {ExperimentKind::kPowerOptSweep, "power_opt_sweep"},
    {ExperimentKind::kNomaCoeffSweep, "noma_coeff_sweep"},
    {ExperimentKind::kNomaThresholdSweep, "noma_threshold_sweep"},
    {ExperimentKind::kCdfReport, "cdf_report"},
}};

constexpr std::array<std::pair<Scheme, std::string_view>, 9> kSchemeNames{{
    {Scheme::kNoSteering, "no_steering"},
    {Scheme::kSbs, "sbs"},
    {Scheme::kSbsf, "sbsf"},
    {Scheme::kGaFbs, "ga_fbs"},
    {Scheme::kSingleStream, "single_stream"},
    {Scheme::kMultiStream, "multi_stream"},
    {Scheme::kPowerOptSum, "power_opt_sum"},
    {Scheme::kPowerOptLog, "power_opt_log"},
    {Scheme::kNoma, "noma"},
}};

constexpr double kRateFloor = 1e-6;

std::vector<std::size_t> range(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> out;
  for (std::size_t v = lo; v <= hi; ++v) out.push_back(v);
  return out;
}

bool multi_beam(Scheme s) {
  return s == Scheme::kSingleStream || s == Scheme::kMultiStream || s == Scheme::kPowerOptSum ||
         s == Scheme::kPowerOptLog || s == Scheme::kNoma;
}

// Lazily computed pieces shared by the schemes of one trial.
class TrialContext {
 public:
  TrialContext(const Scenario& s, std::span<const Vec3> users, std::size_t beams)
      : s_(s), positions_(users.begin(), users.end()), rx_(s.receivers(users)), beams_(beams) {}

  const Scenario& scenario() const { return s_; }
  std::span<const Vec3> positions() const { return positions_; }
  std::span<const ReceiverParams> receivers() const { return rx_; }
  std::size_t beams() const { return beams_; }

  const MultiBeamSolution& clusters() {
    if (!clusters_) {
      const double per_beam = s_.total_power_w / static_cast<double>(beams_);
      clusters_ = vuc(rx_, s_.ap_position, beams_, per_beam, s_.grid_limits(true), s_.noise());
    }
    return *clusters_;
  }

  const PowerProblem& problem(PowerObjective objective) {
    auto& slot = objective == PowerObjective::kSumRate ? sum_problem_ : log_problem_;
    if (!slot) slot = make_power_problem(clusters(), rx_, s_.total_power_w, s_.noise(), objective);
    return *slot;
  }

  const ScaResult& sca(PowerObjective objective) {
    auto& slot = objective == PowerObjective::kSumRate ? sum_sca_ : log_sca_;
    if (!slot) {
      slot = sca_power_opt(problem(objective));
      if (slot->state.infeasible) throw SolverError("power optimization found no feasible start");
    }
    return *slot;
  }

 private:
  const Scenario& s_;
  std::vector<Vec3> positions_;
  std::vector<ReceiverParams> rx_;
  std::size_t beams_;
  std::optional<MultiBeamSolution> clusters_;
  std::optional<PowerProblem> sum_problem_, log_problem_;
  std::optional<ScaResult> sum_sca_, log_sca_;
};

NomaTrial run_noma(TrialContext& ctx, double xi_star, std::optional<double> fixed_rho2, NomaObjective mode) {
  const PowerProblem& problem = ctx.problem(PowerObjective::kSumRate);
  const std::vector<double>& powers = ctx.sca(PowerObjective::kSumRate).allocation.powers;
  const NomaChannel ch{problem.gains, powers, problem.noise};
  const ClusterAssignment& assignment = ctx.clusters().assignment;
  const std::vector<double> link = user_rates(problem, powers);
  const bool fixed = fixed_rho2.has_value();
  const double gate_eta = fixed ? 1.0 - fixed_rho2.value() * fixed_rho2.value() : 1.0;

  NomaTrial out;
  out.rates_bps.assign(problem.users(), 0.0);
  for (std::size_t n = 0; n < problem.beams(); ++n) {
    const auto& members = assignment.members[n];
    const Pairing candidates = pair_users(members, n, ch, 0.0);
    out.candidate_pairs += candidates.pairs.size();
    for (const NomaPair& c : candidates.pairs) out.sic_feasible += sic_feasible(c, ch, gate_eta, xi_star) ? 1 : 0;

    const Pairing pairing = pair_users(members, n, ch, xi_star);
    const SlotShares shares = tdma_slot_shares(pairing.pairs.size(), pairing.singles.size());
    for (std::size_t k : pairing.singles) out.rates_bps[k] = shares.single * link[k];
    for (const NomaPair& pair : pairing.pairs) {
      PairOutcome po;
      po.pair = pair;
      po.solution = fixed ? evaluate_coefficients(pair, ch, gate_eta, xi_star, mode)
                              : optimize_coefficients(pair, ch, xi_star, mode);
      po.tdma_sum_bps = 0.5 * (link[pair.weak_user] + link[pair.strong_user]);
      po.fallback = !po.solution.feasible || po.solution.sum_rate_bps() < po.tdma_sum_bps;
      if (po.fallback) {
        const TdmaPairRates t = tdma_pair_rates(pair, ch, shares.pair);
        out.rates_bps[pair.weak_user] = t.weak_bps;
        out.rates_bps[pair.strong_user] = t.strong_bps;
      } else {
        po.gain_bps = po.solution.sum_rate_bps() - po.tdma_sum_bps;
        out.rates_bps[pair.weak_user] = shares.pair * po.solution.weak_rate_bps;
        out.rates_bps[pair.strong_user] = shares.pair * po.solution.strong_rate_bps;
      }
      out.pairs.push_back(po);
    }
  }
  return out;
}

// One scheme variant evaluated on one trial.
struct Outcome {
  std::vector<double> rates;
  std::vector<std::size_t> beam_of_user;
  std::vector<BeamState> beams;
  std::vector<std::pair<std::string, double>> stats;
};

struct Variant {
  Scheme scheme;
  std::string label;
  double xi_star = 0.0;
  std::optional<double> rho2;
};

std::vector<double> delivered(std::span<const double> tau, std::span<const double> link) {
  std::vector<double> out(tau.size());
  for (std::size_t k = 0; k < tau.size(); ++k) out[k] = tau[k] * link[k];
  return out;
}

Outcome single_beam_outcome(const SteeringSolution& sol, const Scenario& s, std::size_t users) {
  Outcome o;
  o.rates = delivered(sol.tau, sol.per_user_rate_bps);
  o.beam_of_user.assign(users, 0);
  o.beams.push_back({s.ap_position, sol.angles, sol.gamma, s.total_power_w});
  return o;
}

Outcome steer(TrialContext& ctx, bool focus) {
  const Scenario& s = ctx.scenario();
  const AngleGrid grid = search_grid_for_users(ctx.positions(), s.ap_position, s.grid_limits(focus));
  const GainTable table = build_gain_table(ctx.receivers(), s.ap_position, grid);
  const SteeringSolution sol = solve_enumeration(table, s.total_power_w, s.noise());
  return single_beam_outcome(sol, s, ctx.receivers().size());
}

Outcome from_clusters(TrialContext& ctx, std::span<const double> tau, std::span<const double> link,
                      std::span<const double> powers) {
  const MultiBeamSolution& c = ctx.clusters();
  Outcome o;
  o.rates = delivered(tau, link);
  o.beam_of_user = c.assignment.beam_of_user;
  o.beams = c.beams;
  for (std::size_t n = 0; n < o.beams.size(); ++n) o.beams[n].power_w = powers[n];
  o.stats.emplace_back("vuc_iterations", c.iterations);
  o.stats.emplace_back("vuc_converged", c.converged ? 1.0 : 0.0);
  return o;
}

Outcome evaluate(TrialContext& ctx, const Variant& v, NomaObjective mode) {
  const Scenario& s = ctx.scenario();
  const std::size_t k = ctx.receivers().size();
  switch (v.scheme) {
    case Scheme::kNoSteering:
      return single_beam_outcome(
          baseline_no_steering(ctx.receivers(), s.ap_position, s.gamma_def, s.total_power_w, s.noise()), s, k);
    case Scheme::kSbs:
      return steer(ctx, false);
    case Scheme::kSbsf:
      return steer(ctx, true);
    case Scheme::kGaFbs: {
      const GenieResult g = baseline_genie_fast(ctx.receivers(), s.ap_position, s.gamma_max, s.total_power_w, s.noise());
      Outcome o;
      o.rates = delivered(g.tau, g.per_user_rate_bps);
      o.beam_of_user.assign(k, 0);
      return o;
    }
    case Scheme::kMultiStream:
    case Scheme::kSingleStream: {
      const MultiBeamSolution& c = ctx.clusters();
      const GainMatrix gains = gain_matrix(ctx.receivers(), c.beams);
      const PowerAllocation eq = equal_power(ctx.beams(), s.total_power_w);
      const StreamRates r = v.scheme == Scheme::kMultiStream
                                ? multi_stream_rates(gains, c.assignment, eq.powers, s.noise())
                                : single_stream_rates(gains, eq.powers, s.noise());
      return from_clusters(ctx, r.tau, r.link_rate_bps, eq.powers);
    }
    case Scheme::kPowerOptSum:
    case Scheme::kPowerOptLog: {
      const PowerObjective obj =
          v.scheme == Scheme::kPowerOptSum ? PowerObjective::kSumRate : PowerObjective::kLogRate;
      const PowerProblem& problem = ctx.problem(obj);
      const ScaResult& r = ctx.sca(obj);
      Outcome o = from_clusters(ctx, problem.tau, user_rates(problem, r.allocation.powers), r.allocation.powers);
      o.stats.emplace_back("sca_iterations", r.state.iteration);
      return o;
    }
    case Scheme::kNoma: {
      const NomaTrial t = run_noma(ctx, v.xi_star, v.rho2, mode);
      const ScaResult& r = ctx.sca(PowerObjective::kSumRate);
      std::vector<double> ones(k, 1.0);
      Outcome o = from_clusters(ctx, ones, t.rates_bps, r.allocation.powers);
      std::size_t fallbacks = 0;
      for (const PairOutcome& p : t.pairs) {
        fallbacks += p.fallback ? 1 : 0;
        o.stats.emplace_back("pair_gain_bps", p.gain_bps);
      }
      o.stats.emplace_back("pairs", static_cast<double>(t.pairs.size()));
      o.stats.emplace_back("fallback_pairs", static_cast<double>(fallbacks));
      if (t.candidate_pairs > 0)
        o.stats.emplace_back("sic_feasible_fraction",
                             static_cast<double>(t.sic_feasible) / static_cast<double>(t.candidate_pairs));
      return o;
    }
  }
  throw std::logic_error("unknown scheme");
}

struct Point {
  std::size_t k;
  std::size_t n;
};

struct TrialResult {
  bool ok = false;
  std::string error;
  std::vector<Outcome> outcomes;  // one per variant
};

std::vector<Variant> variants(const Scenario& s, const ExperimentSpec& spec) {
  std::vector<Variant> out;
  const std::vector<double> xis = spec.xi_stars.empty() ? std::vector<double>{s.xi_star} : spec.xi_stars;
  for (Scheme scheme : spec.schemes) {
    if (scheme != Scheme::kNoma) {
      out.push_back({scheme, std::string(to_string(scheme)), s.xi_star, std::nullopt});
      continue;
    }
    const bool sweep_xi = !spec.xi_stars.empty();
    for (double xi : xis) {
      std::string base = "noma";
      if (sweep_xi) base += "_xi=" + format_number(xi);
      if (spec.rho2s.empty()) {
        out.push_back({scheme, base, xi, std::nullopt});
        continue;
      }
      for (double rho2 : spec.rho2s) out.push_back({scheme, base + "_rho2=" + format_number(rho2), xi, rho2});
    }
  }
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "unknown";
}

std::string_view to_string(Scheme scheme) {
  for (const auto& [s, name] : kSchemeNames)
    if (s == scheme) return name;
  return "unknown";
}

std::optional<ExperimentKind> parse_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames)
    if (n == name) return k;
  return std::nullopt;
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  for (const auto& [s, n] : kSchemeNames)
    if (n == name) return s;
  return std::nullopt;
}

ExperimentSpec default_spec(ExperimentKind kind) {
  ExperimentSpec spec;
  spec.kind = kind;
  spec.name = std::string(to_string(kind));
  spec.trials = 200;
  switch (kind) {
    case ExperimentKind::kSingleBeamSweep:
      spec.users = range(1, 10);
      spec.beams = {1};
      spec.schemes = {Scheme::kNoSteering, Scheme::kSbs, Scheme::kSbsf, Scheme::kGaFbs};
      break;
    case ExperimentKind::kMultiBeamSweep:
      spec.users = range(3, 10);
      spec.beams = {3};
      spec.schemes = {Scheme::kNoSteering, Scheme::kSbsf, Scheme::kSingleStream, Scheme::kMultiStream};
      break;
    case ExperimentKind::kBeamCountSweep:
      spec.users = {10};
      spec.beams = range(1, 5);
      spec.schemes = {Scheme::kNoSteering, Scheme::kMultiStream};
      break;
    case ExperimentKind::kPowerOptSweep:
      spec.users = range(6, 10);
      spec.beams = {3};
      spec.schemes = {Scheme::kMultiStream, Scheme::kPowerOptSum, Scheme::kPowerOptLog};
      break;
    case ExperimentKind::kNomaCoeffSweep:
      spec.users = {10};
      spec.beams = {3};
      spec.schemes = {Scheme::kPowerOptSum, Scheme::kNoma};
      spec.rho2s = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3};
      break;
    case ExperimentKind::kNomaThresholdSweep:
      spec.users = {10};
      spec.beams = {3};
      spec.schemes = {Scheme::kNoma};
      spec.xi_stars = {1.0, 2.0, 3.0, 5.0, 10.0};
      spec.rho2s = {0.1, 0.2, 0.3};
      break;
    case ExperimentKind::kCdfReport:
      spec.users = {10};
      spec.beams = {3};
      spec.trials = 500;
      spec.schemes = {Scheme::kNoSteering, Scheme::kSbsf,        Scheme::kMultiStream,
                      Scheme::kPowerOptSum, Scheme::kPowerOptLog, Scheme::kNoma};
      break;
  }
  return spec;
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t trial) {
  // splitmix64 finalizer over the trial's position in the master stream
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(trial) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

NomaTrial noma_trial(const Scenario& scenario, std::span<const Vec3> users, std::size_t beams, double xi_star,
                     std::optional<double> fixed_rho2, NomaObjective mode) {
  TrialContext ctx(scenario, users, beams);
  return run_noma(ctx, xi_star, fixed_rho2, mode);
}

RateReport run_experiment(const Scenario& scenario, const ExperimentSpec& spec, const RunOptions& options) {
  validate(scenario);
  const std::string name = spec.name.empty() ? std::string(to_string(spec.kind)) : spec.name;
  const std::vector<Variant> vars = variants(scenario, spec);
  const bool any_multi = std::any_of(spec.schemes.begin(), spec.schemes.end(), multi_beam);

  std::vector<std::size_t> ks = spec.users;
  if (!scenario.users.empty()) ks = {scenario.users.size()};
  std::vector<std::size_t> ns = spec.beams.empty() ? std::vector<std::size_t>{scenario.n_beams} : spec.beams;

  std::vector<Point> points;
  std::size_t skipped = 0;
  for (std::size_t k : ks)
    for (std::size_t n : ns) {
      if (k == 0 || n == 0 || (any_multi && k < n)) {
        ++skipped;
        continue;
      }
      points.push_back({k, n});
    }

  const std::size_t jobs = points.size() * spec.trials;
  std::vector<TrialResult> results(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next.fetch_add(1); j < jobs; j = next.fetch_add(1)) {
      const Point& pt = points[j / spec.trials];
      const std::size_t trial = j % spec.trials;
      TrialResult& r = results[j];
      try {
        const std::vector<Vec3> users =
            scenario.users.empty() ? sample_users(scenario, pt.k, trial_seed(spec.seed, trial)) : scenario.users;
        TrialContext ctx(scenario, users, pt.n);
        for (const Variant& v : vars) r.outcomes.push_back(evaluate(ctx, v, spec.noma_mode));
        r.ok = true;
      } catch (const std::exception& e) {
        r.outcomes.clear();
        r.error = "K=" + std::to_string(pt.k) + " N=" + std::to_string(pt.n) + " trial=" + std::to_string(trial) +
                  ": " + e.what();
      }
    }
  };
  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(jobs, 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  RateReport report;
  report.experiment = name;
  using StatKey = std::pair<std::size_t, std::size_t>;  // (point, variant)
  std::map<StatKey, std::vector<std::pair<std::string, std::vector<double>>>> stats;
  for (std::size_t j = 0; j < jobs; ++j) {
    const Point& pt = points[j / spec.trials];
    const std::size_t trial = j % spec.trials;
    const TrialResult& r = results[j];
    if (!r.ok) {
      ++report.excluded_trials;
      report.failures.push_back(r.error);
      continue;
    }
    const std::uint64_t seed = scenario.users.empty() ? trial_seed(spec.seed, trial) : 0;
    for (std::size_t vi = 0; vi < vars.size(); ++vi) {
      const Outcome& o = r.outcomes[vi];
      const double sum = std::accumulate(o.rates.begin(), o.rates.end(), 0.0);
      double objective = 0.0;
      for (double x : o.rates) objective += std::log(std::max(x, kRateFloor));
      for (std::size_t u = 0; u < o.rates.size(); ++u)
        report.records.push_back(
            {name, vars[vi].label, trial, seed, pt.k, pt.n, u, o.beam_of_user[u], o.rates[u], sum, objective});
      for (std::size_t b = 0; b < o.beams.size(); ++b) {
        const BeamState& bs = o.beams[b];
        report.beams.push_back(
            {vars[vi].label, trial, pt.k, pt.n, b, bs.angles.alpha_deg, bs.angles.beta_deg, bs.gamma, bs.power_w});
      }
      auto& bucket = stats[{j / spec.trials, vi}];
      for (const auto& [key, value] : o.stats) {
        auto it = std::find_if(bucket.begin(), bucket.end(), [&](const auto& e) { return e.first == key; });
        if (it == bucket.end()) it = bucket.insert(bucket.end(), {key, {}});
        it->second.push_back(value);
      }
    }
  }
  if (jobs > 0 && report.excluded_trials == jobs) throw SolverError("every trial failed: " + report.failures.front());

  if (spec.kind == ExperimentKind::kCdfReport) {
    std::stable_sort(report.records.begin(), report.records.end(), [&](const RateRecord& a, const RateRecord& b) {
      if (a.scheme != b.scheme) {
        auto rank = [&](const std::string& label) {
          return std::find_if(vars.begin(), vars.end(), [&](const Variant& v) { return v.label == label; }) -
                 vars.begin();
        };
        return rank(a.scheme) < rank(b.scheme);
      }
      return a.rate_bps < b.rate_bps;
    });
  }

  report.aggregates = aggregate_records(report.records);
  for (Aggregate& a : report.aggregates) {
    for (std::size_t p = 0; p < points.size(); ++p) {
      if (points[p].k != a.k || points[p].n != a.n) continue;
      for (std::size_t vi = 0; vi < vars.size(); ++vi) {
        if (vars[vi].label != a.scheme) continue;
        const auto it = stats.find({p, vi});
        if (it == stats.end()) continue;
        for (const auto& [key, values] : it->second) {
          const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
          a.extras.emplace_back(key + "_mean", mean);
          a.extras.emplace_back(key + "_median", median(values));
          a.extras.emplace_back(key + "_count", static_cast<double>(values.size()));
        }
      }
    }
  }

  auto& m = report.metadata;
  m.emplace_back("kind", std::string(to_string(spec.kind)));
  m.emplace_back("seed", std::to_string(spec.seed));
  m.emplace_back("trials", std::to_string(spec.trials));
  m.emplace_back("delta_deg", format_number(scenario.delta_deg));
  m.emplace_back("total_power_w", format_number(scenario.total_power_w));
  m.emplace_back("xi_star", format_number(scenario.xi_star));
  m.emplace_back("noma_mode", spec.noma_mode == NomaObjective::kLogRate ? "log_rate" : "sum_rate");
  m.emplace_back("rate_floor_bps", format_number(kRateFloor));
  m.emplace_back("vuc_max_iters", std::to_string(VucOptions{}.max_iters));
  m.emplace_back("sca_ratio_tolerance", format_number(ScaOptions{}.ratio_tolerance));
  m.emplace_back("sca_max_iters", std::to_string(ScaOptions{}.max_iters));
  m.emplace_back("noma_eta_tolerance", format_number(NomaMmOptions{}.eta_tolerance));
  m.emplace_back("noma_max_iters", std::to_string(NomaMmOptions{}.max_iters));
  m.emplace_back("skipped_points", std::to_string(skipped));
  m.emplace_back("excluded_trials", std::to_string(report.excluded_trials));
  return report;
}

}  // namespace vlcsteer
