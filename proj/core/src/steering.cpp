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

#include "vlcsteer/steering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <utility>

namespace vlcsteer {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool all_integral(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(),
                     [](double g) { return g >= 0.0 && g == std::floor(g) && g < 1e6; });
}

double ipow(double base, long exponent) {
  double result = 1.0;
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

}  // namespace

// ---------------------------------------------------------------------------
// GainTable

GainTable::GainTable(AngleGrid grid, std::size_t users) : grid_(std::move(grid)), users_(users) {
  slot_of_direction_.assign(grid_.direction_count(), -1);
  for (std::size_t d = 0; d < grid_.direction_count(); ++d) {
    if (!grid_.mask[d]) continue;
    slot_of_direction_[d] = static_cast<std::int64_t>(directions_.size());
    directions_.push_back(d);
  }
  values_.assign(users_ * active_cell_count(), 0.0);
}

std::size_t GainTable::active_flat_index(std::size_t active) const {
  const std::size_t sg = grid_.gammas.size();
  return directions_[active / sg] * sg + active % sg;
}

std::span<const double> GainTable::active_gains(std::size_t user) const {
  return {values_.data() + user * active_cell_count(), active_cell_count()};
}

std::span<double> GainTable::active_gains(std::size_t user) {
  return {values_.data() + user * active_cell_count(), active_cell_count()};
}

double GainTable::gain(std::size_t user, std::size_t flat) const {
  const std::size_t sg = grid_.gammas.size();
  const std::int64_t slot = slot_of_direction_.at(flat / sg);
  if (slot < 0) return 0.0;
  return active_gains(user)[static_cast<std::size_t>(slot) * sg + flat % sg];
}

std::vector<double> GainTable::dense(std::size_t user) const {
  std::vector<double> out(grid_.cell_count(), 0.0);
  const auto g = active_gains(user);
  for (std::size_t i = 0; i < g.size(); ++i) out[active_flat_index(i)] = g[i];
  return out;
}

GainTable build_gain_table(std::span<const ReceiverParams> users, const Vec3& beam_position,
                           const AngleGrid& grid) {
  GainTable table(grid, users.size());
  if (table.active_cell_count() == 0) throw std::domain_error("gain table over an empty grid");

  const auto& gammas = grid.gammas;
  const std::size_t sg = gammas.size();
  const bool integral = all_integral(gammas);
  const auto dirs = table.directions();

  std::vector<Vec3> orient(dirs.size());
  for (std::size_t s = 0; s < dirs.size(); ++s) orient[s] = orientation_from_angles(grid.angles_at(dirs[s]));

  for (std::size_t k = 0; k < users.size(); ++k) {
    const ReceiverParams& rx = users[k];
    const Vec3 v = rx.position - beam_position;
    const double d = v.norm();
    if (!(d > 0.0)) throw std::domain_error("user coincides with the transmitter");
    const double cos_theta = -v.dot(rx.orientation) / d;
    auto out = table.active_gains(k);
    if (cos_theta <= 0.0) continue;  // facing away from the ceiling: zero for every cell
    const double base = rx.area_m2 * rx.responsivity * cos_theta / (d * d);

    for (std::size_t s = 0; s < dirs.size(); ++s) {
      const double cos_phi = std::min(1.0, v.dot(orient[s]) / d);
      if (cos_phi <= 0.0) continue;
      double* row = out.data() + s * sg;
      if (integral) {
        double p = ipow(cos_phi, static_cast<long>(gammas[0]));
        row[0] = lambertian_gain(gammas[0], p, base);
        for (std::size_t g = 1; g < sg; ++g) {
          p *= ipow(cos_phi, static_cast<long>(gammas[g] - gammas[g - 1]));
          row[g] = lambertian_gain(gammas[g], p, base);
        }
      } else {
        for (std::size_t g = 0; g < sg; ++g)
          row[g] = lambertian_gain(gammas[g], std::pow(cos_phi, gammas[g]), base);
      }
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Solutions

double SteeringSolution::sum_rate_bps() const {
  double s = 0.0;
  for (std::size_t k = 0; k < tau.size(); ++k) s += tau[k] * per_user_rate_bps[k];
  return s;
}

SteeringSolution evaluate_cell(const GainTable& table, std::size_t flat, double power_w,
                               const NoiseModel& noise, SteeringObjective objective) {
  const AngleGrid& grid = table.grid();
  const auto cell = grid.unflatten(flat);
  const std::size_t users = table.user_count();

  SteeringSolution sol;
  sol.cell = flat;
  sol.angles = {grid.alphas[cell.alpha_index], grid.betas[cell.beta_index]};
  sol.gamma = grid.gammas[cell.gamma_index];
  sol.per_user_rate_bps.resize(users);
  for (std::size_t k = 0; k < users; ++k)
    sol.per_user_rate_bps[k] = link_rate(table.gain(k, flat), power_w, noise);

  if (objective == SteeringObjective::kSumRate) {
    sol.tau.assign(users, 0.0);
    if (users == 0) return sol;
    const auto best = static_cast<std::size_t>(
        std::max_element(sol.per_user_rate_bps.begin(), sol.per_user_rate_bps.end()) -
        sol.per_user_rate_bps.begin());
    sol.tau[best] = 1.0;
    sol.objective = sol.per_user_rate_bps[best];
    sol.feasible = sol.objective > 0.0;
    return sol;
  }

  sol.tau.assign(users, users ? 1.0 / static_cast<double>(users) : 0.0);
  sol.objective = 0.0;
  for (std::size_t k = 0; k < users; ++k) {
    const double r = sol.tau[k] * sol.per_user_rate_bps[k];
    if (!(r > 0.0)) {
      sol.feasible = false;
      sol.objective = kNegInf;
      break;
    }
    sol.objective += std::log(r);
  }
  return sol;
}

SteeringSolution solve_enumeration(const GainTable& table, double power_w, const NoiseModel& noise,
                                   SteeringObjective objective) {
  if (table.user_count() == 0) throw std::domain_error("enumeration without users");
  const std::size_t cells = table.active_cell_count();
  if (cells == 0) throw std::domain_error("enumeration over an empty grid");

  // Monotone surrogates of the objective: sum_k log(log1p(c h^2)) for the
  // log-rate mode and max_k h for the sum-rate mode.
  const double c = power_w * power_w / noise.power();
  const std::size_t users = table.user_count();
  std::vector<std::span<const double>> gains(users);
  for (std::size_t k = 0; k < users; ++k) gains[k] = table.active_gains(k);

  double best = kNegInf;
  std::size_t best_cell = 0;
  bool found = false;
  for (std::size_t i = 0; i < cells; ++i) {
    double value = 0.0;
    if (objective == SteeringObjective::kSumRate) {
      value = 0.0;
      for (std::size_t k = 0; k < users; ++k) value = std::max(value, gains[k][i]);
      if (!(value > 0.0)) continue;
    } else {
      bool ok = true;
      for (std::size_t k = 0; k < users; ++k) {
        const double h = gains[k][i];
        const double x = std::log1p(c * h * h);
        if (!(x > 0.0)) {
          ok = false;
          break;
        }
        value += std::log(x);
      }
      if (!ok) continue;
    }
    if (!found || value > best) {
      best = value;
      best_cell = i;
      found = true;
    }
  }

  if (!found) {
    SteeringSolution sol = evaluate_cell(table, table.active_flat_index(0), power_w, noise, objective);
    sol.feasible = false;
    return sol;
  }
  return evaluate_cell(table, table.active_flat_index(best_cell), power_w, noise, objective);
}

// ---------------------------------------------------------------------------
// Simplex projection (Condat's algorithm, expected linear time).

void project_to_simplex(std::span<double> y) {
  const std::size_t n = y.size();
  if (n == 0) return;
  // The projection commutes with adding a constant; shifting the maximum to
  // zero keeps the running threshold accurate for large inputs.
  const double top = *std::max_element(y.begin(), y.end());
  for (double& yi : y) yi -= top;
  std::vector<double> v;
  std::vector<double> vt;
  v.reserve(n);
  v.push_back(y[0]);
  double rho = y[0] - 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double yi = y[i];
    if (yi > rho) {
      rho += (yi - rho) / static_cast<double>(v.size() + 1);
      if (rho > yi - 1.0) {
        v.push_back(yi);
      } else {
        vt.insert(vt.end(), v.begin(), v.end());
        v.assign(1, yi);
        rho = yi - 1.0;
      }
    }
  }
  for (double yi : vt) {
    if (yi > rho) {
      v.push_back(yi);
      rho += (yi - rho) / static_cast<double>(v.size());
    }
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < v.size();) {
      if (v[i] <= rho) {
        const double yi = v[i];
        v[i] = v.back();
        v.pop_back();
        if (!v.empty()) rho += (rho - yi) / static_cast<double>(v.size());
        changed = true;
      } else {
        ++i;
      }
    }
  }
  for (double& yi : y) yi = std::max(yi - rho, 0.0);
}

// ---------------------------------------------------------------------------
// MM solver

double SelectionVector::max_weight() const {
  return weights.empty() ? 0.0 : *std::max_element(weights.begin(), weights.end());
}

std::size_t SelectionVector::argmax() const {
  return static_cast<std::size_t>(std::max_element(weights.begin(), weights.end()) - weights.begin());
}

namespace {

// Smooth part of the relaxed problem: sum_k log(log1p(c (d . h_k)^2)). The
// constant log(B / ln 2) per user is dropped.
class RelaxedObjective {
 public:
  RelaxedObjective(const GainTable& table, double c) : c_(c), users_(table.user_count()) {
    gains_.reserve(users_);
    for (std::size_t k = 0; k < users_; ++k) gains_.push_back(table.active_gains(k));
    g_.resize(users_);
    w_.resize(users_);
  }

  // Returns -inf outside the domain (some user with zero received amplitude).
  double value(std::span<const double> d) {
    double f = 0.0;
    for (std::size_t k = 0; k < users_; ++k) {
      const double g = std::inner_product(d.begin(), d.end(), gains_[k].begin(), 0.0);
      const double x = std::log1p(c_ * g * g);
      if (!(x > 0.0)) return kNegInf;
      g_[k] = g;
      f += std::log(x);
    }
    return f;
  }

  // Gradient at the point of the last value() call.
  void gradient(std::span<double> out) {
    for (std::size_t k = 0; k < users_; ++k) {
      const double g = g_[k];
      const double cg2 = c_ * g * g;
      w_[k] = 2.0 * c_ * g / ((1.0 + cg2) * std::log1p(cg2));
    }
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t k = 0; k < users_; ++k) {
      const double wk = w_[k];
      const auto h = gains_[k];
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += wk * h[i];
    }
  }

 private:
  double c_;
  std::size_t users_;
  std::vector<std::span<const double>> gains_;
  std::vector<double> g_;
  std::vector<double> w_;
};

struct InnerState {
  std::vector<double> d;
  double step = 0.0;
};

// Projected gradient ascent on f(d) - lambda * W.d with backtracking.
void inner_solve(RelaxedObjective& f, std::span<const double> weights, double lambda, int max_iters,
                 InnerState& st) {
  const std::size_t n = st.d.size();
  std::vector<double> grad(n), trial(n);
  auto penalized = [&](std::span<const double> d, double fd) {
    return fd - lambda * std::inner_product(d.begin(), d.end(), weights.begin(), 0.0);
  };

  double fd = f.value(st.d);
  double phi = penalized(st.d, fd);
  if (phi == kNegInf) return;

  for (int it = 0; it < max_iters; ++it) {
    f.value(st.d);
    f.gradient(grad);
    double gmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      grad[i] -= lambda * weights[i];
      gmax = std::max(gmax, std::abs(grad[i]));
    }
    if (gmax == 0.0) return;
    if (st.step <= 0.0) st.step = 1.0 / gmax;

    bool accepted = false;
    double max_move = 0.0;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = st.d[i] + st.step * grad[i];
      project_to_simplex(trial);
      double lin = 0.0, sq = 0.0;
      max_move = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double diff = trial[i] - st.d[i];
        lin += grad[i] * diff;
        sq += diff * diff;
        max_move = std::max(max_move, std::abs(diff));
      }
      const double ft = f.value(trial);
      const double phit = penalized(trial, ft);
      if (phit != kNegInf && phit >= phi + lin - sq / (2.0 * st.step)) {
        st.d.swap(trial);
        const double old = phi;
        phi = phit;
        accepted = true;
        st.step *= 2.0;
        if (std::abs(phi - old) <= 1e-13 * std::max(1.0, std::abs(phi))) return;
        break;
      }
      st.step *= 0.5;
    }
    if (!accepted || max_move < 1e-14) return;
  }
}

double lq_objective(RelaxedObjective& f, std::span<const double> d, double lambda, const MmOptions& opt) {
  double pen = 0.0;
  for (double di : d) pen += std::pow(di + opt.epsilon, opt.q);
  return f.value(d) - lambda * pen;
}

void update_weights(std::span<const double> d, const MmOptions& opt, std::vector<double>& w) {
  w.resize(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) w[i] = opt.q * std::pow(d[i] + opt.epsilon, opt.q - 1.0);
}

// Cells leaving some user unserved rank by how many users they serve, then
// by the log objective over those users.
std::pair<std::size_t, double> polish_score(const SteeringSolution& s) {
  std::size_t served = 0;
  double f = 0.0;
  for (std::size_t k = 0; k < s.tau.size(); ++k) {
    const double r = s.tau[k] * s.per_user_rate_bps[k];
    if (r > 0.0) {
      ++served;
      f += std::log(r);
    }
  }
  return {served, f};
}

// Steepest ascent over the 26 grid neighbours (beta wraps around), first
// best on ties in flattened order.
SteeringSolution polish_cell(const GainTable& table, SteeringSolution current, double power_w,
                             const NoiseModel& noise) {
  const AngleGrid& grid = table.grid();
  const auto sa = static_cast<std::int64_t>(grid.alphas.size());
  const auto sb = static_cast<std::int64_t>(grid.betas.size());
  const auto sg = static_cast<std::int64_t>(grid.gammas.size());
  const bool full_circle = grid.delta_deg > 0.0 && std::abs(sb * grid.delta_deg - 360.0) < 1e-9;
  for (;;) {
    const auto c = grid.unflatten(current.cell);
    std::vector<std::size_t> neighbours;
    for (std::int64_t da = -1; da <= 1; ++da)
      for (std::int64_t db = -1; db <= 1; ++db)
        for (std::int64_t dg = -1; dg <= 1; ++dg) {
          if (da == 0 && db == 0 && dg == 0) continue;
          const std::int64_t ia = static_cast<std::int64_t>(c.alpha_index) + da;
          std::int64_t ib = static_cast<std::int64_t>(c.beta_index) + db;
          const std::int64_t ig = static_cast<std::int64_t>(c.gamma_index) + dg;
          if (ia < 0 || ia >= sa || ig < 0 || ig >= sg) continue;
          if (ib < 0 || ib >= sb) {
            if (!full_circle) continue;
            ib = (ib + sb) % sb;
          }
          const auto ua = static_cast<std::size_t>(ia), ub = static_cast<std::size_t>(ib);
          if (!grid.mask.empty() && !grid.mask[grid.direction_index(ua, ub)]) continue;
          neighbours.push_back(grid.flat_index(ua, ub, static_cast<std::size_t>(ig)));
        }
    std::sort(neighbours.begin(), neighbours.end());
    SteeringSolution best = current;
    auto best_score = polish_score(best);
    for (std::size_t flat : neighbours) {
      SteeringSolution s = evaluate_cell(table, flat, power_w, noise);
      const auto score = polish_score(s);
      if (score > best_score) {
        best = std::move(s);
        best_score = score;
      }
    }
    if (best.cell == current.cell) return current;
    current = std::move(best);
  }
}

}  // namespace

MmResult solve_mm(const GainTable& table, double power_w, const NoiseModel& noise, const MmOptions& opt) {
  if (!(opt.q > 0.0 && opt.q < 1.0)) throw std::domain_error("MM exponent q must lie in (0, 1)");
  if (!(opt.epsilon > 0.0)) throw std::domain_error("MM epsilon must be positive");
  if (table.user_count() == 0) throw std::domain_error("MM without users");
  const std::size_t n = table.active_cell_count();
  if (n == 0) throw std::domain_error("MM over an empty grid");

  RelaxedObjective f(table, power_w * power_w / noise.power());
  std::vector<double> weights;
  double lambda = opt.lambda0;

  // Uniform start plus random restarts, compared on the l_q objective.
  InnerState best;
  double best_value = kNegInf;
  std::mt19937_64 rng(opt.seed);
  std::exponential_distribution<double> expo(1.0);
  for (int r = 0; r <= opt.restarts; ++r) {
    InnerState st;
    st.d.assign(n, 1.0 / static_cast<double>(n));
    if (r > 0) {
      double total = 0.0;
      for (double& x : st.d) total += (x = expo(rng));
      for (double& x : st.d) x /= total;
    }
    update_weights(st.d, opt, weights);
    inner_solve(f, weights, lambda, opt.max_inner, st);
    const double value = lq_objective(f, st.d, lambda, opt);
    if (r == 0 || value > best_value) {
      best_value = value;
      best = std::move(st);
    }
  }

  MmResult result;
  result.iterations = 1;
  result.converged = *std::max_element(best.d.begin(), best.d.end()) >= opt.concentration;
  while (!result.converged && result.iterations < opt.max_outer) {
    lambda *= opt.lambda_growth;
    update_weights(best.d, opt, weights);
    inner_solve(f, weights, lambda, opt.max_inner, best);
    ++result.iterations;
    result.converged = *std::max_element(best.d.begin(), best.d.end()) >= opt.concentration;
  }

  result.selection.weights = std::move(best.d);
  const std::size_t pick = result.selection.argmax();
  result.rounded = evaluate_cell(table, table.active_flat_index(pick), power_w, noise);
  result.solution = opt.polish ? polish_cell(table, result.rounded, power_w, noise) : result.rounded;
  return result;
}

// ---------------------------------------------------------------------------
// Baselines

SteeringSolution baseline_no_steering(std::span<const ReceiverParams> users, const Vec3& beam_position,
                                      double gamma_def, double power_w, const NoiseModel& noise) {
  SteeringSolution sol;
  sol.angles = {270.0, 0.0};
  sol.gamma = gamma_def;
  const std::size_t k_users = users.size();
  sol.tau.assign(k_users, k_users ? 1.0 / static_cast<double>(k_users) : 0.0);
  sol.per_user_rate_bps.resize(k_users);
  BeamState beam{beam_position, sol.angles, gamma_def, power_w};
  sol.objective = 0.0;
  for (std::size_t k = 0; k < k_users; ++k) {
    sol.per_user_rate_bps[k] = link_rate(los_gain(beam, users[k]), power_w, noise);
    const double r = sol.tau[k] * sol.per_user_rate_bps[k];
    if (r > 0.0 && sol.feasible) {
      sol.objective += std::log(r);
    } else {
      sol.feasible = false;
      sol.objective = kNegInf;
    }
  }
  return sol;
}

double GenieResult::sum_rate_bps() const {
  double s = 0.0;
  for (std::size_t k = 0; k < tau.size(); ++k) s += tau[k] * per_user_rate_bps[k];
  return s;
}

GenieResult baseline_genie_fast(std::span<const ReceiverParams> users, const Vec3& beam_position,
                                double gamma_max, double power_w, const NoiseModel& noise) {
  GenieResult out;
  const std::size_t k_users = users.size();
  out.tau.assign(k_users, k_users ? 1.0 / static_cast<double>(k_users) : 0.0);
  out.per_user_rate_bps.resize(k_users);
  for (std::size_t k = 0; k < k_users; ++k) {
    const Vec3 v = users[k].position - beam_position;
    const double d = v.norm();
    if (!(d > 0.0)) throw std::domain_error("user coincides with the transmitter");
    const double cos_theta = -v.dot(users[k].orientation) / d;
    const double h = cos_theta > 0.0
                         ? lambertian_gain(gamma_max, 1.0,
                                           users[k].area_m2 * users[k].responsivity * cos_theta / (d * d))
                         : 0.0;
    out.per_user_rate_bps[k] = link_rate(h, power_w, noise);
  }
  return out;
}

SteeringSolver enumeration_solver() {
  return [](const GainTable& table, double power_w, const NoiseModel& noise) {
    return solve_enumeration(table, power_w, noise);
  };
}

SteeringSolver mm_solver(MmOptions options) {
  return [options](const GainTable& table, double power_w, const NoiseModel& noise) {
    return solve_mm(table, power_w, noise, options).solution;
  };
}

}  // namespace vlcsteer
