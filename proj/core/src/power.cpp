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

#include "vlcsteer/power.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace vlcsteer {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check(const PowerProblem& pb) {
  if (pb.beams() == 0) throw std::domain_error("power problem without beams");
  if (pb.beam_of_user.size() != pb.users() || pb.tau.size() != pb.users())
    throw std::invalid_argument("power problem: mismatched sizes");
  if (!(pb.p_max > 0.0)) throw std::domain_error("p_max must be positive");
}

// Interference plus noise of user k under powers p.
double kappa_of(const PowerProblem& pb, std::size_t k, std::span<const double> p) {
  const std::size_t n = pb.beam_of_user[k];
  double s = pb.noise.power();
  for (std::size_t m = 0; m < pb.beams(); ++m) {
    if (m == n) continue;
    const double a = pb.gains(k, m) * p[m];
    s += a * a;
  }
  return s;
}

// Surrogate objective in p with auxiliaries at their binding values.
class Surrogate {
 public:
  Surrogate(const PowerProblem& pb, std::span<const double> ratios) : pb_(pb), r_(ratios.begin(), ratios.end()) {
    bc_ = pb.noise.bandwidth_hz / std::numbers::ln2;
  }

  double lin(std::size_t k, std::span<const double> p) const {
    const std::size_t n = pb_.beam_of_user[k];
    const double h2 = pb_.gains(k, n) * pb_.gains(k, n);
    return h2 * (2.0 * r_[k] * p[n] - r_[k] * r_[k] * kappa_of(pb_, k, p));
  }

  // Value; -inf outside the domain.
  double value(std::span<const double> p) const {
    double f = 0.0;
    for (std::size_t k = 0; k < pb_.users(); ++k) {
      const double l = lin(k, p);
      if (!(l > -1.0)) return kNegInf;
      if (pb_.objective == PowerObjective::kSumRate) {
        f += pb_.tau[k] * std::log1p(l) / std::numbers::ln2;
      } else {
        const double u = bc_ * std::log1p(l) + pb_.rate_floor_bps;
        if (!(u > 0.0)) return kNegInf;
        f += std::log(pb_.tau[k] * u);
      }
    }
    return f;
  }

  void derivatives(std::span<const double> p, Eigen::VectorXd& grad, Eigen::MatrixXd& hess) const {
    const std::size_t nb = pb_.beams();
    grad.setZero(static_cast<Eigen::Index>(nb));
    hess.setZero(static_cast<Eigen::Index>(nb), static_cast<Eigen::Index>(nb));
    Eigen::VectorXd dl(static_cast<Eigen::Index>(nb));
    for (std::size_t k = 0; k < pb_.users(); ++k) {
      const std::size_t n = pb_.beam_of_user[k];
      const double h2 = pb_.gains(k, n) * pb_.gains(k, n);
      const double r = r_[k];
      const double l = lin(k, p);
      double f1 = 0.0, f2 = 0.0;
      if (pb_.objective == PowerObjective::kSumRate) {
        f1 = pb_.tau[k] / (std::numbers::ln2 * (1.0 + l));
        f2 = -f1 / (1.0 + l);
      } else {
        const double u = bc_ * std::log1p(l) + pb_.rate_floor_bps;
        f1 = bc_ / ((1.0 + l) * u);
        f2 = -f1 / (1.0 + l) - f1 * f1;
      }
      for (std::size_t m = 0; m < nb; ++m) {
        const auto im = static_cast<Eigen::Index>(m);
        if (m == n) {
          dl[im] = 2.0 * h2 * r;
        } else {
          const double hm2 = pb_.gains(k, m) * pb_.gains(k, m);
          dl[im] = -2.0 * h2 * r * r * hm2 * p[m];
          hess(im, im) += f1 * (-2.0 * h2 * r * r * hm2);
        }
      }
      grad += f1 * dl;
      hess += f2 * dl * dl.transpose();
    }
  }

 private:
  const PowerProblem& pb_;
  std::vector<double> r_;
  double bc_ = 0.0;
};

bool strictly_inside(std::span<const double> p, double p_max) {
  double s = 0.0;
  for (double x : p) {
    if (!(x > 0.0)) return false;
    s += x;
  }
  return s < p_max;
}

double barrier_value(const Surrogate& f, std::span<const double> p, double p_max, double t) {
  if (!strictly_inside(p, p_max)) return kNegInf;
  const double fv = f.value(p);
  if (fv == kNegInf) return kNegInf;
  double b = std::log(p_max - std::accumulate(p.begin(), p.end(), 0.0));
  for (double x : p) b += std::log(x);
  return t * fv + b;
}

std::vector<double> ratios_at(const PowerProblem& pb, std::span<const double> a) {
  std::vector<double> r(pb.users());
  for (std::size_t k = 0; k < pb.users(); ++k) r[k] = a[pb.beam_of_user[k]] / kappa_of(pb, k, a);
  return r;
}

}  // namespace

double PowerAllocation::total() const { return std::accumulate(powers.begin(), powers.end(), 0.0); }

PowerAllocation equal_power(std::size_t beams, double p_max) {
  if (beams == 0) throw std::domain_error("equal_power without beams");
  return {std::vector<double>(beams, p_max / static_cast<double>(beams))};
}

PowerProblem make_power_problem(const MultiBeamSolution& clusters, std::span<const ReceiverParams> users,
                                double p_max, const NoiseModel& noise, PowerObjective objective) {
  PowerProblem pb;
  pb.gains = gain_matrix(users, clusters.beams);
  pb.beam_of_user = clusters.assignment.beam_of_user;
  pb.tau.resize(users.size());
  for (std::size_t k = 0; k < users.size(); ++k)
    pb.tau[k] = 1.0 / static_cast<double>(clusters.assignment.members[pb.beam_of_user[k]].size());
  pb.p_max = p_max;
  pb.noise = noise;
  pb.objective = objective;
  return pb;
}

std::vector<double> user_rates(const PowerProblem& pb, std::span<const double> powers) {
  check(pb);
  if (powers.size() != pb.beams()) throw std::invalid_argument("user_rates: wrong power vector size");
  std::vector<double> rates(pb.users());
  for (std::size_t k = 0; k < pb.users(); ++k)
    rates[k] = rate_from_sinr(sinr_multibeam(pb.gains.row(k), powers, pb.beam_of_user[k], pb.noise), pb.noise);
  return rates;
}

double true_objective(const PowerProblem& pb, std::span<const double> powers) {
  const auto rates = user_rates(pb, powers);
  double f = 0.0;
  for (std::size_t k = 0; k < rates.size(); ++k) {
    if (pb.objective == PowerObjective::kSumRate)
      f += pb.tau[k] * rates[k];
    else
      f += std::log(pb.tau[k] * (rates[k] + pb.rate_floor_bps));
  }
  return f;
}

double taylor_minorant(double p, double kappa, double a, double b) {
  const double r = a / b;
  return 2.0 * r * p - r * r * kappa;
}

InnerResult inner_convex_solve(const PowerProblem& pb, std::span<const double> ratios,
                               std::span<const double> start, const InnerOptions& opt) {
  check(pb);
  if (ratios.size() != pb.users() || start.size() != pb.beams())
    throw std::invalid_argument("inner_convex_solve: mismatched sizes");

  const Surrogate f(pb, ratios);
  const std::size_t nb = pb.beams();
  const auto nbi = static_cast<Eigen::Index>(nb);
  InnerResult out;
  std::vector<double> p(start.begin(), start.end());
  if (!strictly_inside(p, pb.p_max) || f.value(p) == kNegInf) {
    out.infeasible = true;
    out.allocation.powers = std::move(p);
    return out;
  }

  Eigen::VectorXd grad, g(nbi), step(nbi);
  Eigen::MatrixXd hess, h(nbi, nbi);
  std::vector<double> trial(nb);
  const double m_constraints = static_cast<double>(nb + 1);
  double t = 1.0;

  while (true) {
    for (int it = 0; it < opt.max_newton; ++it) {
      f.derivatives(p, grad, hess);
      const double slack = pb.p_max - std::accumulate(p.begin(), p.end(), 0.0);
      g = t * grad;
      h = t * hess;
      for (std::size_t n = 0; n < nb; ++n) {
        const auto i = static_cast<Eigen::Index>(n);
        g[i] += 1.0 / p[n] - 1.0 / slack;
        h(i, i) -= 1.0 / (p[n] * p[n]);
      }
      h.array() -= 1.0 / (slack * slack);

      step = (-h).ldlt().solve(g);
      const double decrement = g.dot(step);
      ++out.newton_steps;
      if (!(decrement > 2e-14)) break;

      const double phi = barrier_value(f, p, pb.p_max, t);
      double alpha = 1.0;
      bool moved = false;
      for (int bt = 0; bt < 80; ++bt) {
        for (std::size_t n = 0; n < nb; ++n) trial[n] = p[n] + alpha * step[static_cast<Eigen::Index>(n)];
        const double phit = barrier_value(f, trial, pb.p_max, t);
        if (phit != kNegInf && phit >= phi + 0.25 * alpha * decrement) {
          p.swap(trial);
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) break;
    }
    const double fv = f.value(p);
    if (m_constraints / t <= opt.gap_tolerance * std::max(1.0, std::abs(fv))) break;
    t *= 10.0;
  }

  out.surrogate = f.value(p);
  out.bounds.eta.resize(pb.users());
  out.bounds.zeta.resize(pb.users());
  out.bounds.kappa.resize(pb.users());
  for (std::size_t k = 0; k < pb.users(); ++k) {
    out.bounds.kappa[k] = kappa_of(pb, k, p);
    out.bounds.zeta[k] = std::max(0.0, f.lin(k, p));
    out.bounds.eta[k] = rate_from_sinr(out.bounds.zeta[k], pb.noise);
  }
  out.allocation.powers = std::move(p);
  return out;
}

namespace {

ScaResult sca_from(const PowerProblem& pb, std::vector<double> a, const ScaOptions& opt) {
  const std::size_t nb = pb.beams();
  ScaResult out;
  out.state.ratios = ratios_at(pb, a);
  out.state.objective_trace.push_back(true_objective(pb, a));

  for (int it = 1; it <= opt.max_iters; ++it) {
    out.state.iteration = it;
    const Surrogate f(pb, out.state.ratios);
    // Strictly interior start close to the expansion point.
    std::vector<double> start(nb);
    bool ok = false;
    for (double e : {1e-3, 1e-5, 1e-7, 1e-9}) {
      for (std::size_t n = 0; n < nb; ++n)
        start[n] = (1.0 - e) * a[n] + e * pb.p_max / static_cast<double>(nb + 1);
      if (strictly_inside(start, pb.p_max) && f.value(start) != kNegInf) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      out.state.infeasible = true;
      break;
    }

    InnerResult inner = inner_convex_solve(pb, out.state.ratios, start, opt.inner);
    if (inner.infeasible) {
      out.state.infeasible = true;
      break;
    }
    const double value = true_objective(pb, inner.allocation.powers);
    if (value < out.state.objective_trace.back()) {
      out.state.converged = true;
      break;
    }
    a = inner.allocation.powers;
    out.bounds = std::move(inner.bounds);
    out.state.objective_trace.push_back(value);

    std::vector<double> next = ratios_at(pb, a);
    const double scale = *std::max_element(next.begin(), next.end());
    double change = 0.0;
    for (std::size_t k = 0; k < next.size(); ++k)
      change = std::max(change, std::abs(next[k] - out.state.ratios[k]) /
                                    std::max(std::abs(out.state.ratios[k]), 1e-6 * scale));
    out.state.ratios = std::move(next);
    if (change <= opt.ratio_tolerance) {
      out.state.converged = true;
      break;
    }
  }
  out.allocation.powers = std::move(a);
  return out;
}

}  // namespace

std::vector<std::vector<double>> sca_starting_points(std::size_t beams, double p_max, bool multi_start) {
  std::vector<std::vector<double>> starts{equal_power(beams, p_max).powers};
  if (!multi_start || beams < 2) return starts;
  const double others = static_cast<double>(beams - 1);
  for (std::size_t n = 0; n < beams; ++n) {
    std::vector<double> heavy(beams, 0.3 * p_max / others);
    heavy[n] = 0.7 * p_max;
    starts.push_back(std::move(heavy));
  }
  for (std::size_t n = 0; n < beams; ++n) {
    std::vector<double> light(beams, 0.98 * p_max / others);
    light[n] = 0.02 * p_max;
    starts.push_back(std::move(light));
  }
  return starts;
}

ScaResult sca_power_opt(const PowerProblem& pb, const ScaOptions& opt) {
  check(pb);
  ScaResult best;
  bool have = false;
  for (auto& a : sca_starting_points(pb.beams(), pb.p_max, opt.multi_start)) {
    ScaResult run = sca_from(pb, std::move(a), opt);
    if (!have || run.state.objective_trace.back() > best.state.objective_trace.back()) {
      best = std::move(run);
      have = true;
    }
  }
  return best;
}

PowerAllocation brute_force_power_oracle(const PowerProblem& pb, double step) {
  check(pb);
  const std::size_t nb = pb.beams();
  if (nb > 3) throw std::domain_error("brute-force power oracle is limited to three beams");
  if (!(step > 0.0)) throw std::domain_error("oracle step must be positive");
  const auto levels = static_cast<long>(std::floor(pb.p_max / step + 1e-9));

  std::vector<long> idx(nb, 0);
  std::vector<double> p(nb, 0.0), best_p(nb, 0.0);
  double best = kNegInf;
  bool any = false;
  while (true) {
    for (std::size_t n = 0; n < nb; ++n) p[n] = static_cast<double>(idx[n]) * step;
    const double v = true_objective(pb, p);
    if (!any || v > best) {
      best = v;
      best_p = p;
      any = true;
    }
    // Next tuple with sum(idx) <= levels, last index fastest.
    std::size_t pos = nb;
    while (pos > 0) {
      --pos;
      ++idx[pos];
      if (std::accumulate(idx.begin(), idx.end(), 0L) <= levels) break;
      idx[pos] = 0;
      if (pos == 0) return {best_p};
    }
  }
}

}  // namespace vlcsteer
