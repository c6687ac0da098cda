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

#include "vlcsteer/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace vlcsteer {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out = "invalid scenario: ";
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "; " : "") + parts[i];
  return out;
}

json to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

// Reads a key into `out` when present; type problems are appended to `problems`.
class Reader {
 public:
  Reader(const json& doc, std::vector<std::string>& problems) : doc_(doc), problems_(problems) {}

  void number(const char* key, double& out) {
    if (!doc_.contains(key)) return;
    const json& v = doc_.at(key);
    if (!v.is_number()) {
      problems_.push_back(std::string(key) + ": expected a number");
      return;
    }
    out = v.get<double>();
  }

  void count(const char* key, std::size_t& out) {
    if (!doc_.contains(key)) return;
    const json& v = doc_.at(key);
    if (!v.is_number_unsigned()) {
      problems_.push_back(std::string(key) + ": expected a non-negative integer");
      return;
    }
    out = v.get<std::size_t>();
  }

  void seed(const char* key, std::uint64_t& out) {
    if (!doc_.contains(key)) return;
    const json& v = doc_.at(key);
    if (!v.is_number_unsigned()) {
      problems_.push_back(std::string(key) + ": expected a non-negative integer");
      return;
    }
    out = v.get<std::uint64_t>();
  }

  void vec3(const char* key, Vec3& out) {
    if (!doc_.contains(key)) return;
    if (!parse_vec3(doc_.at(key), out)) problems_.push_back(std::string(key) + ": expected [x, y, z]");
  }

  void vec3_list(const char* key, std::vector<Vec3>& out) {
    if (!doc_.contains(key)) return;
    const json& v = doc_.at(key);
    if (!v.is_array()) {
      problems_.push_back(std::string(key) + ": expected a list of [x, y, z]");
      return;
    }
    out.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      Vec3 p;
      if (!parse_vec3(v[i], p)) {
        problems_.push_back(std::string(key) + "[" + std::to_string(i) + "]: expected [x, y, z]");
        continue;
      }
      out.push_back(p);
    }
  }

 private:
  static bool parse_vec3(const json& v, Vec3& out) {
    if (!v.is_array() || v.size() != 3) return false;
    for (const auto& c : v)
      if (!c.is_number()) return false;
    out = {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    return true;
  }

  const json& doc_;
  std::vector<std::string>& problems_;
};

constexpr const char* kKeys[] = {
    "room", "ap_position", "n_beams", "user_height_m", "alpha_min_deg", "alpha_max_deg",
    "gamma_min", "gamma_max", "gamma_def", "delta_deg", "receiver_area_cm2", "responsivity_a_per_w",
    "n0_a2_per_hz", "bandwidth_hz", "total_power_w", "xi_star", "seed", "users"};

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

ValidationError::ValidationError(std::vector<std::string> problems)
    : std::invalid_argument(join(problems)), problems_(std::move(problems)) {}

NoiseModel Scenario::noise() const { return {n0_a2_per_hz, bandwidth_hz}; }

ReceiverParams Scenario::receiver_at(const Vec3& position) const {
  ReceiverParams rx;
  rx.area_m2 = receiver_area_cm2 * 1e-4;
  rx.responsivity = responsivity_a_per_w;
  rx.orientation = {0.0, 0.0, 1.0};
  rx.position = position;
  return rx;
}

std::vector<ReceiverParams> Scenario::receivers(std::span<const Vec3> positions) const {
  std::vector<ReceiverParams> out;
  out.reserve(positions.size());
  for (const Vec3& p : positions) out.push_back(receiver_at(p));
  return out;
}

GridLimits Scenario::grid_limits(bool focus) const {
  GridLimits limits;
  limits.alpha_min_deg = alpha_min_deg;
  limits.alpha_max_deg = alpha_max_deg;
  limits.delta_deg = delta_deg;
  if (focus) {
    for (double g = gamma_min; g <= gamma_max + 1e-9; g += 1.0) limits.gammas.push_back(g);
  } else {
    limits.gammas = {gamma_def};
  }
  return limits;
}

void validate(const Scenario& s) {
  std::vector<std::string> p;
  if (!finite_positive(s.room.x) || !finite_positive(s.room.y) || !finite_positive(s.room.z))
    p.push_back("room: dimensions must be positive");
  if (!(s.ap_position.x >= 0.0 && s.ap_position.x <= s.room.x && s.ap_position.y >= 0.0 &&
        s.ap_position.y <= s.room.y && s.ap_position.z > 0.0 && s.ap_position.z <= s.room.z))
    p.push_back("ap_position: must lie inside the room");
  if (s.n_beams == 0) p.push_back("n_beams: must be at least 1");
  if (!(s.user_height_m >= 0.0 && s.user_height_m < s.ap_position.z))
    p.push_back("user_height_m: must lie between the floor and the transmitter");
  if (!(s.alpha_min_deg >= 180.0 && s.alpha_min_deg <= s.alpha_max_deg && s.alpha_max_deg <= 360.0))
    p.push_back("alpha_min_deg/alpha_max_deg: need 180 <= min <= max <= 360");
  if (!(s.gamma_min >= 0.0 && s.gamma_min == std::floor(s.gamma_min)))
    p.push_back("gamma_min: must be a non-negative integer");
  if (!(s.gamma_max >= s.gamma_min && s.gamma_max == std::floor(s.gamma_max) && s.gamma_max <= 1000.0))
    p.push_back("gamma_max: must be an integer no smaller than gamma_min");
  if (!(s.gamma_def >= s.gamma_min && s.gamma_def <= s.gamma_max))
    p.push_back("gamma_def: must lie in [gamma_min, gamma_max]");
  if (!(finite_positive(s.delta_deg) && s.delta_deg <= 90.0)) p.push_back("delta_deg: must lie in (0, 90]");
  if (!finite_positive(s.receiver_area_cm2)) p.push_back("receiver_area_cm2: must be positive");
  if (!finite_positive(s.responsivity_a_per_w)) p.push_back("responsivity_a_per_w: must be positive");
  if (!finite_positive(s.n0_a2_per_hz)) p.push_back("n0_a2_per_hz: must be positive");
  if (!finite_positive(s.bandwidth_hz)) p.push_back("bandwidth_hz: must be positive");
  if (!finite_positive(s.total_power_w)) p.push_back("total_power_w: must be positive");
  if (!(std::isfinite(s.xi_star) && s.xi_star >= 0.0)) p.push_back("xi_star: must be non-negative");
  for (std::size_t i = 0; i < s.users.size(); ++i) {
    const Vec3& u = s.users[i];
    if (!(u.x >= 0.0 && u.x <= s.room.x && u.y >= 0.0 && u.y <= s.room.y && u.z >= 0.0 && u.z < s.ap_position.z))
      p.push_back("users[" + std::to_string(i) + "]: must lie in the room below the transmitter");
  }
  if (!p.empty()) throw ValidationError(std::move(p));
}

Scenario parse_scenario(std::string_view text) {
  json doc = json::object();
  try {
    if (text.find_first_not_of(" \t\r\n") != std::string_view::npos) doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ValidationError({std::string("document: ") + e.what()});
  }
  if (doc.is_null()) doc = json::object();
  if (!doc.is_object()) throw ValidationError({"document: expected a JSON object"});

  std::vector<std::string> problems;
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys))
      problems.push_back(key + ": unknown key");
  }

  Scenario s;
  Reader r(doc, problems);
  r.vec3("room", s.room);
  r.vec3("ap_position", s.ap_position);
  r.count("n_beams", s.n_beams);
  r.number("user_height_m", s.user_height_m);
  r.number("alpha_min_deg", s.alpha_min_deg);
  r.number("alpha_max_deg", s.alpha_max_deg);
  r.number("gamma_min", s.gamma_min);
  r.number("gamma_max", s.gamma_max);
  r.number("gamma_def", s.gamma_def);
  r.number("delta_deg", s.delta_deg);
  r.number("receiver_area_cm2", s.receiver_area_cm2);
  r.number("responsivity_a_per_w", s.responsivity_a_per_w);
  r.number("n0_a2_per_hz", s.n0_a2_per_hz);
  r.number("bandwidth_hz", s.bandwidth_hz);
  r.number("total_power_w", s.total_power_w);
  r.number("xi_star", s.xi_star);
  r.seed("seed", s.seed);
  r.vec3_list("users", s.users);
  if (!problems.empty()) throw ValidationError(std::move(problems));

  validate(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError({"scenario: cannot open " + path.string()});
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

std::string emit_scenario(const Scenario& s) {
  json users = json::array();
  for (const Vec3& u : s.users) users.push_back(to_json(u));
  const json doc = {
      {"room", to_json(s.room)},
      {"ap_position", to_json(s.ap_position)},
      {"n_beams", s.n_beams},
      {"user_height_m", s.user_height_m},
      {"alpha_min_deg", s.alpha_min_deg},
      {"alpha_max_deg", s.alpha_max_deg},
      {"gamma_min", s.gamma_min},
      {"gamma_max", s.gamma_max},
      {"gamma_def", s.gamma_def},
      {"delta_deg", s.delta_deg},
      {"receiver_area_cm2", s.receiver_area_cm2},
      {"responsivity_a_per_w", s.responsivity_a_per_w},
      {"n0_a2_per_hz", s.n0_a2_per_hz},
      {"bandwidth_hz", s.bandwidth_hz},
      {"total_power_w", s.total_power_w},
      {"xi_star", s.xi_star},
      {"seed", s.seed},
      {"users", users},
  };
  return doc.dump(2) + "\n";
}

std::vector<Vec3> sample_users(const Scenario& s, std::size_t k, std::uint64_t seed) {
  if (k == 0) throw std::domain_error("at least one user is required");
  std::mt19937_64 rng(seed);
  // 53 random bits per coordinate, identical across standard libraries.
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<Vec3> out(k);
  for (Vec3& u : out) {
    u.x = unit() * s.room.x;
    u.y = unit() * s.room.y;
    u.z = s.user_height_m;
  }
  return out;
}

}  // namespace vlcsteer
