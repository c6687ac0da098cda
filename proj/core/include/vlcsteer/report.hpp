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
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vlcsteer {

/// One user's delivered rate (time share times link rate) under one scheme.
struct RateRecord {
  std::string experiment;
  std::string scheme;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t k = 0;
  std::size_t n = 0;
  std::size_t user_id = 0;
  std::size_t beam_id = 0;
  double rate_bps = 0.0;
  double sum_rate_bps = 0.0;  // over all users of the trial and scheme
  double objective = 0.0;     // sum of log rates of the trial and scheme

  friend bool operator==(const RateRecord&, const RateRecord&) = default;
};

struct BeamRecord {
  std::string scheme;
  std::size_t trial = 0;
  std::size_t k = 0;
  std::size_t n = 0;
  std::size_t beam_id = 0;
  double alpha_deg = 0.0;
  double beta_deg = 0.0;
  double gamma = 0.0;
  double power_w = 0.0;

  friend bool operator==(const BeamRecord&, const BeamRecord&) = default;
};

struct Aggregate {
  std::string scheme;
  std::size_t k = 0;
  std::size_t n = 0;
  std::size_t trials = 0;
  double mean_sum_rate_bps = 0.0;
  double mean_objective = 0.0;
  std::vector<std::pair<std::string, double>> extras;

  friend bool operator==(const Aggregate&, const Aggregate&) = default;
};

struct RateReport {
  std::string experiment;
  std::vector<RateRecord> records;
  std::vector<BeamRecord> beams;
  std::vector<Aggregate> aggregates;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::size_t excluded_trials = 0;
  std::vector<std::string> failures;

  friend bool operator==(const RateReport&, const RateReport&) = default;
};

/// Mean per-trial sum rate and objective for every (scheme, K, N), in order
/// of first appearance.
std::vector<Aggregate> aggregate_records(const std::vector<RateRecord>& records);

/// Shortest round-trip decimal form.
std::string format_number(double value);

enum class ReportFormat { kCsv, kJson };

std::string report_csv(const RateReport& report);
std::string report_json(const RateReport& report);
RateReport report_from_json(std::string_view text);

/// Throws std::runtime_error naming the path on I/O failure.
void emit_report(const RateReport& report, ReportFormat format, const std::filesystem::path& path);

}  // namespace vlcsteer
