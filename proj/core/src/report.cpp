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

#include "vlcsteer/report.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

namespace vlcsteer {

using nlohmann::ordered_json;

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return {buf.data(), res.ptr};
}

namespace {

// JSON has no infinities; they travel as strings.
ordered_json number_json(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

double number_from(const ordered_json& v) {
  if (v.is_number()) return v.get<double>();
  const std::string s = v.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::vector<Aggregate> aggregate_records(const std::vector<RateRecord>& records) {
  using Key = std::tuple<std::string, std::size_t, std::size_t>;
  std::vector<Key> order;
  std::map<Key, std::map<std::size_t, std::pair<double, double>>> per_trial;
  for (const RateRecord& r : records) {
    const Key key{r.scheme, r.k, r.n};
    auto [it, inserted] = per_trial.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second[r.trial] = {r.sum_rate_bps, r.objective};
  }
  std::vector<Aggregate> out;
  for (const Key& key : order) {
    const auto& trials = per_trial.at(key);
    Aggregate a;
    std::tie(a.scheme, a.k, a.n) = key;
    a.trials = trials.size();
    for (const auto& [trial, v] : trials) {
      a.mean_sum_rate_bps += v.first;
      a.mean_objective += v.second;
    }
    a.mean_sum_rate_bps /= static_cast<double>(a.trials);
    a.mean_objective /= static_cast<double>(a.trials);
    out.push_back(std::move(a));
  }
  return out;
}

std::string report_csv(const RateReport& report) {
  std::string out = "experiment,scheme,trial,seed,K,N,user_id,beam_id,rate_bps,sum_rate_bps,objective\n";
  for (const RateRecord& r : report.records) {
    out += r.experiment;
    out += ',' + r.scheme;
    out += ',' + std::to_string(r.trial);
    out += ',' + std::to_string(r.seed);
    out += ',' + std::to_string(r.k);
    out += ',' + std::to_string(r.n);
    out += ',' + std::to_string(r.user_id);
    out += ',' + std::to_string(r.beam_id);
    out += ',' + format_number(r.rate_bps);
    out += ',' + format_number(r.sum_rate_bps);
    out += ',' + format_number(r.objective);
    out += '\n';
  }
  return out;
}

std::string report_json(const RateReport& report) {
  ordered_json doc;
  doc["experiment"] = report.experiment;
  ordered_json meta = ordered_json::object();
  for (const auto& [k, v] : report.metadata) meta[k] = v;
  doc["metadata"] = meta;
  doc["excluded_trials"] = report.excluded_trials;
  doc["failures"] = report.failures;

  ordered_json aggs = ordered_json::array();
  for (const Aggregate& a : report.aggregates) {
    ordered_json j;
    j["scheme"] = a.scheme;
    j["K"] = a.k;
    j["N"] = a.n;
    j["trials"] = a.trials;
    j["mean_sum_rate_bps"] = number_json(a.mean_sum_rate_bps);
    j["mean_objective"] = number_json(a.mean_objective);
    ordered_json extras = ordered_json::object();
    for (const auto& [k, v] : a.extras) extras[k] = number_json(v);
    j["extras"] = extras;
    aggs.push_back(std::move(j));
  }
  doc["aggregates"] = aggs;

  ordered_json beams = ordered_json::array();
  for (const BeamRecord& b : report.beams) {
    beams.push_back({{"scheme", b.scheme},
                     {"trial", b.trial},
                     {"K", b.k},
                     {"N", b.n},
                     {"beam_id", b.beam_id},
                     {"alpha_deg", b.alpha_deg},
                     {"beta_deg", b.beta_deg},
                     {"gamma", b.gamma},
                     {"power_w", b.power_w}});
  }
  doc["beams"] = beams;

  ordered_json recs = ordered_json::array();
  for (const RateRecord& r : report.records) {
    recs.push_back({{"experiment", r.experiment},
                    {"scheme", r.scheme},
                    {"trial", r.trial},
                    {"seed", r.seed},
                    {"K", r.k},
                    {"N", r.n},
                    {"user_id", r.user_id},
                    {"beam_id", r.beam_id},
                    {"rate_bps", number_json(r.rate_bps)},
                    {"sum_rate_bps", number_json(r.sum_rate_bps)},
                    {"objective", number_json(r.objective)}});
  }
  doc["records"] = recs;
  return doc.dump(2) + "\n";
}

RateReport report_from_json(std::string_view text) {
  const ordered_json doc = ordered_json::parse(text.begin(), text.end());
  RateReport report;
  report.experiment = doc.at("experiment").get<std::string>();
  for (const auto& [k, v] : doc.at("metadata").items()) report.metadata.emplace_back(k, v.get<std::string>());
  report.excluded_trials = doc.at("excluded_trials").get<std::size_t>();
  report.failures = doc.at("failures").get<std::vector<std::string>>();
  for (const auto& j : doc.at("aggregates")) {
    Aggregate a;
    a.scheme = j.at("scheme").get<std::string>();
    a.k = j.at("K").get<std::size_t>();
    a.n = j.at("N").get<std::size_t>();
    a.trials = j.at("trials").get<std::size_t>();
    a.mean_sum_rate_bps = number_from(j.at("mean_sum_rate_bps"));
    a.mean_objective = number_from(j.at("mean_objective"));
    for (const auto& [k, v] : j.at("extras").items()) a.extras.emplace_back(k, number_from(v));
    report.aggregates.push_back(std::move(a));
  }
  for (const auto& j : doc.at("beams")) {
    BeamRecord b;
    b.scheme = j.at("scheme").get<std::string>();
    b.trial = j.at("trial").get<std::size_t>();
    b.k = j.at("K").get<std::size_t>();
    b.n = j.at("N").get<std::size_t>();
    b.beam_id = j.at("beam_id").get<std::size_t>();
    b.alpha_deg = j.at("alpha_deg").get<double>();
    b.beta_deg = j.at("beta_deg").get<double>();
    b.gamma = j.at("gamma").get<double>();
    b.power_w = j.at("power_w").get<double>();
    report.beams.push_back(std::move(b));
  }
  for (const auto& j : doc.at("records")) {
    RateRecord r;
    r.experiment = j.at("experiment").get<std::string>();
    r.scheme = j.at("scheme").get<std::string>();
    r.trial = j.at("trial").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.k = j.at("K").get<std::size_t>();
    r.n = j.at("N").get<std::size_t>();
    r.user_id = j.at("user_id").get<std::size_t>();
    r.beam_id = j.at("beam_id").get<std::size_t>();
    r.rate_bps = number_from(j.at("rate_bps"));
    r.sum_rate_bps = number_from(j.at("sum_rate_bps"));
    r.objective = number_from(j.at("objective"));
    report.records.push_back(std::move(r));
  }
  return report;
}

void emit_report(const RateReport& report, ReportFormat format, const std::filesystem::path& path) {
  const std::string text = format == ReportFormat::kCsv ? report_csv(report) : report_json(report);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open report file " + path.string());
  out << text;
  if (!out) throw std::runtime_error("cannot write report file " + path.string());
}

}  // namespace vlcsteer
