// Run metrics: aggregation from a trace, JSON/CSV serialization, and
// controlled comparison between two runs of identical traffic seed.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scaleguard/engine.hpp"

namespace scaleguard {

struct LegitimacyPoint {
  Tick tick;
  double score;
};

struct MetricsReport {
  int schema_version = 1;
  std::string scenario;
  std::string variant;
  std::uint64_t seed = 0;
  double tick_len = 1.0;
  double duration_s = 0.0;

  double avg_pods = 0.0;  // time-weighted mean reachable replicas
  int peak_pods = 0;      // max reachable replicas
  int peak_desired = 0;   // max desired across decisions
  double timeout_rate_pct = 0.0;  // timed_out / admitted * 100
  std::uint64_t offered = 0;
  std::uint64_t admitted = 0;
  std::uint64_t served_2xx = 0;
  std::uint64_t http_errors = 0;
  std::uint64_t timed_out = 0;
  std::uint64_t dropped_prefilter = 0;
  std::uint64_t dropped_policy = 0;

  // Surge start to first tick with reachable capacity >= sustained
  // legitimate load; null when capacity never gets there.
  std::optional<double> scale_lag_s;
  // As scale_lag_s but additionally requires an empty queue; null when the
  // backlog never drains.
  std::optional<double> time_to_stabilize_s;
  // dropped_prefilter / offered malicious (malformed + volumetric); null
  // when the profile carries no malicious traffic.
  std::optional<double> ingress_drop_fraction;

  std::vector<LegitimacyPoint> legitimacy_series;
};

MetricsReport compute(const RunTrace& trace);

struct CompareRow {
  std::string metric;
  std::optional<double> a;
  std::optional<double> b;
  std::optional<double> delta_pct;  // (b - a) / a * 100 when defined
};

struct Comparison {
  std::string label_a;
  std::string label_b;
  std::vector<CompareRow> rows;
};

// Refuses (ValidationError) reports whose traffic seeds differ: deltas are
// only meaningful across runs of the same workload.
Comparison compare(const MetricsReport& a, const MetricsReport& b);

std::string to_json(const MetricsReport& report);
MetricsReport report_from_json(const std::string& text);
std::string to_csv(const MetricsReport& report);
std::string to_json(const Comparison& cmp);
std::string to_text(const Comparison& cmp);

}  // namespace scaleguard
