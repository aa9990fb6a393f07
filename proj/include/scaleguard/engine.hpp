// Simulation engine: wires the per-tick pipeline
//   traffic -> prefilter -> l7 policy -> cluster -> telemetry -> scaler
// with the mitigation feedback arc from served errors back to the
// prefilter, and provides the canned scenario configurations.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scaleguard/cluster.hpp"
#include "scaleguard/l7policy.hpp"
#include "scaleguard/prefilter.hpp"
#include "scaleguard/scaling.hpp"
#include "scaleguard/telemetry.hpp"
#include "scaleguard/traffic.hpp"
#include "scaleguard/types.hpp"

namespace scaleguard {

struct SimConfig {
  double tick_len = 1.0;
  double duration_s = 0.0;
  std::uint64_t seed = 1;
  double control_interval_s = 5.0;
  bool gate_enabled = true;       // legitimacy veto in the fusion rule
  bool prefilter_enabled = true;  // ingress tier on/off

  TrafficProfile profile;
  // Optional pre-run history the forecaster is warmed with: the per-tick
  // offered counts of this profile, generated deterministically and
  // concatenated before the live admitted series.
  std::optional<TrafficProfile> warmup;

  PrefilterConfig prefilter;
  L7Config l7;
  TelemetryConfig telemetry;
  ScalerConfig scaler;
  PodSpec pod;
  // Pods pre-provisioned as reachable at t=0; 0 means min_replicas.
  int initial_replicas = 0;

  std::string scenario;  // labels carried into the report
  std::string variant;

  void validate() const;
  bool operator==(const SimConfig&) const = default;
};

struct TickRow {
  Tick tick = 0;
  std::uint64_t offered = 0;
  std::uint64_t dropped_prefilter = 0;
  std::uint64_t dropped_policy = 0;
  std::uint64_t admitted = 0;
  std::uint64_t served_2xx = 0;
  std::uint64_t served_4xx_5xx = 0;
  std::uint64_t timed_out = 0;
  std::uint64_t queue_depth = 0;
  int pods_starting = 0;
  int pods_ready = 0;
  int pods_reachable = 0;
  int desired = 0;  // last applied decision
  double reachable_capacity_rps = 0.0;
  double observed_rps = 0.0;
  double legitimacy = 1.0;

  bool operator==(const TickRow&) const = default;
};

struct RunTrace {
  SimConfig config;
  std::vector<TickRow> ticks;
  std::vector<ScalerDecision> decisions;
  PrefilterStats prefilter_totals;
  std::uint64_t offered_by_kind[3] = {0, 0, 0};  // indexed by TrafficKind
  std::uint64_t telemetry_admitted = 0;  // what the metrics tier ingested
};

// Runs the full simulation; deterministic for a given config (seed
// included). Runs hold no shared state, so callers may execute several
// concurrently.
RunTrace run(const SimConfig& cfg);

// Canned scenarios. Variants:
//   flash_crowd: "reactive" | "predictive"
//   mixed_attack: "unprotected" | "protected"
SimConfig scenario_flash_crowd(const std::string& variant);
SimConfig scenario_mixed_attack(const std::string& variant);
SimConfig scenario_config(const std::string& name, const std::string& variant);

}  // namespace scaleguard
