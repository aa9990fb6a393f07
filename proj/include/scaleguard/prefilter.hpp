// Kernel-style ingress pre-filter: blocklist map, per-source token buckets,
// per-tick volumetric threshold, and a feedback-driven mitigation engine
// that blocklists sources whose served error count exceeds a threshold.
//
// Dropped arrivals never produce metrics downstream; callers get counts
// only. Volumetric arrivals never pass this stage while it is enabled.
#pragma once

#include <cstdint>
#include <deque>
#include <unordered_map>
#include <vector>

#include "scaleguard/types.hpp"

namespace scaleguard {

struct PrefilterConfig {
  double bucket_rate = 20.0;   // sustained tokens per second per source
  double bucket_burst = 40.0;  // bucket depth
  double volumetric_threshold = 200.0;  // volumetric pkt/s per source per tick
  double blocklist_ttl_s = 60.0;
  // Mitigation feedback: blocklist a source once its served 4xx/5xx count
  // within feedback_window_s strictly exceeds error_threshold.
  std::uint32_t error_threshold = 30;
  double feedback_window_s = 10.0;

  void validate() const;
  bool operator==(const PrefilterConfig&) const = default;
};

struct PrefilterStats {
  std::uint64_t offered = 0;
  std::uint64_t passed = 0;
  std::uint64_t dropped = 0;
  std::uint64_t dropped_blocklist = 0;
  std::uint64_t dropped_bucket = 0;
  std::uint64_t dropped_volumetric = 0;
  std::uint64_t blocklist_inserts = 0;

  bool operator==(const PrefilterStats&) const = default;
};

class Prefilter {
 public:
  struct Result {
    std::vector<Arrival> passed;
    std::uint64_t dropped = 0;  // |passed| + dropped == |offered| per call
  };

  Prefilter(const PrefilterConfig& cfg, double tick_len);

  // Filters one tick's arrivals in order. An arrival from a blocklisted
  // source is dropped and re-arms that source's expiry (a source is
  // readmitted only after a full quiet TTL).
  Result pass(Tick now, const std::vector<Arrival>& batch);

  // Feeds one tick's served records back into the mitigation engine.
  // Only http_4xx_5xx outcomes count as offenses. Takes effect on the
  // next pass() call, closing the telemetry -> map-update loop.
  void mitigation_update(Tick now, const std::vector<FlowRecord>& observations);

  // Inserts or extends a blocklist entry; idempotent, never duplicates.
  void blocklist(SourceId source, Tick now);
  bool blocklisted(SourceId source, Tick now) const;
  std::size_t blocklist_size(Tick now) const;

  const PrefilterStats& stats() const { return stats_; }

 private:
  struct Bucket {
    double tokens;
    Tick last_refill;
  };

  PrefilterConfig cfg_;
  double tick_len_;
  Tick ttl_ticks_;
  Tick feedback_ticks_;
  PrefilterStats stats_;
  std::unordered_map<SourceId, Tick> blocklist_expiry_;  // first tick readmitted
  std::unordered_map<SourceId, Bucket> buckets_;
  // Per-source served-error history: (tick, count), pruned to the window.
  std::unordered_map<SourceId, std::deque<std::pair<Tick, std::uint32_t>>> errors_;
};

}  // namespace scaleguard
