// Sliding-window flow telemetry: admitted-rate estimation and the
// legitimacy score Sum(2xx) / Sum(2xx + 4xx/5xx).
//
// Only traffic that survived the ingress pre-filter may be recorded here;
// feeding a dropped_prefilter record is a contract violation. Timed-out
// requests never completed an HTTP exchange and are excluded from the
// legitimacy denominator. Policy denials are excluded by default and can
// be opted into the denominator via count_policy_denials.
#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "scaleguard/types.hpp"

namespace scaleguard {

struct TelemetryConfig {
  double rps_window_s = 5.0;          // admitted-rate estimation window
  double legitimacy_window_s = 60.0;  // legitimacy scoring window
  bool count_policy_denials = false;

  void validate() const;
  bool operator==(const TelemetryConfig&) const = default;
};

struct LegitimacySignal {
  double score = 1.0;       // in [0, 1]; empty window scores 1.0
  bool legitimate = true;   // score >= threshold (vacuously true when empty)
  std::uint64_t sample_count = 0;

  bool operator==(const LegitimacySignal&) const = default;
};

class MetricsWindow {
 public:
  MetricsWindow(const TelemetryConfig& cfg, double tick_len);

  // Extends the ring with zero rows up to and including `tick`.
  void advance_to(Tick tick);
  // Counts arrivals admitted past both filter tiers at tick `tick`.
  void note_admitted(Tick tick, std::uint64_t count);
  // Ingests one terminal flow record (response, timeout, policy denial)
  // at rec.tick. Throws ContractViolation on a dropped_prefilter record.
  void record(const FlowRecord& rec);

  // Admitted arrivals over the rps window divided by the covered span
  // (min(window, elapsed)); 0 before any tick is observed.
  double observed_rps(Tick tick) const;
  LegitimacySignal legitimacy(Tick tick, double threshold) const;

  // Lifetime ingestion totals, for isolation audits.
  std::uint64_t total_admitted() const { return total_admitted_; }
  std::uint64_t total_2xx() const { return total_2xx_; }
  std::uint64_t total_errors() const { return total_errors_; }
  std::uint64_t total_timed_out() const { return total_timed_out_; }
  std::uint64_t total_denied() const { return total_denied_; }

 private:
  struct Row {
    Tick tick;
    std::uint64_t admitted = 0;
    std::uint64_t c2xx = 0;
    std::uint64_t c4xx5xx = 0;
    std::uint64_t timed_out = 0;
    std::uint64_t denied = 0;
  };

  Row& row_for(Tick tick);

  TelemetryConfig cfg_;
  double tick_len_;
  Tick rps_ticks_;
  Tick legit_ticks_;
  Tick first_tick_ = -1;
  std::deque<Row> rows_;  // contiguous ticks, newest at back
  std::uint64_t total_admitted_ = 0;
  std::uint64_t total_2xx_ = 0;
  std::uint64_t total_errors_ = 0;
  std::uint64_t total_timed_out_ = 0;
  std::uint64_t total_denied_ = 0;
};

}  // namespace scaleguard
