#include "scaleguard/telemetry.hpp"

#include <algorithm>
#include <cmath>

namespace scaleguard {

void TelemetryConfig::validate() const {
  if (rps_window_s <= 0.0)
    throw ValidationError("rps_window_s must be positive");
  if (legitimacy_window_s <= 0.0)
    throw ValidationError("legitimacy_window_s must be positive");
}

MetricsWindow::MetricsWindow(const TelemetryConfig& cfg, double tick_len)
    : cfg_(cfg), tick_len_(tick_len) {
  cfg_.validate();
  if (tick_len <= 0.0) throw ValidationError("tick_len must be positive");
  rps_ticks_ = std::max<Tick>(1, std::llround(cfg_.rps_window_s / tick_len_));
  legit_ticks_ =
      std::max<Tick>(1, std::llround(cfg_.legitimacy_window_s / tick_len_));
}

void MetricsWindow::advance_to(Tick tick) {
  if (first_tick_ < 0) {
    first_tick_ = tick;
    rows_.push_back(Row{tick});
  } else {
    while (!rows_.empty() && rows_.back().tick < tick)
      rows_.push_back(Row{rows_.back().tick + 1});
  }
  const Tick keep_after = tick - std::max(rps_ticks_, legit_ticks_);
  while (!rows_.empty() && rows_.front().tick <= keep_after) rows_.pop_front();
}

MetricsWindow::Row& MetricsWindow::row_for(Tick tick) {
  advance_to(tick);
  // Rows are contiguous; index back from the newest.
  const auto offset = static_cast<std::size_t>(rows_.back().tick - tick);
  return rows_[rows_.size() - 1 - offset];
}

void MetricsWindow::note_admitted(Tick tick, std::uint64_t count) {
  row_for(tick).admitted += count;
  total_admitted_ += count;
}

void MetricsWindow::record(const FlowRecord& rec) {
  switch (rec.outcome) {
    case Outcome::dropped_prefilter:
      throw ContractViolation(
          "prefilter-dropped traffic must not generate metrics");
    case Outcome::http_2xx:
      ++row_for(rec.tick).c2xx;
      ++total_2xx_;
      break;
    case Outcome::http_4xx_5xx:
      ++row_for(rec.tick).c4xx5xx;
      ++total_errors_;
      break;
    case Outcome::timed_out:
      ++row_for(rec.tick).timed_out;
      ++total_timed_out_;
      break;
    case Outcome::dropped_policy:
      ++row_for(rec.tick).denied;
      ++total_denied_;
      break;
  }
}

double MetricsWindow::observed_rps(Tick tick) const {
  if (first_tick_ < 0 || tick < first_tick_) return 0.0;
  const Tick covered = std::min(rps_ticks_, tick - first_tick_ + 1);
  std::uint64_t sum = 0;
  for (const auto& row : rows_) {
    if (row.tick > tick - rps_ticks_ && row.tick <= tick) sum += row.admitted;
  }
  return static_cast<double>(sum) /
         (static_cast<double>(covered) * tick_len_);
}

LegitimacySignal MetricsWindow::legitimacy(Tick tick, double threshold) const {
  std::uint64_t ok = 0;
  std::uint64_t bad = 0;
  for (const auto& row : rows_) {
    if (row.tick > tick - legit_ticks_ && row.tick <= tick) {
      ok += row.c2xx;
      bad += row.c4xx5xx;
      if (cfg_.count_policy_denials) bad += row.denied;
    }
  }
  LegitimacySignal sig;
  sig.sample_count = ok + bad;
  sig.score = sig.sample_count == 0
                  ? 1.0
                  : static_cast<double>(ok) /
                        static_cast<double>(sig.sample_count);
  sig.legitimate = sig.score >= threshold;
  return sig;
}

}  // namespace scaleguard
