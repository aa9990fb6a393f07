#include "scaleguard/prefilter.hpp"

#include <algorithm>
#include <cmath>

namespace scaleguard {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

}  // namespace

void PrefilterConfig::validate() const {
  require(bucket_rate > 0.0, "bucket_rate must be positive");
  require(bucket_burst > 0.0, "bucket_burst must be positive");
  require(volumetric_threshold > 0.0, "volumetric_threshold must be positive");
  require(blocklist_ttl_s >= 0.0, "blocklist_ttl_s must be non-negative");
  require(feedback_window_s > 0.0, "feedback_window_s must be positive");
}

Prefilter::Prefilter(const PrefilterConfig& cfg, double tick_len)
    : cfg_(cfg), tick_len_(tick_len) {
  cfg_.validate();
  require(tick_len > 0.0, "tick_len must be positive");
  ttl_ticks_ = std::llround(cfg_.blocklist_ttl_s / tick_len_);
  feedback_ticks_ = std::llround(cfg_.feedback_window_s / tick_len_);
}

Prefilter::Result Prefilter::pass(Tick now, const std::vector<Arrival>& batch) {
  Result res;
  res.passed.reserve(batch.size());
  stats_.offered += batch.size();
  // Volumetric packets seen per source this tick, for the flood threshold.
  std::unordered_map<SourceId, double> vol_seen;
  const double vol_limit = cfg_.volumetric_threshold * tick_len_;

  for (const auto& a : batch) {
    if (blocklisted(a.source, now)) {
      // A hit while listed re-arms the expiry: readmission requires a full
      // quiet TTL.
      auto& expiry = blocklist_expiry_[a.source];
      expiry = std::max(expiry, now + ttl_ticks_);
      ++res.dropped;
      ++stats_.dropped_blocklist;
      continue;
    }
    if (a.kind == TrafficKind::volumetric) {
      ++res.dropped;
      ++stats_.dropped_volumetric;
      if ((vol_seen[a.source] += 1.0) > vol_limit) blocklist(a.source, now);
      continue;
    }
    auto [it, fresh] = buckets_.try_emplace(
        a.source, Bucket{cfg_.bucket_burst, now});
    Bucket& bucket = it->second;
    if (!fresh && now > bucket.last_refill) {
      const double elapsed =
          static_cast<double>(now - bucket.last_refill) * tick_len_;
      bucket.tokens =
          std::min(cfg_.bucket_burst, bucket.tokens + cfg_.bucket_rate * elapsed);
      bucket.last_refill = now;
    }
    if (bucket.tokens >= 1.0) {
      bucket.tokens -= 1.0;
      res.passed.push_back(a);
      ++stats_.passed;
    } else {
      ++res.dropped;
      ++stats_.dropped_bucket;
    }
  }
  stats_.dropped += res.dropped;
  return res;
}

void Prefilter::mitigation_update(Tick now,
                                  const std::vector<FlowRecord>& observations) {
  std::unordered_map<SourceId, std::uint32_t> fresh_errors;
  for (const auto& rec : observations) {
    if (rec.outcome == Outcome::http_4xx_5xx) ++fresh_errors[rec.source];
  }
  for (const auto& [source, count] : fresh_errors) {
    auto& history = errors_[source];
    history.emplace_back(now, count);
    while (!history.empty() && history.front().first <= now - feedback_ticks_)
      history.pop_front();
    std::uint64_t windowed = 0;
    for (const auto& [tick, n] : history) windowed += n;
    if (windowed > cfg_.error_threshold) blocklist(source, now);
  }
}

void Prefilter::blocklist(SourceId source, Tick now) {
  const Tick expiry = now + ttl_ticks_;
  auto [it, fresh] = blocklist_expiry_.try_emplace(source, expiry);
  if (fresh || it->second <= now) ++stats_.blocklist_inserts;
  it->second = std::max(it->second, expiry);
}

bool Prefilter::blocklisted(SourceId source, Tick now) const {
  const auto it = blocklist_expiry_.find(source);
  return it != blocklist_expiry_.end() && now < it->second;
}

std::size_t Prefilter::blocklist_size(Tick now) const {
  std::size_t n = 0;
  for (const auto& [source, expiry] : blocklist_expiry_) n += (now < expiry);
  return n;
}

}  // namespace scaleguard
