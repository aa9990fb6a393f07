#include "scaleguard/l7policy.hpp"

#include <algorithm>
#include <cmath>

namespace scaleguard {

void L7Config::validate() const {
  if (rate <= 0.0) throw ValidationError("l7 rate must be positive");
  if (burst <= 0.0) throw ValidationError("l7 burst must be positive");
}

L7Policy::L7Policy(const L7Config& cfg, double tick_len)
    : cfg_(cfg), tick_len_(tick_len) {
  cfg_.validate();
  if (tick_len <= 0.0) throw ValidationError("tick_len must be positive");
}

L7Policy::Result L7Policy::pass(Tick now, const std::vector<Arrival>& batch) {
  Result res;
  res.admitted.reserve(batch.size());
  if (!cfg_.enabled) {
    res.admitted = batch;
    return res;
  }
  for (const auto& a : batch) {
    if (a.kind == TrafficKind::volumetric) {
      // Below L7: no HTTP request ever forms, so no identity to limit.
      res.admitted.push_back(a);
      continue;
    }
    auto [it, fresh] = buckets_.try_emplace(a.source, Bucket{cfg_.burst, now});
    Bucket& bucket = it->second;
    if (!fresh && now > bucket.last_refill) {
      const double elapsed =
          static_cast<double>(now - bucket.last_refill) * tick_len_;
      bucket.tokens = std::min(cfg_.burst, bucket.tokens + cfg_.rate * elapsed);
      bucket.last_refill = now;
    }
    if (bucket.tokens >= 1.0) {
      bucket.tokens -= 1.0;
      res.admitted.push_back(a);
    } else {
      res.denied.push_back({now, a.source, a.kind, Outcome::dropped_policy});
      ++denied_total_;
    }
  }
  return res;
}

Outcome classify_response(TrafficKind kind) {
  switch (kind) {
    case TrafficKind::legit: return Outcome::http_2xx;
    case TrafficKind::malformed: return Outcome::http_4xx_5xx;
    default:
      throw ContractViolation(
          "volumetric traffic never completes an HTTP exchange");
  }
}

}  // namespace scaleguard
