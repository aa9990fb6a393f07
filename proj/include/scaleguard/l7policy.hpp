// Identity-aware L7 policy: per-source token-bucket rate limits applied to
// traffic that survived the ingress pre-filter, plus the response
// classifier used by the cluster model.
#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "scaleguard/types.hpp"

namespace scaleguard {

struct L7Config {
  bool enabled = true;
  double rate = 25.0;   // requests per second per identity
  double burst = 50.0;  // bucket depth

  void validate() const;
  bool operator==(const L7Config&) const = default;
};

class L7Policy {
 public:
  struct Result {
    std::vector<Arrival> admitted;
    std::vector<FlowRecord> denied;  // outcome dropped_policy
  };

  L7Policy(const L7Config& cfg, double tick_len);

  // Applies per-identity limits in arrival order. Disabled -> everything
  // is admitted untouched. |admitted| + |denied| == |batch| per call.
  // Volumetric arrivals are below L7 and bypass the buckets: an identity
  // policy can only see completed HTTP requests.
  Result pass(Tick now, const std::vector<Arrival>& batch);

  std::uint64_t denied_total() const { return denied_total_; }

 private:
  struct Bucket {
    double tokens;
    Tick last_refill;
  };

  L7Config cfg_;
  double tick_len_;
  std::uint64_t denied_total_ = 0;
  std::unordered_map<SourceId, Bucket> buckets_;
};

// Maps a served request's kind to its HTTP outcome: legit -> http_2xx,
// malformed -> http_4xx_5xx. Volumetric traffic never completes an HTTP
// exchange; classifying it is a contract violation.
Outcome classify_response(TrafficKind kind);

}  // namespace scaleguard
