// Shared vocabulary for the simulator: traffic kinds, flow outcomes, errors.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace scaleguard {

using Tick = std::int64_t;
using SourceId = std::uint32_t;

// Source id pools are disjoint per class so a record's class is recoverable
// from its id alone. Pool sizes are configured in TrafficMix.
constexpr SourceId kLegitBase = 0;
constexpr SourceId kMalformedBase = 1'000'000;
constexpr SourceId kVolumetricBase = 2'000'000;

enum class TrafficKind : std::uint8_t { legit, malformed, volumetric };

enum class Outcome : std::uint8_t {
  http_2xx,
  http_4xx_5xx,
  dropped_prefilter,
  dropped_policy,
  timed_out,
};

struct Arrival {
  SourceId source;
  TrafficKind kind;
};

struct FlowRecord {
  Tick tick;
  SourceId source;
  TrafficKind kind;
  Outcome outcome;
};

const char* to_string(TrafficKind kind);
const char* to_string(Outcome outcome);

// Thrown by config validation; the message names the offending field.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when a component is fed data its contract forbids, e.g. a
// prefilter-dropped record reaching the metrics pipeline.
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace scaleguard
