// Workload synthesis: piecewise-linear rate profiles and a deterministic
// tick-based arrival generator.
//
// The deterministic model emits, for every tick, the difference of the
// rounded cumulative rate integral, so the emitted total equals
// llround(integral of rate dt) exactly at every prefix. Class counts follow
// the mix fractions through a largest-remainder split with per-class
// cumulative carry, and arrivals are interleaved evenly (volumetric vs HTTP
// first, then legit vs malformed) so any contiguous slice of the stream
// holds the mix ratio as tightly as integer counts allow. The poisson model
// draws per-tick counts, kinds and sources from a seeded stream instead.
#pragma once

#include <cstdint>
#include <vector>

#include "scaleguard/types.hpp"

namespace scaleguard {

struct TrafficMix {
  double legit_fraction = 1.0;
  double malformed_fraction = 0.0;
  double volumetric_fraction = 0.0;
  // Distinct source identities per class.
  std::uint32_t legit_sources = 100;
  std::uint32_t malformed_sources = 20;
  std::uint32_t volumetric_sources = 4;

  void validate() const;  // fractions in [0,1], sum to 1, pools > 0 where used
  bool operator==(const TrafficMix&) const = default;
};

struct Phase {
  double duration_s = 0.0;
  double start_rate = 0.0;  // arrivals per second at phase start
  double end_rate = 0.0;    // arrivals per second at phase end, linear ramp
  TrafficMix mix;

  bool operator==(const Phase&) const = default;
};

enum class ArrivalModel : std::uint8_t { deterministic, poisson };

struct TrafficProfile {
  std::vector<Phase> phases;
  ArrivalModel model = ArrivalModel::deterministic;

  void validate() const;
  double duration_s() const;
  // Instantaneous offered rate at absolute time t (0 outside the profile).
  double rate_at(double t) const;
  // Integral of rate over [0, t], clamped to the profile span.
  double cumulative(double t) const;
  const Phase& phase_at(double t) const;
  bool operator==(const TrafficProfile&) const = default;
};

// Ramp 0 -> peak_rps over ramp_s, then sustain peak_rps for sustain_s.
// All traffic legitimate.
TrafficProfile flash_crowd_profile(double peak_rps = 500.0,
                                   double ramp_s = 30.0,
                                   double sustain_s = 300.0);

// Constant rate_rps for duration_s with a 0.8 legit / 0.2 malformed mix.
TrafficProfile mixed_attack_profile(double rate_rps = 500.0,
                                    double duration_s = 300.0);

// `cycles` repetitions of the flash-crowd shape compressed into cycle_s
// seconds each; the default 12 x 300 s gives one hour of history whose
// dominant period is cycle_s. Throws ValidationError if cycles < 1.
TrafficProfile training_history_profile(int cycles = 12,
                                        double peak_rps = 500.0,
                                        double ramp_s = 30.0,
                                        double cycle_s = 300.0);

class TrafficGenerator {
 public:
  TrafficGenerator(const TrafficProfile& profile, std::uint64_t seed);

  // Arrivals for tick `tick` of length tick_len seconds. Stateful: carry
  // accumulators assume ticks are generated in order from 0.
  std::vector<Arrival> generate(Tick tick, double tick_len);

 private:
  struct ClassState {
    double emitted = 0.0;  // integer-valued, kept as double for carry math
    std::uint64_t rr_next = 0;
  };

  std::uint64_t split_counts(Tick tick, double tick_len,
                             std::uint64_t counts[3]);
  SourceId pick_source(TrafficKind kind, const TrafficMix& mix);

  TrafficProfile profile_;
  std::uint64_t seed_;
  std::int64_t emitted_total_ = 0;
  double class_target_[3] = {0.0, 0.0, 0.0};  // cumulative per-class quota
  ClassState class_state_[3];
};

}  // namespace scaleguard
