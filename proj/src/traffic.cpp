#include "scaleguard/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace scaleguard {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

double fraction_of(const TrafficMix& mix, int cls) {
  switch (cls) {
    case 0: return mix.legit_fraction;
    case 1: return mix.malformed_fraction;
    default: return mix.volumetric_fraction;
  }
}

// Centered Bresenham hit test: slot `idx` of `total` belongs to the class
// owning `count` slots. Centering puts the minority class mid-window, so
// any aligned window of total/count slots holds exactly one hit.
bool interleave_hit(std::int64_t count, std::int64_t total, std::int64_t idx) {
  if (count <= 0 || total <= 0) return false;
  const std::int64_t off = total / 2;
  return ((idx + 1) * count + off) / total > (idx * count + off) / total;
}

}  // namespace

const char* to_string(TrafficKind kind) {
  switch (kind) {
    case TrafficKind::legit: return "legit";
    case TrafficKind::malformed: return "malformed";
    case TrafficKind::volumetric: return "volumetric";
  }
  return "unknown";
}

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::http_2xx: return "http_2xx";
    case Outcome::http_4xx_5xx: return "http_4xx_5xx";
    case Outcome::dropped_prefilter: return "dropped_prefilter";
    case Outcome::dropped_policy: return "dropped_policy";
    case Outcome::timed_out: return "timed_out";
  }
  return "unknown";
}

void TrafficMix::validate() const {
  const double fractions[] = {legit_fraction, malformed_fraction,
                              volumetric_fraction};
  const char* names[] = {"legit_fraction", "malformed_fraction",
                         "volumetric_fraction"};
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    require(fractions[i] >= 0.0 && fractions[i] <= 1.0,
            std::string(names[i]) + " must lie in [0, 1]");
    sum += fractions[i];
  }
  require(std::abs(sum - 1.0) <= 1e-9, "mix fractions must sum to 1");
  require(legit_fraction == 0.0 || legit_sources > 0,
          "legit_sources must be positive when legit traffic is mixed in");
  require(malformed_fraction == 0.0 || malformed_sources > 0,
          "malformed_sources must be positive when malformed traffic is "
          "mixed in");
  require(volumetric_fraction == 0.0 || volumetric_sources > 0,
          "volumetric_sources must be positive when volumetric traffic is "
          "mixed in");
}

void TrafficProfile::validate() const {
  require(!phases.empty(), "phases must not be empty");
  for (const auto& ph : phases) {
    require(ph.duration_s > 0.0, "phase duration_s must be positive");
    require(ph.start_rate >= 0.0, "phase start_rate must be non-negative");
    require(ph.end_rate >= 0.0, "phase end_rate must be non-negative");
    ph.mix.validate();
  }
}

double TrafficProfile::duration_s() const {
  double total = 0.0;
  for (const auto& ph : phases) total += ph.duration_s;
  return total;
}

double TrafficProfile::rate_at(double t) const {
  if (t < 0.0 || t >= duration_s()) return 0.0;
  double start = 0.0;
  for (const auto& ph : phases) {
    if (t < start + ph.duration_s) {
      const double frac = (t - start) / ph.duration_s;
      return ph.start_rate + (ph.end_rate - ph.start_rate) * frac;
    }
    start += ph.duration_s;
  }
  return 0.0;
}

double TrafficProfile::cumulative(double t) const {
  t = std::clamp(t, 0.0, duration_s());
  double total = 0.0;
  double start = 0.0;
  for (const auto& ph : phases) {
    const double span = std::min(t - start, ph.duration_s);
    if (span <= 0.0) break;
    const double end_rate =
        ph.start_rate + (ph.end_rate - ph.start_rate) * (span / ph.duration_s);
    total += 0.5 * (ph.start_rate + end_rate) * span;
    start += ph.duration_s;
  }
  return total;
}

const Phase& TrafficProfile::phase_at(double t) const {
  double start = 0.0;
  for (const auto& ph : phases) {
    if (t < start + ph.duration_s) return ph;
    start += ph.duration_s;
  }
  return phases.back();
}

TrafficProfile flash_crowd_profile(double peak_rps, double ramp_s,
                                   double sustain_s) {
  TrafficMix mix;  // all legit
  TrafficProfile p;
  p.phases.push_back({ramp_s, 0.0, peak_rps, mix});
  p.phases.push_back({sustain_s, peak_rps, peak_rps, mix});
  return p;
}

TrafficProfile mixed_attack_profile(double rate_rps, double duration_s) {
  TrafficMix mix;
  mix.legit_fraction = 0.8;
  mix.malformed_fraction = 0.2;
  TrafficProfile p;
  p.phases.push_back({duration_s, rate_rps, rate_rps, mix});
  return p;
}

TrafficProfile training_history_profile(int cycles, double peak_rps,
                                        double ramp_s, double cycle_s) {
  require(cycles >= 1, "cycles must be at least 1");
  TrafficMix mix;
  TrafficProfile p;
  for (int i = 0; i < cycles; ++i) {
    p.phases.push_back({ramp_s, 0.0, peak_rps, mix});
    p.phases.push_back({cycle_s - ramp_s, peak_rps, peak_rps, mix});
  }
  return p;
}

TrafficGenerator::TrafficGenerator(const TrafficProfile& profile,
                                   std::uint64_t seed)
    : profile_(profile), seed_(seed) {
  profile_.validate();
}

std::uint64_t TrafficGenerator::split_counts(Tick tick, double tick_len,
                                             std::uint64_t counts[3]) {
  const double t1 = static_cast<double>(tick + 1) * tick_len;
  std::int64_t n = 0;
  if (profile_.model == ArrivalModel::deterministic) {
    n = std::llround(profile_.cumulative(t1)) - emitted_total_;
  } else {
    const double t0 = static_cast<double>(tick) * tick_len;
    const double lambda = profile_.cumulative(t1) - profile_.cumulative(t0);
    std::mt19937_64 rng(seed_ ^
                        (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(
                                                     tick + 1)));
    n = lambda > 0.0 ? std::poisson_distribution<std::int64_t>(lambda)(rng)
                     : 0;
  }
  if (n < 0) n = 0;
  emitted_total_ += n;

  const TrafficMix& mix =
      profile_.phase_at((static_cast<double>(tick) + 0.5) * tick_len).mix;
  double remainder[3];
  std::int64_t assigned = 0;
  for (int c = 0; c < 3; ++c) {
    class_target_[c] += fraction_of(mix, c) * static_cast<double>(n);
    const double deficit =
        std::max(0.0, class_target_[c] - class_state_[c].emitted);
    auto base = static_cast<std::int64_t>(std::floor(deficit));
    base = std::min(base, n - assigned);
    counts[c] = static_cast<std::uint64_t>(base);
    remainder[c] = deficit - static_cast<double>(base);
    assigned += base;
  }
  // Largest remainder takes the slack; ties resolve to the lowest class.
  for (std::int64_t left = n - assigned; left > 0; --left) {
    int best = 0;
    for (int c = 1; c < 3; ++c) {
      if (remainder[c] > remainder[best]) best = c;
    }
    ++counts[best];
    remainder[best] -= 1.0;
  }
  for (int c = 0; c < 3; ++c)
    class_state_[c].emitted += static_cast<double>(counts[c]);
  return static_cast<std::uint64_t>(n);
}

SourceId TrafficGenerator::pick_source(TrafficKind kind,
                                       const TrafficMix& mix) {
  auto& rr = class_state_[static_cast<int>(kind)].rr_next;
  const std::uint64_t idx = rr++;
  switch (kind) {
    case TrafficKind::legit:
      return kLegitBase + static_cast<SourceId>(idx % mix.legit_sources);
    case TrafficKind::malformed:
      return kMalformedBase +
             static_cast<SourceId>(idx % mix.malformed_sources);
    default:
      return kVolumetricBase +
             static_cast<SourceId>(idx % mix.volumetric_sources);
  }
}

std::vector<Arrival> TrafficGenerator::generate(Tick tick, double tick_len) {
  std::uint64_t counts[3] = {0, 0, 0};
  const std::uint64_t n = split_counts(tick, tick_len, counts);
  const TrafficMix& mix =
      profile_.phase_at((static_cast<double>(tick) + 0.5) * tick_len).mix;

  std::vector<Arrival> out;
  out.reserve(n);
  const auto total = static_cast<std::int64_t>(n);
  const auto n_vol = static_cast<std::int64_t>(counts[2]);
  const auto n_http = total - n_vol;
  const auto n_malformed = static_cast<std::int64_t>(counts[1]);
  std::int64_t http_seen = 0;
  for (std::int64_t i = 0; i < total; ++i) {
    TrafficKind kind;
    if (interleave_hit(n_vol, total, i)) {
      kind = TrafficKind::volumetric;
    } else {
      kind = interleave_hit(n_malformed, n_http, http_seen)
                 ? TrafficKind::malformed
                 : TrafficKind::legit;
      ++http_seen;
    }
    out.push_back({pick_source(kind, mix), kind});
  }
  return out;
}

}  // namespace scaleguard
