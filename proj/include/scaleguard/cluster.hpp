// Cluster model: pod lifecycle (starting -> ready -> reachable ->
// terminating) and a single FIFO request queue with timeout, served
// jointly by all reachable pods.
//
// datapath_convergence_s models how long a ready pod waits before the
// datapath routes to it: 0 for an eBPF-style instantly-programmed path,
// larger for rule-convergence regimes.
#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "scaleguard/types.hpp"

namespace scaleguard {

struct PodSpec {
  double startup_delay_s = 10.0;
  double capacity_rps = 50.0;
  double datapath_convergence_s = 0.0;
  double request_timeout_s = 5.0;

  void validate() const;
  bool operator==(const PodSpec&) const = default;
};

enum class PodPhase : std::uint8_t { starting, ready, reachable, terminating };

struct Pod {
  std::uint32_t id;
  PodPhase phase;
  Tick created;
  Tick ready_at;      // created + startup delay
  Tick reachable_at;  // ready_at + datapath convergence
};

class Cluster {
 public:
  struct StepResult {
    std::vector<FlowRecord> outcomes;  // responses and timeouts this tick
    std::int64_t served = 0;   // entries that consumed a service slot
    std::int64_t expired = 0;  // entries dropped at their deadline
  };

  struct Counts {
    int starting = 0;
    int ready = 0;  // ready but not yet reachable
    int reachable = 0;
    int terminating = 0;
  };

  Cluster(const PodSpec& spec, double tick_len, int initial_replicas);

  // One tick: purge terminated pods, advance phases, expire queue entries
  // older than the timeout, enqueue admitted arrivals, then serve up to
  // the reachable capacity in FIFO order. Served legit/malformed requests
  // get their HTTP outcome; a served volumetric entry burns its slot and
  // times out (a half-open connection never completes).
  StepResult step(Tick now, const std::vector<Arrival>& admitted);

  // Reconciles the pod set towards `desired`: scale-up adds starting pods,
  // scale-down terminates newest-first. Terminating pods stop serving
  // immediately and never return.
  void apply_decision(Tick now, int desired);

  Counts counts() const;
  double reachable_capacity_rps() const;
  std::int64_t queue_depth() const {
    return static_cast<std::int64_t>(queue_.size());
  }
  const std::vector<Pod>& pods() const { return pods_; }

 private:
  struct Queued {
    Tick enqueued;
    SourceId source;
    TrafficKind kind;
  };

  PodSpec spec_;
  double tick_len_;
  Tick startup_ticks_;
  Tick convergence_ticks_;
  Tick timeout_ticks_;
  std::uint32_t next_id_ = 0;
  double service_credit_ = 0.0;
  std::vector<Pod> pods_;
  std::deque<Queued> queue_;
};

}  // namespace scaleguard
