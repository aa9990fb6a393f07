#include "scaleguard/cluster.hpp"

#include <algorithm>
#include <cmath>

namespace scaleguard {

void PodSpec::validate() const {
  if (!(startup_delay_s >= 0.0))
    throw ValidationError("pod.startup_delay_s must be >= 0");
  if (!(capacity_rps > 0.0))
    throw ValidationError("pod.capacity_rps must be > 0");
  if (!(datapath_convergence_s >= 0.0))
    throw ValidationError("pod.datapath_convergence_s must be >= 0");
  if (!(request_timeout_s > 0.0))
    throw ValidationError("pod.request_timeout_s must be > 0");
}

Cluster::Cluster(const PodSpec& spec, double tick_len, int initial_replicas)
    : spec_(spec), tick_len_(tick_len) {
  spec_.validate();
  if (!(tick_len > 0.0)) throw ValidationError("tick_len must be > 0");
  if (initial_replicas < 0)
    throw ValidationError("initial_replicas must be >= 0");
  startup_ticks_ = std::llround(spec_.startup_delay_s / tick_len_);
  convergence_ticks_ = std::llround(spec_.datapath_convergence_s / tick_len_);
  timeout_ticks_ = std::llround(spec_.request_timeout_s / tick_len_);
  pods_.reserve(static_cast<std::size_t>(initial_replicas));
  for (int i = 0; i < initial_replicas; ++i)
    pods_.push_back(Pod{next_id_++, PodPhase::reachable, 0, 0, 0});
}

Cluster::StepResult Cluster::step(Tick now,
                                  const std::vector<Arrival>& admitted) {
  StepResult res;

  // Pods marked terminating last tick are gone now.
  std::erase_if(pods_,
                [](const Pod& p) { return p.phase == PodPhase::terminating; });

  for (Pod& p : pods_) {
    if (p.phase == PodPhase::starting && now >= p.ready_at)
      p.phase = PodPhase::ready;
    if (p.phase == PodPhase::ready && now >= p.reachable_at)
      p.phase = PodPhase::reachable;
  }

  // Deadline pass runs before service: work that would be served at its
  // expiry age has already been abandoned by the client.
  const Tick cutoff = now - timeout_ticks_;
  while (!queue_.empty() && queue_.front().enqueued <= cutoff) {
    const Queued& q = queue_.front();
    res.outcomes.push_back(FlowRecord{now, q.source, q.kind, Outcome::timed_out});
    ++res.expired;
    queue_.pop_front();
  }

  for (const Arrival& a : admitted)
    queue_.push_back(Queued{now, a.source, a.kind});

  int reachable = 0;
  for (const Pod& p : pods_)
    if (p.phase == PodPhase::reachable) ++reachable;
  service_credit_ += static_cast<double>(reachable) * spec_.capacity_rps *
                     tick_len_;
  auto slots = static_cast<std::int64_t>(std::floor(service_credit_));
  while (slots > 0 && !queue_.empty()) {
    const Queued& q = queue_.front();
    // A served volumetric entry burns its slot: the half-open connection
    // ties up the worker and eventually times out, never an HTTP status.
    const Outcome out = q.kind == TrafficKind::legit ? Outcome::http_2xx
                        : q.kind == TrafficKind::malformed
                            ? Outcome::http_4xx_5xx
                            : Outcome::timed_out;
    res.outcomes.push_back(FlowRecord{now, q.source, q.kind, out});
    queue_.pop_front();
    ++res.served;
    --slots;
    service_credit_ -= 1.0;
  }
  // Idle capacity is not banked across ticks.
  if (queue_.empty()) service_credit_ = 0.0;
  return res;
}

void Cluster::apply_decision(Tick now, int desired) {
  if (desired < 0) throw ContractViolation("desired replicas must be >= 0");
  int live = 0;
  for (const Pod& p : pods_)
    if (p.phase != PodPhase::terminating) ++live;
  if (desired > live) {
    for (int i = live; i < desired; ++i) {
      const Tick ready = now + startup_ticks_;
      pods_.push_back(
          Pod{next_id_++, PodPhase::starting, now, ready,
              ready + convergence_ticks_});
    }
  } else if (desired < live) {
    // Newest first; ids are monotonic in creation order.
    std::vector<Pod*> live_pods;
    for (Pod& p : pods_)
      if (p.phase != PodPhase::terminating) live_pods.push_back(&p);
    std::sort(live_pods.begin(), live_pods.end(),
              [](const Pod* a, const Pod* b) { return a->id > b->id; });
    for (int i = 0; i < live - desired; ++i)
      live_pods[static_cast<std::size_t>(i)]->phase = PodPhase::terminating;
  }
}

Cluster::Counts Cluster::counts() const {
  Counts c;
  for (const Pod& p : pods_) {
    switch (p.phase) {
      case PodPhase::starting: ++c.starting; break;
      case PodPhase::ready: ++c.ready; break;
      case PodPhase::reachable: ++c.reachable; break;
      case PodPhase::terminating: ++c.terminating; break;
    }
  }
  return c;
}

double Cluster::reachable_capacity_rps() const {
  int reachable = 0;
  for (const Pod& p : pods_)
    if (p.phase == PodPhase::reachable) ++reachable;
  return static_cast<double>(reachable) * spec_.capacity_rps;
}

}  // namespace scaleguard
