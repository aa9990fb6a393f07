#include "scaleguard/engine.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

namespace scaleguard {

void SimConfig::validate() const {
  if (!(tick_len > 0.0)) throw ValidationError("sim.tick_len must be > 0");
  if (!(duration_s >= 0.0))
    throw ValidationError("sim.duration_s must be >= 0");
  if (!(control_interval_s > 0.0))
    throw ValidationError("sim.control_interval_s must be > 0");
  if (initial_replicas < 0)
    throw ValidationError("sim.initial_replicas must be >= 0");
  profile.validate();
  if (warmup) warmup->validate();
  prefilter.validate();
  l7.validate();
  telemetry.validate();
  scaler.validate();
  pod.validate();
}

namespace {

Tick ticks_for(double seconds, double tick_len) {
  return std::max<Tick>(0, std::llround(seconds / tick_len));
}

}  // namespace

RunTrace run(const SimConfig& cfg) {
  cfg.validate();
  RunTrace trace;
  trace.config = cfg;

  const Tick total_ticks = ticks_for(cfg.duration_s, cfg.tick_len);
  const Tick control_ticks =
      std::max<Tick>(1, std::llround(cfg.control_interval_s / cfg.tick_len));
  const int horizon =
      static_cast<int>(ticks_for(cfg.scaler.prediction_window_s, cfg.tick_len));

  TrafficGenerator gen(cfg.profile, cfg.seed);
  std::optional<Prefilter> pre;
  if (cfg.prefilter_enabled) pre.emplace(cfg.prefilter, cfg.tick_len);
  L7Policy l7(cfg.l7, cfg.tick_len);
  MetricsWindow tele(cfg.telemetry, cfg.tick_len);
  const int initial = cfg.initial_replicas == 0 ? cfg.scaler.min_replicas
                                                : cfg.initial_replicas;
  Cluster cluster(cfg.pod, cfg.tick_len, initial);
  StabilizationWindow stab(
      ticks_for(cfg.scaler.scale_down_stabilization_s, cfg.tick_len));

  // Forecast history: the warmup profile's offered series, then the live
  // admitted series. The dominant season is detected once on the warmup
  // portion so live noise cannot retune the period mid-run.
  std::vector<double> history;
  if (cfg.warmup) {
    const Tick warm_ticks = ticks_for(cfg.warmup->duration_s(), cfg.tick_len);
    history.reserve(static_cast<std::size_t>(warm_ticks + total_ticks));
    TrafficGenerator warm(*cfg.warmup, cfg.seed);
    for (Tick t = 0; t < warm_ticks; ++t)
      history.push_back(
          static_cast<double>(warm.generate(t, cfg.tick_len).size()) /
          cfg.tick_len);
  }
  ScalerConfig eff = cfg.scaler;
  if (eff.forecaster == Forecaster::seasonal_naive &&
      eff.season_len_s == 0.0 && !history.empty()) {
    const int period = detect_season(history);
    if (period > 0) eff.season_len_s = static_cast<double>(period) * cfg.tick_len;
  }

  trace.ticks.reserve(static_cast<std::size_t>(total_ticks));
  int last_desired = initial;
  for (Tick t = 0; t < total_ticks; ++t) {
    TickRow row;
    row.tick = t;

    const std::vector<Arrival> batch = gen.generate(t, cfg.tick_len);
    row.offered = batch.size();
    for (const Arrival& a : batch)
      ++trace.offered_by_kind[static_cast<int>(a.kind)];

    Prefilter::Result filtered;
    if (pre) {
      filtered = pre->pass(t, batch);
    } else {
      filtered.passed = batch;
    }
    row.dropped_prefilter = filtered.dropped;

    const L7Policy::Result admitted = l7.pass(t, filtered.passed);
    row.dropped_policy = admitted.denied.size();
    row.admitted = admitted.admitted.size();

    const Cluster::StepResult step = cluster.step(t, admitted.admitted);
    for (const FlowRecord& rec : step.outcomes) {
      switch (rec.outcome) {
        case Outcome::http_2xx: ++row.served_2xx; break;
        case Outcome::http_4xx_5xx: ++row.served_4xx_5xx; break;
        case Outcome::timed_out: ++row.timed_out; break;
        default: break;
      }
    }

    tele.advance_to(t);
    tele.note_admitted(t, row.admitted);
    for (const FlowRecord& rec : admitted.denied) tele.record(rec);
    for (const FlowRecord& rec : step.outcomes) tele.record(rec);

    // Served errors close the loop back to the ingress tier every tick,
    // not just on control ticks.
    if (pre) pre->mitigation_update(t, step.outcomes);

    // Pod state is captured before the decision lands: an order placed at
    // the end of tick t first changes what tick t+1 sees.
    const auto counts = cluster.counts();
    row.pods_starting = counts.starting;
    row.pods_ready = counts.ready;
    row.pods_reachable = counts.reachable;
    row.reachable_capacity_rps = cluster.reachable_capacity_rps();
    row.queue_depth = static_cast<std::uint64_t>(cluster.queue_depth());
    row.observed_rps = tele.observed_rps(t);
    LegitimacySignal signal =
        tele.legitimacy(t, cfg.scaler.legitimacy_threshold);
    row.legitimacy = signal.score;

    history.push_back(static_cast<double>(row.admitted) / cfg.tick_len);

    if (t % control_ticks == 0) {
      const ForecastResult fr = forecast(history, horizon, eff, cfg.tick_len);
      const int reactive = reactive_desired(row.observed_rps, cfg.scaler);
      const int predictive = predictive_desired(fr.values, cfg.scaler);
      if (!cfg.gate_enabled) signal.legitimate = true;
      ScalerDecision d = fuse(t, reactive, predictive, signal,
                              row.observed_rps, cfg.scaler, stab);
      d.forecast_fallback = fr.fallback;
      cluster.apply_decision(t, d.desired);
      last_desired = d.desired;
      trace.decisions.push_back(d);
    }
    row.desired = last_desired;
    trace.ticks.push_back(row);
  }

  if (pre) trace.prefilter_totals = pre->stats();
  trace.telemetry_admitted = tele.total_admitted();
  return trace;
}

namespace {

ScalerConfig default_scaler() { return ScalerConfig{}; }

}  // namespace

SimConfig scenario_flash_crowd(const std::string& variant) {
  if (variant != "reactive" && variant != "predictive")
    throw ValidationError("flash_crowd variants: reactive | predictive, got '" +
                          variant + "'");
  SimConfig cfg;
  cfg.profile = flash_crowd_profile();
  cfg.duration_s = cfg.profile.duration_s();
  cfg.seed = 42;
  cfg.scaler = default_scaler();
  cfg.scenario = "flash_crowd";
  cfg.variant = variant;
  if (variant == "predictive") {
    cfg.scaler.forecaster = Forecaster::seasonal_naive;
    cfg.warmup = training_history_profile();
  }
  return cfg;
}

SimConfig scenario_mixed_attack(const std::string& variant) {
  if (variant != "unprotected" && variant != "protected")
    throw ValidationError(
        "mixed_attack variants: unprotected | protected, got '" + variant +
        "'");
  SimConfig cfg;
  // 750 req/s flat: 400 legitimate + 100 malformed + 250 volumetric.
  Phase phase;
  phase.duration_s = 300.0;
  phase.start_rate = 750.0;
  phase.end_rate = 750.0;
  phase.mix.legit_fraction = 400.0 / 750.0;
  phase.mix.malformed_fraction = 100.0 / 750.0;
  phase.mix.volumetric_fraction = 250.0 / 750.0;
  cfg.profile.phases.push_back(phase);
  cfg.duration_s = 300.0;
  cfg.seed = 42;
  cfg.scaler = default_scaler();
  cfg.scenario = "mixed_attack";
  cfg.variant = variant;
  const bool armed = variant == "protected";
  cfg.prefilter_enabled = armed;
  cfg.gate_enabled = armed;
  return cfg;
}

SimConfig scenario_config(const std::string& name, const std::string& variant) {
  if (name == "flash_crowd") return scenario_flash_crowd(variant);
  if (name == "mixed_attack") return scenario_mixed_attack(variant);
  throw ValidationError("unknown scenario '" + name +
                        "' (known: flash_crowd, mixed_attack)");
}

}  // namespace scaleguard
