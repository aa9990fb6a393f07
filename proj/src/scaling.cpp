#include "scaleguard/scaling.hpp"

#include <algorithm>
#include <cmath>

namespace scaleguard {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

// All pod-count ceilings shave 1e-9 first so accumulated float noise just
// above a pod boundary cannot round a decision up.
int pods_for(double rps, double rps_per_pod) {
  return static_cast<int>(std::ceil(rps / rps_per_pod - 1e-9));
}

}  // namespace

void ScalerConfig::validate() const {
  require(rps_per_pod > 0.0, "rps_per_pod must be positive");
  require(min_replicas >= 1, "min_replicas must be at least 1");
  require(max_replicas >= min_replicas,
          "max_replicas must be >= min_replicas");
  require(legitimacy_threshold >= 0.0 && legitimacy_threshold <= 1.0,
          "legitimacy_threshold must lie in [0, 1]");
  require(prediction_window_s >= 300.0 && prediction_window_s <= 600.0,
          "prediction_window_s must lie in [300, 600]");
  require(scale_down_stabilization_s >= 0.0,
          "scale_down_stabilization_s must be non-negative");
  require(season_len_s >= 0.0, "season_len_s must be non-negative");
}

int reactive_desired(double rps, const ScalerConfig& cfg) {
  return std::clamp(pods_for(rps, cfg.rps_per_pod), cfg.min_replicas,
                    cfg.max_replicas);
}

ForecastResult forecast(const std::vector<double>& history_rps, int horizon,
                        const ScalerConfig& cfg, double tick_len) {
  ForecastResult out;
  if (cfg.forecaster == Forecaster::none || horizon <= 0) return out;
  if (history_rps.empty()) {
    out.values.assign(static_cast<std::size_t>(horizon), 0.0);
    out.fallback = true;
    return out;
  }
  Tick period = cfg.season_len_s > 0.0
                    ? std::llround(cfg.season_len_s / tick_len)
                    : detect_season(history_rps);
  const auto n = static_cast<Tick>(history_rps.size());
  if (period <= 0 || n < period) {
    out.values.assign(static_cast<std::size_t>(horizon), history_rps.back());
    out.fallback = true;
    return out;
  }
  out.values.reserve(static_cast<std::size_t>(horizon));
  for (Tick h = 0; h < horizon; ++h) {
    // One season back from the projected step, cycling the last season for
    // steps beyond it.
    const Tick idx = n + h - period * (h / period + 1);
    out.values.push_back(history_rps[static_cast<std::size_t>(idx)]);
  }
  return out;
}

int detect_season(const std::vector<double>& series) {
  const auto n = static_cast<Tick>(series.size());
  if (n < 4) return 0;
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);
  double variance = 0.0;
  for (double v : series) variance += (v - mean) * (v - mean);
  if (variance <= 1e-12) return 0;  // constant series has no season

  const Tick max_lag = n / 2;
  std::vector<double> corr(static_cast<std::size_t>(max_lag) + 1, 0.0);
  for (Tick lag = 1; lag <= max_lag; ++lag) {
    double sum = 0.0;
    for (Tick i = 0; i + lag < n; ++i) {
      sum += (series[static_cast<std::size_t>(i)] - mean) *
             (series[static_cast<std::size_t>(i + lag)] - mean);
    }
    corr[static_cast<std::size_t>(lag)] = sum / variance;
  }

  // Long plateaus self-correlate strongly at every short lag, so the global
  // maximum can sit at lag 2 even when the true period is far longer. Skip
  // to the first zero crossing before hunting for the seasonal peak; the
  // crossing marks where trivial self-similarity has decayed.
  Tick crossing = 0;
  for (Tick lag = 1; lag <= max_lag; ++lag) {
    if (corr[static_cast<std::size_t>(lag)] <= 0.0) {
      crossing = lag;
      break;
    }
  }
  const Tick lo = std::max<Tick>(2, crossing);
  double best = 0.0;
  for (Tick lag = lo; lag <= max_lag; ++lag)
    best = std::max(best, corr[static_cast<std::size_t>(lag)]);
  if (best <= 0.0) return 0;
  // Smallest lag whose correlation sits within 1e-3 (relative) of the peak:
  // harmonics of the fundamental correlate equally well but are longer.
  for (Tick lag = lo; lag <= max_lag; ++lag) {
    if (corr[static_cast<std::size_t>(lag)] >= best - 1e-3 * std::abs(best))
      return static_cast<int>(lag);
  }
  return 0;
}

int predictive_desired(const std::vector<double>& forecast_values,
                       const ScalerConfig& cfg) {
  if (forecast_values.empty()) return 0;
  const double peak =
      *std::max_element(forecast_values.begin(), forecast_values.end());
  return std::clamp(pods_for(peak, cfg.rps_per_pod), cfg.min_replicas,
                    cfg.max_replicas);
}

StabilizationWindow::StabilizationWindow(Tick horizon_ticks)
    : horizon_ticks_(horizon_ticks) {}

int StabilizationWindow::hold_max(Tick now, int value) {
  entries_.emplace_back(now, value);
  while (!entries_.empty() && entries_.front().first <= now - horizon_ticks_)
    entries_.pop_front();
  int held = value;
  for (const auto& [tick, v] : entries_) held = std::max(held, v);
  return held;
}

ScalerDecision fuse(Tick tick, int reactive, int predictive,
                    const LegitimacySignal& legit, double observed_rps,
                    const ScalerConfig& cfg, StabilizationWindow& stab) {
  ScalerDecision d;
  d.tick = tick;
  d.observed_rps = observed_rps;
  d.score = legit.score;
  d.legit_rps = legit.score * observed_rps;
  d.legitimate = legit.legitimate;
  d.reactive = reactive;
  d.predictive = predictive;

  int fused = std::max(reactive, predictive);
  d.rule = predictive > reactive ? RuleFired::predictive : RuleFired::reactive;

  // The gate caps raw demand at what the legitimate share is worth.
  int cap = cfg.max_replicas + 1000;  // sentinel: never binds when legitimate
  if (!legit.legitimate) {
    cap = pods_for(d.legit_rps, cfg.rps_per_pod);
    if (fused > cap) {
      fused = cap;
      d.rule = RuleFired::legitimacy_cap;
    }
  }
  // Scale-down damping holds recent highs; the gated value is what the
  // window remembers, so an illegitimate episode never seeds a future high.
  const int held = stab.hold_max(tick, fused);
  if (held > fused) {
    fused = held;
    d.rule = RuleFired::stabilization_hold;
  }
  // The gate dominates the hold.
  if (fused > cap) {
    fused = cap;
    d.rule = RuleFired::legitimacy_cap;
  }
  if (fused < cfg.min_replicas) {
    fused = cfg.min_replicas;
    d.rule = RuleFired::clamp;
  } else if (fused > cfg.max_replicas) {
    fused = cfg.max_replicas;
    d.rule = RuleFired::clamp;
  }
  d.desired = fused;
  return d;
}

}  // namespace scaleguard
