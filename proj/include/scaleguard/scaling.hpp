// Meta-scaler decision library: reactive sizing from observed RPS,
// predictive sizing from a seasonal-naive forecast, and the fusion rule
// that lets legitimacy veto scale-ups.
//
// Fusion order: fused = max(reactive, predictive); when the window is not
// legitimate the desired value is capped at ceil(legit_rps / rps_per_pod)
// with legit_rps = score * observed_rps; a stabilization window holds the
// highest gated value seen recently so scale-down is damped; the cap is
// re-applied after the hold (the gate dominates stabilization); the
// [min_replicas, max_replicas] clamp is last.
#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "scaleguard/telemetry.hpp"
#include "scaleguard/types.hpp"

namespace scaleguard {

enum class Forecaster : std::uint8_t { none, seasonal_naive };

struct ScalerConfig {
  double rps_per_pod = 50.0;
  int min_replicas = 1;
  int max_replicas = 20;
  double legitimacy_threshold = 0.85;
  double prediction_window_s = 300.0;  // allowed range [300, 600]
  double scale_down_stabilization_s = 60.0;
  Forecaster forecaster = Forecaster::none;
  // Season length in seconds for seasonal_naive; 0 = detect the dominant
  // period from the history by autocorrelation.
  double season_len_s = 0.0;

  void validate() const;
  bool operator==(const ScalerConfig&) const = default;
};

struct ForecastResult {
  std::vector<double> values;    // one entry per horizon tick
  bool fallback = false;         // history shorter than one season
};

enum class RuleFired : std::uint8_t {
  reactive,
  predictive,
  legitimacy_cap,
  stabilization_hold,
  clamp,
};

struct ScalerDecision {
  Tick tick = 0;
  double observed_rps = 0.0;
  double legit_rps = 0.0;   // score * observed_rps
  double score = 1.0;       // legitimacy score backing this decision
  bool legitimate = true;
  int reactive = 0;
  int predictive = 0;
  int desired = 0;
  RuleFired rule = RuleFired::reactive;
  bool forecast_fallback = false;

  bool operator==(const ScalerDecision&) const = default;
};

// ceil(rps / rps_per_pod) clamped to [min_replicas, max_replicas].
int reactive_desired(double rps, const ScalerConfig& cfg);

// Seasonal-naive: value one season back for each horizon step, cycling the
// last season for steps beyond it. Falls back to persistence (last value,
// flagged) when the history is shorter than one season, and to zeros on an
// empty history. Forecaster::none yields zeros, not flagged.
ForecastResult forecast(const std::vector<double>& history_rps, int horizon,
                        const ScalerConfig& cfg, double tick_len);

// Dominant period of a series by autocorrelation peak over lags
// [2, n/2]; returns 0 when the series is too short or constant.
int detect_season(const std::vector<double>& series);

// ceil(max forecast over the prediction window / rps_per_pod), clamped to
// [min_replicas, max_replicas]; an empty forecast expresses no demand (0).
int predictive_desired(const std::vector<double>& forecast_values,
                       const ScalerConfig& cfg);

// Hold-the-max memory for scale-down damping. Values expire after the
// stabilization horizon.
class StabilizationWindow {
 public:
  // Entries recorded at tick T are held while T > now - horizon_ticks.
  explicit StabilizationWindow(Tick horizon_ticks);
  int hold_max(Tick now, int value);  // records value, returns max in horizon

 private:
  Tick horizon_ticks_;
  std::deque<std::pair<Tick, int>> entries_;
};

ScalerDecision fuse(Tick tick, int reactive, int predictive,
                    const LegitimacySignal& legit, double observed_rps,
                    const ScalerConfig& cfg, StabilizationWindow& stab);

}  // namespace scaleguard
