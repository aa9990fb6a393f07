#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <random>

#include "scaleguard/telemetry.hpp"

using namespace scaleguard;

namespace {

FlowRecord rec(Tick t, Outcome out) {
  return FlowRecord{t, 1,
                    out == Outcome::http_2xx ? TrafficKind::legit
                                             : TrafficKind::malformed,
                    out};
}

void feed(MetricsWindow& w, Tick t, std::int64_t n2xx, std::int64_t nerr,
          std::int64_t nto = 0) {
  w.advance_to(t);
  for (std::int64_t i = 0; i < n2xx; ++i) w.record(rec(t, Outcome::http_2xx));
  for (std::int64_t i = 0; i < nerr; ++i)
    w.record(rec(t, Outcome::http_4xx_5xx));
  for (std::int64_t i = 0; i < nto; ++i) w.record(rec(t, Outcome::timed_out));
}

}  // namespace

TEST_CASE("legitimacy: worked example, 80 ok / 20 errors") {
  MetricsWindow w(TelemetryConfig{}, 1.0);
  feed(w, 0, 80, 20);
  const auto sig = w.legitimacy(0, 0.85);
  CHECK(sig.score == doctest::Approx(0.8));
  CHECK_FALSE(sig.legitimate);
  CHECK(sig.sample_count == 100);
}

TEST_CASE("legitimacy: all 2xx scores 1.0") {
  MetricsWindow w(TelemetryConfig{}, 1.0);
  feed(w, 0, 55, 0);
  const auto sig = w.legitimacy(0, 0.85);
  CHECK(sig.score == 1.0);
  CHECK(sig.legitimate);
}

TEST_CASE("legitimacy: empty window defaults open") {
  MetricsWindow w(TelemetryConfig{}, 1.0);
  w.advance_to(0);
  const auto sig = w.legitimacy(0, 0.85);
  CHECK(sig.score == 1.0);
  CHECK(sig.legitimate);
  CHECK(sig.sample_count == 0);
}

TEST_CASE("timeouts and policy denials are not legitimacy samples") {
  MetricsWindow w(TelemetryConfig{}, 1.0);
  feed(w, 0, 10, 0, /*timeouts=*/90);
  auto sig = w.legitimacy(0, 0.85);
  CHECK(sig.score == 1.0);
  CHECK(sig.sample_count == 10);

  w.record(FlowRecord{0, 2, TrafficKind::legit, Outcome::dropped_policy});
  sig = w.legitimacy(0, 0.85);
  CHECK(sig.sample_count == 10);  // ignored under the default config
}

TEST_CASE("policy denials count as negative signal when opted in") {
  TelemetryConfig cfg;
  cfg.count_policy_denials = true;
  MetricsWindow w(cfg, 1.0);
  feed(w, 0, 90, 0);
  for (int i = 0; i < 10; ++i)
    w.record(FlowRecord{0, 2, TrafficKind::legit, Outcome::dropped_policy});
  const auto sig = w.legitimacy(0, 0.85);
  CHECK(sig.score == doctest::Approx(0.9));
  CHECK(sig.sample_count == 100);
}

TEST_CASE("prefilter drops must never reach telemetry") {
  MetricsWindow w(TelemetryConfig{}, 1.0);
  w.advance_to(0);
  CHECK_THROWS_AS(
      w.record(FlowRecord{0, 3, TrafficKind::legit, Outcome::dropped_prefilter}),
      ContractViolation);
}

TEST_CASE("observed rps: full and partial coverage") {
  TelemetryConfig cfg;
  cfg.rps_window_s = 5.0;
  MetricsWindow w(cfg, 1.0);
  // Tick 0 only: 100 admitted over 1 s of coverage.
  w.advance_to(0);
  w.note_admitted(0, 100);
  CHECK(w.observed_rps(0) == doctest::Approx(100.0));
  // Ticks 1..4 admit 50 each: window holds 300 over 5 s.
  for (Tick t = 1; t <= 4; ++t) {
    w.advance_to(t);
    w.note_admitted(t, 50);
  }
  CHECK(w.observed_rps(4) == doctest::Approx(300.0 / 5.0));
  // Tick 5 admits nothing: tick 0 slides out, 200 over 5 s.
  w.advance_to(5);
  CHECK(w.observed_rps(5) == doctest::Approx(200.0 / 5.0));
}

TEST_CASE("observed rps: empty telemetry reads zero") {
  MetricsWindow w(TelemetryConfig{}, 1.0);
  w.advance_to(0);
  CHECK(w.observed_rps(0) == 0.0);
}

TEST_CASE("legitimacy window slides independently of the rps window") {
  TelemetryConfig cfg;
  cfg.rps_window_s = 5.0;
  cfg.legitimacy_window_s = 20.0;
  MetricsWindow w(cfg, 1.0);
  feed(w, 0, 0, 30);  // errors at tick 0
  for (Tick t = 1; t <= 10; ++t) feed(w, t, 10, 0);
  // Tick 10: errors at tick 0 still inside the 20 s legitimacy window.
  CHECK(w.legitimacy(10, 0.85).score == doctest::Approx(100.0 / 130.0));
  for (Tick t = 11; t <= 20; ++t) feed(w, t, 10, 0);
  // Tick 20: window is (0, 20], the tick-0 errors aged out.
  CHECK(w.legitimacy(20, 0.85).score == 1.0);
  CHECK(w.legitimacy(20, 0.85).sample_count == 200);
}

TEST_CASE("lifetime totals survive window expiry") {
  TelemetryConfig cfg;
  cfg.rps_window_s = 2.0;
  cfg.legitimacy_window_s = 2.0;
  MetricsWindow w(cfg, 1.0);
  for (Tick t = 0; t < 50; ++t) feed(w, t, 3, 1);
  CHECK(w.total_2xx() == 150);
  CHECK(w.total_errors() == 50);
  CHECK(w.legitimacy(49, 0.85).sample_count == 8);
}

TEST_CASE("property: score bounds over random windows") {
  std::mt19937_64 rng(501);
  for (int iter = 0; iter < 1200; ++iter) {
    MetricsWindow w(TelemetryConfig{}, 1.0);
    Tick t = 0;
    const int batches = 1 + static_cast<int>(rng() % 5);
    for (int b = 0; b < batches; ++b) {
      feed(w, t, static_cast<std::int64_t>(rng() % 50),
           static_cast<std::int64_t>(rng() % 50),
           static_cast<std::int64_t>(rng() % 10));
      t += static_cast<Tick>(rng() % 4);
    }
    const auto sig = w.legitimacy(t, 0.85);
    CHECK(sig.score >= 0.0);
    CHECK(sig.score <= 1.0);
  }
}

TEST_CASE("property: monotone in added successes and failures") {
  std::mt19937_64 rng(502);
  for (int iter = 0; iter < 1200; ++iter) {
    MetricsWindow base(TelemetryConfig{}, 1.0);
    const std::int64_t ok = static_cast<std::int64_t>(rng() % 60);
    const std::int64_t err = static_cast<std::int64_t>(rng() % 60);
    feed(base, 0, ok, err);
    const double s0 = base.legitimacy(0, 0.85).score;

    MetricsWindow plus_ok(TelemetryConfig{}, 1.0);
    feed(plus_ok, 0, ok + 1 + static_cast<std::int64_t>(rng() % 5), err);
    CHECK(plus_ok.legitimacy(0, 0.85).score >= s0);

    MetricsWindow plus_err(TelemetryConfig{}, 1.0);
    feed(plus_err, 0, ok, err + 1 + static_cast<std::int64_t>(rng() % 5));
    CHECK(plus_err.legitimacy(0, 0.85).score <= s0);
  }
}

TEST_CASE("property: score is scale invariant") {
  std::mt19937_64 rng(503);
  for (int iter = 0; iter < 1200; ++iter) {
    const std::int64_t ok = static_cast<std::int64_t>(rng() % 40);
    const std::int64_t err = static_cast<std::int64_t>(rng() % 40);
    if (ok + err == 0) continue;
    const std::int64_t k = 2 + static_cast<std::int64_t>(rng() % 9);
    MetricsWindow a(TelemetryConfig{}, 1.0);
    MetricsWindow b(TelemetryConfig{}, 1.0);
    feed(a, 0, ok, err);
    feed(b, 0, ok * k, err * k);
    // Same rational value, correctly rounded division: bitwise equal.
    CHECK(a.legitimacy(0, 0.85).score == b.legitimacy(0, 0.85).score);
  }
}

TEST_CASE("property: empty window is legitimate at any threshold") {
  std::mt19937_64 rng(504);
  for (int iter = 0; iter < 1000; ++iter) {
    const double thr =
        0.01 + 0.99 * static_cast<double>(rng() % 1000) / 1000.0;
    MetricsWindow w(TelemetryConfig{}, 1.0);
    const Tick t = static_cast<Tick>(rng() % 100);
    w.advance_to(t);
    const auto sig = w.legitimacy(t, thr);
    CHECK(sig.legitimate);
    CHECK(sig.sample_count == 0);
  }
}

TEST_CASE("config validation") {
  TelemetryConfig cfg;
  cfg.rps_window_s = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = TelemetryConfig{};
  cfg.legitimacy_window_s = -5.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}
