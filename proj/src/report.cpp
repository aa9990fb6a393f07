#include "scaleguard/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace scaleguard {

namespace {

using ordered_json = nlohmann::ordered_json;

// Peak legitimate rate the profile ever offers; the capacity bar that
// scale_lag_s and time_to_stabilize_s measure against.
double sustained_legit_rps(const TrafficProfile& profile) {
  double peak = 0.0;
  for (const Phase& p : profile.phases)
    peak = std::max(peak,
                    std::max(p.start_rate, p.end_rate) * p.mix.legit_fraction);
  return peak;
}

ordered_json opt_json(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}

std::optional<double> opt_from(const ordered_json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

std::string num(double v) { return ordered_json(v).dump(); }

std::string opt_csv(const std::optional<double>& v) {
  return v ? num(*v) : std::string();
}

}  // namespace

MetricsReport compute(const RunTrace& trace) {
  MetricsReport r;
  r.scenario = trace.config.scenario;
  r.variant = trace.config.variant;
  r.seed = trace.config.seed;
  r.tick_len = trace.config.tick_len;
  r.duration_s = trace.config.duration_s;

  std::uint64_t pod_ticks = 0;
  for (const TickRow& row : trace.ticks) {
    r.offered += row.offered;
    r.admitted += row.admitted;
    r.served_2xx += row.served_2xx;
    r.http_errors += row.served_4xx_5xx;
    r.timed_out += row.timed_out;
    r.dropped_prefilter += row.dropped_prefilter;
    r.dropped_policy += row.dropped_policy;
    pod_ticks += static_cast<std::uint64_t>(row.pods_reachable);
    r.peak_pods = std::max(r.peak_pods, row.pods_reachable);
    r.legitimacy_series.push_back(LegitimacyPoint{row.tick, row.legitimacy});
  }
  if (!trace.ticks.empty())
    r.avg_pods = static_cast<double>(pod_ticks) /
                 static_cast<double>(trace.ticks.size());
  for (const ScalerDecision& d : trace.decisions)
    r.peak_desired = std::max(r.peak_desired, d.desired);
  if (r.admitted > 0)
    r.timeout_rate_pct = static_cast<double>(r.timed_out) /
                         static_cast<double>(r.admitted) * 100.0;

  const double bar = sustained_legit_rps(trace.config.profile);
  Tick surge = -1;
  for (const TickRow& row : trace.ticks) {
    if (row.offered > 0) {
      surge = row.tick;
      break;
    }
  }
  if (surge >= 0) {
    for (const TickRow& row : trace.ticks) {
      if (row.tick < surge) continue;
      if (row.reachable_capacity_rps >= bar) {
        r.scale_lag_s = static_cast<double>(row.tick - surge) *
                        trace.config.tick_len;
        break;
      }
    }
    for (const TickRow& row : trace.ticks) {
      if (row.tick < surge) continue;
      if (row.reachable_capacity_rps >= bar && row.queue_depth == 0) {
        r.time_to_stabilize_s = static_cast<double>(row.tick - surge) *
                                trace.config.tick_len;
        break;
      }
    }
  }

  const std::uint64_t malicious =
      trace.offered_by_kind[1] + trace.offered_by_kind[2];
  if (malicious > 0)
    r.ingress_drop_fraction = static_cast<double>(r.dropped_prefilter) /
                              static_cast<double>(malicious);
  return r;
}

Comparison compare(const MetricsReport& a, const MetricsReport& b) {
  if (a.seed != b.seed)
    throw ValidationError("cannot compare runs of different workload seeds (" +
                          std::to_string(a.seed) + " vs " +
                          std::to_string(b.seed) + ")");
  Comparison cmp;
  cmp.label_a = a.scenario + "/" + a.variant;
  cmp.label_b = b.scenario + "/" + b.variant;

  auto push = [&cmp](const std::string& metric, std::optional<double> va,
                     std::optional<double> vb) {
    CompareRow row;
    row.metric = metric;
    row.a = va;
    row.b = vb;
    if (va && vb && *va != 0.0)
      row.delta_pct = (*vb - *va) / *va * 100.0;
    cmp.rows.push_back(row);
  };
  auto val = [](std::uint64_t v) {
    return std::optional<double>(static_cast<double>(v));
  };

  push("avg_pods", a.avg_pods, b.avg_pods);
  push("peak_pods", static_cast<double>(a.peak_pods),
       static_cast<double>(b.peak_pods));
  push("peak_desired", static_cast<double>(a.peak_desired),
       static_cast<double>(b.peak_desired));
  push("timeout_rate_pct", a.timeout_rate_pct, b.timeout_rate_pct);
  push("offered", val(a.offered), val(b.offered));
  push("admitted", val(a.admitted), val(b.admitted));
  push("served_2xx", val(a.served_2xx), val(b.served_2xx));
  push("http_errors", val(a.http_errors), val(b.http_errors));
  push("timed_out", val(a.timed_out), val(b.timed_out));
  push("dropped_prefilter", val(a.dropped_prefilter),
       val(b.dropped_prefilter));
  push("dropped_policy", val(a.dropped_policy), val(b.dropped_policy));
  push("scale_lag_s", a.scale_lag_s, b.scale_lag_s);
  push("time_to_stabilize_s", a.time_to_stabilize_s, b.time_to_stabilize_s);
  push("ingress_drop_fraction", a.ingress_drop_fraction,
       b.ingress_drop_fraction);
  return cmp;
}

std::string to_json(const MetricsReport& r) {
  ordered_json j;
  j["schema_version"] = r.schema_version;
  j["scenario"] = r.scenario;
  j["variant"] = r.variant;
  j["seed"] = r.seed;
  j["tick_len"] = r.tick_len;
  j["duration_s"] = r.duration_s;
  j["avg_pods"] = r.avg_pods;
  j["peak_pods"] = r.peak_pods;
  j["peak_desired"] = r.peak_desired;
  j["timeout_rate_pct"] = r.timeout_rate_pct;
  j["offered"] = r.offered;
  j["admitted"] = r.admitted;
  j["served_2xx"] = r.served_2xx;
  j["http_errors"] = r.http_errors;
  j["timed_out"] = r.timed_out;
  j["dropped_prefilter"] = r.dropped_prefilter;
  j["dropped_policy"] = r.dropped_policy;
  j["scale_lag_s"] = opt_json(r.scale_lag_s);
  j["time_to_stabilize_s"] = opt_json(r.time_to_stabilize_s);
  j["ingress_drop_fraction"] = opt_json(r.ingress_drop_fraction);
  ordered_json series = ordered_json::array();
  for (const LegitimacyPoint& p : r.legitimacy_series) {
    ordered_json pt;
    pt["tick"] = p.tick;
    pt["score"] = p.score;
    series.push_back(std::move(pt));
  }
  j["legitimacy_series"] = std::move(series);
  return j.dump(2);
}

MetricsReport report_from_json(const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  MetricsReport r;
  r.schema_version = j.at("schema_version").get<int>();
  r.scenario = j.at("scenario").get<std::string>();
  r.variant = j.at("variant").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.tick_len = j.at("tick_len").get<double>();
  r.duration_s = j.at("duration_s").get<double>();
  r.avg_pods = j.at("avg_pods").get<double>();
  r.peak_pods = j.at("peak_pods").get<int>();
  r.peak_desired = j.at("peak_desired").get<int>();
  r.timeout_rate_pct = j.at("timeout_rate_pct").get<double>();
  r.offered = j.at("offered").get<std::uint64_t>();
  r.admitted = j.at("admitted").get<std::uint64_t>();
  r.served_2xx = j.at("served_2xx").get<std::uint64_t>();
  r.http_errors = j.at("http_errors").get<std::uint64_t>();
  r.timed_out = j.at("timed_out").get<std::uint64_t>();
  r.dropped_prefilter = j.at("dropped_prefilter").get<std::uint64_t>();
  r.dropped_policy = j.at("dropped_policy").get<std::uint64_t>();
  r.scale_lag_s = opt_from(j.at("scale_lag_s"));
  r.time_to_stabilize_s = opt_from(j.at("time_to_stabilize_s"));
  r.ingress_drop_fraction = opt_from(j.at("ingress_drop_fraction"));
  for (const auto& pt : j.at("legitimacy_series"))
    r.legitimacy_series.push_back(LegitimacyPoint{
        pt.at("tick").get<Tick>(), pt.at("score").get<double>()});
  return r;
}

std::string to_csv(const MetricsReport& r) {
  std::ostringstream out;
  out << "scenario,variant,seed,tick_len,duration_s,avg_pods,peak_pods,"
         "peak_desired,timeout_rate_pct,offered,admitted,served_2xx,"
         "http_errors,timed_out,dropped_prefilter,dropped_policy,"
         "scale_lag_s,time_to_stabilize_s,ingress_drop_fraction\n";
  out << r.scenario << ',' << r.variant << ',' << r.seed << ','
      << num(r.tick_len) << ',' << num(r.duration_s) << ','
      << num(r.avg_pods) << ',' << r.peak_pods << ',' << r.peak_desired << ','
      << num(r.timeout_rate_pct) << ',' << r.offered << ',' << r.admitted
      << ',' << r.served_2xx << ',' << r.http_errors << ',' << r.timed_out
      << ',' << r.dropped_prefilter << ',' << r.dropped_policy << ','
      << opt_csv(r.scale_lag_s) << ',' << opt_csv(r.time_to_stabilize_s)
      << ',' << opt_csv(r.ingress_drop_fraction) << '\n';
  return out.str();
}

std::string to_json(const Comparison& cmp) {
  ordered_json j;
  j["label_a"] = cmp.label_a;
  j["label_b"] = cmp.label_b;
  ordered_json rows = ordered_json::array();
  for (const CompareRow& r : cmp.rows) {
    ordered_json row;
    row["metric"] = r.metric;
    row["a"] = opt_json(r.a);
    row["b"] = opt_json(r.b);
    row["delta_pct"] = opt_json(r.delta_pct);
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j.dump(2);
}

std::string to_text(const Comparison& cmp) {
  auto cell = [](const std::optional<double>& v) -> std::string {
    if (!v) return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", *v);
    return buf;
  };
  std::ostringstream out;
  out << "metric                      " << cmp.label_a << " -> " << cmp.label_b
      << "\n";
  for (const CompareRow& r : cmp.rows) {
    std::string delta = "n/a";
    if (r.delta_pct) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%+.1f%%", *r.delta_pct);
      delta = buf;
    }
    char line[256];
    std::snprintf(line, sizeof line, "%-26s %12s %12s %10s\n",
                  r.metric.c_str(), cell(r.a).c_str(), cell(r.b).c_str(),
                  delta.c_str());
    out << line;
  }
  return out.str();
}

}  // namespace scaleguard
