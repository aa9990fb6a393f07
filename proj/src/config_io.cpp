#include "scaleguard/config_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace scaleguard {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json mix_to_json(const TrafficMix& m) {
  ordered_json j;
  j["legit_fraction"] = m.legit_fraction;
  j["malformed_fraction"] = m.malformed_fraction;
  j["volumetric_fraction"] = m.volumetric_fraction;
  j["legit_sources"] = m.legit_sources;
  j["malformed_sources"] = m.malformed_sources;
  j["volumetric_sources"] = m.volumetric_sources;
  return j;
}

TrafficMix mix_from_json(const ordered_json& j) {
  TrafficMix m;
  m.legit_fraction = j.value("legit_fraction", m.legit_fraction);
  m.malformed_fraction = j.value("malformed_fraction", m.malformed_fraction);
  m.volumetric_fraction = j.value("volumetric_fraction", m.volumetric_fraction);
  m.legit_sources = j.value("legit_sources", m.legit_sources);
  m.malformed_sources = j.value("malformed_sources", m.malformed_sources);
  m.volumetric_sources = j.value("volumetric_sources", m.volumetric_sources);
  return m;
}

ordered_json profile_to_json(const TrafficProfile& p) {
  ordered_json j;
  j["model"] =
      p.model == ArrivalModel::deterministic ? "deterministic" : "poisson";
  ordered_json phases = ordered_json::array();
  for (const Phase& ph : p.phases) {
    ordered_json pj;
    pj["duration_s"] = ph.duration_s;
    pj["start_rate"] = ph.start_rate;
    pj["end_rate"] = ph.end_rate;
    pj["mix"] = mix_to_json(ph.mix);
    phases.push_back(std::move(pj));
  }
  j["phases"] = std::move(phases);
  return j;
}

TrafficProfile profile_from_json(const ordered_json& j,
                                 const std::string& section) {
  TrafficProfile p;
  const std::string model = j.value("model", "deterministic");
  if (model == "deterministic") {
    p.model = ArrivalModel::deterministic;
  } else if (model == "poisson") {
    p.model = ArrivalModel::poisson;
  } else {
    throw ValidationError(section + ".model must be deterministic or poisson, got '" +
                          model + "'");
  }
  if (j.contains("phases")) {
    for (const auto& pj : j.at("phases")) {
      Phase ph;
      ph.duration_s = pj.value("duration_s", ph.duration_s);
      ph.start_rate = pj.value("start_rate", ph.start_rate);
      ph.end_rate = pj.value("end_rate", ph.end_rate);
      if (pj.contains("mix")) ph.mix = mix_from_json(pj.at("mix"));
      p.phases.push_back(ph);
    }
  }
  return p;
}

const char* forecaster_name(Forecaster f) {
  return f == Forecaster::seasonal_naive ? "seasonal_naive" : "none";
}

Forecaster forecaster_from(const std::string& name) {
  if (name == "none") return Forecaster::none;
  if (name == "seasonal_naive") return Forecaster::seasonal_naive;
  throw ValidationError(
      "scaler.forecaster must be none or seasonal_naive, got '" + name + "'");
}

}  // namespace

std::string config_to_json(const SimConfig& cfg) {
  ordered_json j;
  ordered_json sim;
  sim["tick_len"] = cfg.tick_len;
  sim["duration_s"] = cfg.duration_s;
  sim["seed"] = cfg.seed;
  sim["control_interval_s"] = cfg.control_interval_s;
  sim["gate_enabled"] = cfg.gate_enabled;
  sim["prefilter_enabled"] = cfg.prefilter_enabled;
  sim["initial_replicas"] = cfg.initial_replicas;
  sim["scenario"] = cfg.scenario;
  sim["variant"] = cfg.variant;
  j["sim"] = std::move(sim);

  j["profile"] = profile_to_json(cfg.profile);
  if (cfg.warmup) j["warmup"] = profile_to_json(*cfg.warmup);

  ordered_json pre;
  pre["bucket_rate"] = cfg.prefilter.bucket_rate;
  pre["bucket_burst"] = cfg.prefilter.bucket_burst;
  pre["volumetric_threshold"] = cfg.prefilter.volumetric_threshold;
  pre["blocklist_ttl_s"] = cfg.prefilter.blocklist_ttl_s;
  pre["error_threshold"] = cfg.prefilter.error_threshold;
  pre["feedback_window_s"] = cfg.prefilter.feedback_window_s;
  j["prefilter"] = std::move(pre);

  ordered_json l7;
  l7["enabled"] = cfg.l7.enabled;
  l7["rate"] = cfg.l7.rate;
  l7["burst"] = cfg.l7.burst;
  j["l7"] = std::move(l7);

  ordered_json tele;
  tele["rps_window_s"] = cfg.telemetry.rps_window_s;
  tele["legitimacy_window_s"] = cfg.telemetry.legitimacy_window_s;
  tele["count_policy_denials"] = cfg.telemetry.count_policy_denials;
  j["telemetry"] = std::move(tele);

  ordered_json sc;
  sc["rps_per_pod"] = cfg.scaler.rps_per_pod;
  sc["min_replicas"] = cfg.scaler.min_replicas;
  sc["max_replicas"] = cfg.scaler.max_replicas;
  sc["legitimacy_threshold"] = cfg.scaler.legitimacy_threshold;
  sc["prediction_window_s"] = cfg.scaler.prediction_window_s;
  sc["scale_down_stabilization_s"] = cfg.scaler.scale_down_stabilization_s;
  sc["forecaster"] = forecaster_name(cfg.scaler.forecaster);
  sc["season_len_s"] = cfg.scaler.season_len_s;
  j["scaler"] = std::move(sc);

  ordered_json pod;
  pod["startup_delay_s"] = cfg.pod.startup_delay_s;
  pod["capacity_rps"] = cfg.pod.capacity_rps;
  pod["datapath_convergence_s"] = cfg.pod.datapath_convergence_s;
  pod["request_timeout_s"] = cfg.pod.request_timeout_s;
  j["pod"] = std::move(pod);

  return j.dump(2) + "\n";
}

SimConfig config_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") +
                          e.what());
  }
  SimConfig cfg;
  if (j.contains("sim")) {
    const auto& sim = j.at("sim");
    cfg.tick_len = sim.value("tick_len", cfg.tick_len);
    cfg.duration_s = sim.value("duration_s", cfg.duration_s);
    cfg.seed = sim.value("seed", cfg.seed);
    cfg.control_interval_s =
        sim.value("control_interval_s", cfg.control_interval_s);
    cfg.gate_enabled = sim.value("gate_enabled", cfg.gate_enabled);
    cfg.prefilter_enabled =
        sim.value("prefilter_enabled", cfg.prefilter_enabled);
    cfg.initial_replicas = sim.value("initial_replicas", cfg.initial_replicas);
    cfg.scenario = sim.value("scenario", cfg.scenario);
    cfg.variant = sim.value("variant", cfg.variant);
  }
  if (j.contains("profile"))
    cfg.profile = profile_from_json(j.at("profile"), "profile");
  if (j.contains("warmup"))
    cfg.warmup = profile_from_json(j.at("warmup"), "warmup");
  if (j.contains("prefilter")) {
    const auto& pre = j.at("prefilter");
    cfg.prefilter.bucket_rate =
        pre.value("bucket_rate", cfg.prefilter.bucket_rate);
    cfg.prefilter.bucket_burst =
        pre.value("bucket_burst", cfg.prefilter.bucket_burst);
    cfg.prefilter.volumetric_threshold =
        pre.value("volumetric_threshold", cfg.prefilter.volumetric_threshold);
    cfg.prefilter.blocklist_ttl_s =
        pre.value("blocklist_ttl_s", cfg.prefilter.blocklist_ttl_s);
    cfg.prefilter.error_threshold =
        pre.value("error_threshold", cfg.prefilter.error_threshold);
    cfg.prefilter.feedback_window_s =
        pre.value("feedback_window_s", cfg.prefilter.feedback_window_s);
  }
  if (j.contains("l7")) {
    const auto& l7 = j.at("l7");
    cfg.l7.enabled = l7.value("enabled", cfg.l7.enabled);
    cfg.l7.rate = l7.value("rate", cfg.l7.rate);
    cfg.l7.burst = l7.value("burst", cfg.l7.burst);
  }
  if (j.contains("telemetry")) {
    const auto& tele = j.at("telemetry");
    cfg.telemetry.rps_window_s =
        tele.value("rps_window_s", cfg.telemetry.rps_window_s);
    cfg.telemetry.legitimacy_window_s =
        tele.value("legitimacy_window_s", cfg.telemetry.legitimacy_window_s);
    cfg.telemetry.count_policy_denials = tele.value(
        "count_policy_denials", cfg.telemetry.count_policy_denials);
  }
  if (j.contains("scaler")) {
    const auto& sc = j.at("scaler");
    cfg.scaler.rps_per_pod = sc.value("rps_per_pod", cfg.scaler.rps_per_pod);
    cfg.scaler.min_replicas =
        sc.value("min_replicas", cfg.scaler.min_replicas);
    cfg.scaler.max_replicas =
        sc.value("max_replicas", cfg.scaler.max_replicas);
    cfg.scaler.legitimacy_threshold =
        sc.value("legitimacy_threshold", cfg.scaler.legitimacy_threshold);
    cfg.scaler.prediction_window_s =
        sc.value("prediction_window_s", cfg.scaler.prediction_window_s);
    cfg.scaler.scale_down_stabilization_s = sc.value(
        "scale_down_stabilization_s", cfg.scaler.scale_down_stabilization_s);
    if (sc.contains("forecaster"))
      cfg.scaler.forecaster =
          forecaster_from(sc.at("forecaster").get<std::string>());
    cfg.scaler.season_len_s =
        sc.value("season_len_s", cfg.scaler.season_len_s);
  }
  if (j.contains("pod")) {
    const auto& pod = j.at("pod");
    cfg.pod.startup_delay_s =
        pod.value("startup_delay_s", cfg.pod.startup_delay_s);
    cfg.pod.capacity_rps = pod.value("capacity_rps", cfg.pod.capacity_rps);
    cfg.pod.datapath_convergence_s = pod.value(
        "datapath_convergence_s", cfg.pod.datapath_convergence_s);
    cfg.pod.request_timeout_s =
        pod.value("request_timeout_s", cfg.pod.request_timeout_s);
  }
  return cfg;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str());
}

}  // namespace scaleguard
