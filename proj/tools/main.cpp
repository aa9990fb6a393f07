// Command-line front end: run a config file or a canned scenario and emit
// the metrics report, or compare two saved reports.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "scaleguard/config_io.hpp"
#include "scaleguard/engine.hpp"
#include "scaleguard/report.hpp"

namespace {

using namespace scaleguard;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw ValidationError("cannot write to " + out_path);
  out << text;
}

std::string render_report(const MetricsReport& rep, const std::string& format) {
  if (format == "json") return to_json(rep);
  if (format == "csv") return to_csv(rep);
  throw ValidationError("report format must be json or csv, got '" + format +
                        "'");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scaleguard: three-tier ingress defense and autoscaling simulator"};
  app.require_subcommand(1);

  std::string out_path;
  const std::string out_help = "Write output to this file instead of stdout";

  // run
  auto* run_cmd = app.add_subcommand("run", "Run a simulation config file");
  run_cmd->add_option("--out", out_path, out_help);
  std::string config_path;
  std::string run_format = "json";
  std::optional<std::uint64_t> seed_override;
  run_cmd->add_option("config", config_path, "Path to a config JSON file")
      ->required();
  run_cmd->add_option("--format", run_format, "json | csv")
      ->capture_default_str();
  run_cmd->add_option("--seed", seed_override, "Override the config's seed");

  // scenario
  auto* scen_cmd = app.add_subcommand("scenario", "Run a canned scenario");
  std::string scen_name;
  std::string scen_variant;
  std::string scen_format = "json";
  bool dump_config = false;
  std::optional<std::uint64_t> scen_seed;
  scen_cmd->add_option("name", scen_name, "flash_crowd | mixed_attack")
      ->required();
  scen_cmd->add_option("--variant", scen_variant,
                       "flash_crowd: reactive|predictive; "
                       "mixed_attack: unprotected|protected")
      ->required();
  scen_cmd->add_option("--format", scen_format, "json | csv")
      ->capture_default_str();
  scen_cmd->add_option("--seed", scen_seed, "Override the scenario seed");
  scen_cmd->add_flag("--dump-config", dump_config,
                     "Print the scenario's config JSON instead of running");
  scen_cmd->add_option("--out", out_path, out_help);

  // compare
  auto* cmp_cmd =
      app.add_subcommand("compare", "Compare two saved report JSON files");
  std::string path_a;
  std::string path_b;
  std::string cmp_format = "text";
  cmp_cmd->add_option("a", path_a, "Baseline report JSON")->required();
  cmp_cmd->add_option("b", path_b, "Candidate report JSON")->required();
  cmp_cmd->add_option("--format", cmp_format, "text | json")
      ->capture_default_str();
  cmp_cmd->add_option("--out", out_path, out_help);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      SimConfig cfg = load_config(config_path);
      if (seed_override) cfg.seed = *seed_override;
      emit(render_report(compute(run(cfg)), run_format), out_path);
    } else if (*scen_cmd) {
      SimConfig cfg = scenario_config(scen_name, scen_variant);
      if (scen_seed) cfg.seed = *scen_seed;
      if (dump_config) {
        emit(config_to_json(cfg), out_path);
      } else {
        emit(render_report(compute(run(cfg)), scen_format), out_path);
      }
    } else if (*cmp_cmd) {
      const MetricsReport a = report_from_json(slurp(path_a));
      const MetricsReport b = report_from_json(slurp(path_b));
      const Comparison cmp = compare(a, b);
      if (cmp_format == "json") {
        emit(to_json(cmp), out_path);
      } else if (cmp_format == "text") {
        emit(to_text(cmp), out_path);
      } else {
        throw ValidationError("compare format must be text or json, got '" +
                              cmp_format + "'");
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
