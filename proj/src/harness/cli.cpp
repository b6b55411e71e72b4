#include "hids/harness/cli.hpp"

#include <iostream>

#include <CLI11.hpp>

#include "hids/common/error.hpp"
#include "hids/harness/runner.hpp"

namespace hids::harness {
namespace {

void apply_overrides(ExperimentConfig& c, const std::string& report, const std::string& alerts,
                     const std::string& detector, const std::string& ablation) {
  if (!report.empty()) c.report_path = report;
  if (!alerts.empty()) c.alerts_path = alerts;
  if (!detector.empty()) {
    c.pipeline.detector.kind = drift::parse_detector_kind(detector);
    c.pipeline.signature.detector = c.pipeline.detector;
  }
  if (ablation == "frozen") {
    c.ablation = Ablation::Frozen;
  } else if (ablation == "none") {
    c.ablation = Ablation::None;
  } else if (!ablation.empty()) {
    throw ConfigError("--ablation must be 'none' or 'frozen'");
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Incremental hybrid network intrusion detection: prequential experiments"};
  app.name("hids");
  app.require_subcommand(1);

  std::string config_path;
  std::string report;
  std::string alerts;
  std::string detector;
  std::string ablation;
  bool json_out = false;

  auto* run = app.add_subcommand("run", "Run one experiment test-then-train");
  run->add_option("-c,--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("-r,--report", report, "Write the JSON report here");
  run->add_option("-a,--alerts", alerts, "Write alerts as NDJSON here");
  run->add_option("-d,--detector", detector, "Override drift_detection_method");
  run->add_option("--ablation", ablation, "none | frozen");
  run->add_flag("--json", json_out, "Print the JSON report instead of the table");

  std::string out_path;
  std::size_t length = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  auto* gen = app.add_subcommand("gen", "Write a synthetic drift stream as CSV");
  gen->add_option("-c,--config", config_path, "Experiment config with a synthetic source")
      ->required();
  gen->add_option("-o,--out", out_path, "Output CSV")->required();
  gen->add_option("-n,--length", length, "Override the stream length");
  gen->add_option("-s,--seed", seed, "Override the generator seed")
      ->each([&](const std::string&) { seed_set = true; });

  std::vector<std::string> detectors;
  auto* compare = app.add_subcommand("compare", "Run one config under each drift detector");
  compare->add_option("-c,--config", config_path, "Experiment config (JSON)")->required();
  compare->add_option("--detectors", detectors, "Detector names (default: all seven)")
      ->delimiter(',');
  compare->add_option("-r,--report", report, "Write the comparison as JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    auto config = load_experiment(config_path);
    if (*run) {
      apply_overrides(config, report, alerts, detector, ablation);
      const auto result = prequential_run(config);
      out << (json_out ? to_json(result).dump(2) + "\n" : render_report(result));
    } else if (*gen) {
      auto* synthetic = std::get_if<SyntheticSource>(&config.source);
      if (!synthetic) throw ConfigError("gen needs a config with a 'synthetic' source");
      if (length > 0) {
        if (synthetic->schedule.t1 == synthetic->length) synthetic->schedule.t1 = length;
        synthetic->length = length;
        synthetic->schedule.validate(length);
      }
      if (seed_set) synthetic->seed = seed;
      const auto samples = streams::gen_stream(synthetic->concept_a, synthetic->concept_b,
                                               synthetic->schedule, synthetic->length,
                                               synthetic->seed);
      streams::write_csv(out_path, samples);
      out << "wrote " << samples.size() << " records to " << out_path << "\n";
    } else if (*compare) {
      std::vector<drift::DetectorKind> kinds;
      for (const auto& d : detectors) kinds.push_back(drift::parse_detector_kind(d));
      if (kinds.empty()) kinds = drift::all_detector_kinds();
      const auto rows = compare_detectors(config, kinds);
      if (!report.empty()) {
        write_text_atomically(report, comparison_to_json(rows).dump(2) + "\n");
      }
      out << render_comparison(rows);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace hids::harness
