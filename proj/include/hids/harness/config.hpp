#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hids/anomaly/ocsvm.hpp"
#include "hids/distdrift/kdq_tree.hpp"
#include "hids/drift/factory.hpp"
#include "hids/flowdata/flow_record.hpp"
#include "hids/pipeline/pipeline.hpp"
#include "hids/signature/arf.hpp"
#include "hids/streams/generator.hpp"

namespace hids::harness {

struct FeatureSelectionConfig {
  bool enabled = false;
  std::size_t k = 7;
  // Records used to rank features; also capped by the file length.
  std::size_t warmup = 10000;
};

struct DatasetSource {
  std::string name;
  std::filesystem::path path;
  flowdata::StreamSchema schema;
  FeatureSelectionConfig feature_selection;
};

struct SyntheticSource {
  streams::ConceptSpec concept_a;
  streams::ConceptSpec concept_b;
  streams::DriftSchedule schedule;
  std::size_t length = 0;
  std::uint64_t seed = 0;
};

struct PipelineConfig {
  drift::DetectorConfig detector{};
  // Per-model drift detectors on or off.
  bool drift_detection = true;
  signature::ArfParams signature{};
  anomaly::OcSvmParams anomaly{};
  // Replaces the per-model detectors when set.
  std::optional<distdrift::DistDriftConfig> distribution_drift;
  pipeline::ColdStartPolicy cold_start = pipeline::ColdStartPolicy::Benign;
  pipeline::AnomalyTraining anomaly_training = pipeline::AnomalyTraining::LabeledBenign;
};

enum class Ablation {
  None,
  // All drift detection off and learning frozen after a prefix of the stream.
  Frozen,
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::variant<DatasetSource, SyntheticSource> source;
  PipelineConfig pipeline;
  std::uint64_t seed = 1;
  Ablation ablation = Ablation::None;
  double frozen_fraction = 0.2;
  std::size_t window_stride = 1000;
  // 0 = whole stream.
  std::size_t max_records = 0;
  std::optional<std::filesystem::path> report_path;
  std::optional<std::filesystem::path> alerts_path;
  // Wall-clock fields make reports non-reproducible, so they are opt-in.
  bool include_timing = false;
  nlohmann::json echo;

  void validate() const;
};

// Parses an experiment. A "dataset_config" key names a dataset file whose
// fields are merged under the inline "dataset" block; relative paths there
// resolve against `base_dir`.
ExperimentConfig parse_experiment(const nlohmann::json& j,
                                  const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment(const std::filesystem::path& path);

DatasetSource parse_dataset(const nlohmann::json& j);
SyntheticSource parse_synthetic(const nlohmann::json& j, std::uint64_t default_seed);
streams::ConceptSpec parse_concept(const nlohmann::json& j);
PipelineConfig parse_pipeline(const nlohmann::json& j, std::uint64_t seed);

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace hids::harness
