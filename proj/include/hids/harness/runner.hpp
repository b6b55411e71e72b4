#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hids/flowdata/csv_reader.hpp"
#include "hids/flowdata/preprocess.hpp"
#include "hids/harness/config.hpp"
#include "hids/harness/metrics.hpp"
#include "hids/pipeline/pipeline.hpp"

namespace hids::harness {

using flowdata::FeatureVector;

// Unscaled labeled records in stream order.
class RecordSource {
 public:
  virtual ~RecordSource() = default;
  virtual std::optional<FeatureVector> next() = 0;
  virtual std::size_t dimension() const = 0;
  // Rows dropped by the skip-and-count policy.
  virtual std::size_t skipped_rows() const { return 0; }
  // Records the source will yield, when known in advance.
  virtual std::optional<std::size_t> length_hint() const { return std::nullopt; }
  virtual std::vector<std::string> feature_names() const { return {}; }
};

class VectorSource final : public RecordSource {
 public:
  explicit VectorSource(std::vector<FeatureVector> records);
  std::optional<FeatureVector> next() override;
  std::size_t dimension() const override { return dimension_; }
  std::optional<std::size_t> length_hint() const override { return records_.size(); }

 private:
  std::vector<FeatureVector> records_;
  std::size_t next_ = 0;
  std::size_t dimension_ = 0;
};

class SyntheticSourceReader final : public RecordSource {
 public:
  explicit SyntheticSourceReader(const SyntheticSource& source);
  std::optional<FeatureVector> next() override;
  std::size_t dimension() const override { return generator_.dimension(); }
  std::optional<std::size_t> length_hint() const override { return generator_.length(); }

 private:
  streams::StreamGenerator generator_;
};

// CSV replay with preprocessing and optional feature selection over a
// buffered warmup prefix. Malformed rows are skipped and counted.
class CsvSource final : public RecordSource {
 public:
  explicit CsvSource(const DatasetSource& source);
  std::optional<FeatureVector> next() override;
  std::size_t dimension() const override;
  std::size_t skipped_rows() const override { return skipped_; }
  std::optional<std::size_t> length_hint() const override { return rows_ - skipped_; }
  std::vector<std::string> feature_names() const override;
  const std::vector<std::size_t>& selected_features() const { return selected_; }
  const std::vector<std::string>& row_errors() const { return row_errors_; }

 private:
  std::optional<FeatureVector> read();

  flowdata::FlowCsvReader reader_;
  flowdata::Preprocessor preprocessor_;
  std::vector<std::size_t> selected_;
  std::vector<FeatureVector> buffered_;
  std::size_t buffered_next_ = 0;
  std::size_t skipped_ = 0;
  std::size_t rows_ = 0;
  std::vector<std::string> row_errors_;
};

std::unique_ptr<RecordSource> open_source(const ExperimentConfig& config);

struct EvaluationOptions {
  std::size_t window_stride = 1000;
  // Learning (including the scaler) stops after this many records.
  std::optional<std::size_t> freeze_after;
  // 0 = until the source is exhausted.
  std::size_t max_records = 0;
  bool scale = true;
  bool keep_verdicts = false;
};

struct EvaluationResult {
  PrequentialMetrics metrics;
  std::vector<WindowMetrics> windows;
  std::size_t records = 0;
  std::vector<pipeline::VerdictKind> verdicts;
};

// Test-then-train loop: scale -> process -> score against the label -> update.
EvaluationResult prequential_evaluate(pipeline::StreamModel& model, RecordSource& source,
                                      const EvaluationOptions& options);

// adaptive = false disables every drift detector.
std::unique_ptr<pipeline::HybridPipeline> build_pipeline(const PipelineConfig& config,
                                                         std::size_t dimension, bool adaptive);

struct RunReport {
  std::string name;
  std::string mode;
  std::string detector;
  std::size_t records = 0;
  std::size_t skipped_rows = 0;
  // First few skipped-row messages, with line numbers.
  std::vector<std::string> row_errors;
  std::size_t alerts = 0;
  PrequentialMetrics metrics;
  std::vector<WindowMetrics> windows;
  std::vector<pipeline::DriftEvent> drift_events;
  std::vector<std::string> selected_features;
  std::optional<double> wall_seconds;
  nlohmann::json config;
};

// Runs one experiment; writes the report (and alert log) when the config
// names paths.
RunReport prequential_run(const ExperimentConfig& config);

nlohmann::json to_json(const PrequentialMetrics& m);
nlohmann::json to_json(const RunReport& report);
std::string render_report(const RunReport& report);
// Writes via a temporary file so a failed run never leaves a partial report.
void write_text_atomically(const std::filesystem::path& path, const std::string& text);
void write_report(const RunReport& report, const std::filesystem::path& path);

struct ComparisonRow {
  std::string technique;
  RunReport report;
};

// Runs the experiment once per detector (in parallel). Per-run report and
// alert paths are ignored.
std::vector<ComparisonRow> compare_detectors(const ExperimentConfig& config,
                                             std::span<const drift::DetectorKind> kinds);
std::string render_comparison(std::span<const ComparisonRow> rows);
nlohmann::json comparison_to_json(std::span<const ComparisonRow> rows);

}  // namespace hids::harness
