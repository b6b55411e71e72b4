#include "hids/harness/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

#include "hids/common/error.hpp"
#include "hids/flowdata/feature_selection.hpp"

namespace hids::harness {
namespace {

using nlohmann::json;

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string table_row(const std::string& tech, const PrequentialMetrics& m) {
  return tech + " | " + fixed4(m.accuracy) + " | " + fixed4(m.recall) + " | " +
         fixed4(m.precision) + " | " + fixed4(m.f1) + "\n";
}

constexpr const char* kTableHeader = "Tech | Accuracy | Recall | Precision | F1\n";

}  // namespace

VectorSource::VectorSource(std::vector<FeatureVector> records) : records_(std::move(records)) {
  if (!records_.empty()) dimension_ = records_.front().dimension();
}

std::optional<FeatureVector> VectorSource::next() {
  if (next_ >= records_.size()) return std::nullopt;
  return records_[next_++];
}

SyntheticSourceReader::SyntheticSourceReader(const SyntheticSource& source)
    : generator_(source.concept_a, source.concept_b, source.schedule, source.length, source.seed) {}

std::optional<FeatureVector> SyntheticSourceReader::next() {
  if (generator_.done()) return std::nullopt;
  return generator_.next().sample;
}

CsvSource::CsvSource(const DatasetSource& source)
    : reader_(source.path, source.schema), preprocessor_(reader_.schema()) {
  rows_ = flowdata::count_rows(source.path);
  if (!source.feature_selection.enabled) return;
  const auto& fs = source.feature_selection;
  while (buffered_.size() < fs.warmup) {
    auto v = read();
    if (!v) break;
    buffered_.push_back(std::move(*v));
  }
  if (buffered_.empty()) throw Error("dataset '" + source.path.string() + "' has no usable rows");
  selected_ = flowdata::select_features(buffered_, fs.k);
  for (auto& v : buffered_) v = flowdata::project(v, selected_);
}

std::optional<FeatureVector> CsvSource::read() {
  for (;;) {
    try {
      auto record = reader_.next();
      if (!record) return std::nullopt;
      return preprocessor_(*record);
    } catch (const flowdata::RowError& e) {
      ++skipped_;
      if (row_errors_.size() < 20) row_errors_.push_back(e.what());
    }
  }
}

std::optional<FeatureVector> CsvSource::next() {
  if (buffered_next_ < buffered_.size()) {
    auto v = std::move(buffered_[buffered_next_++]);
    if (buffered_next_ == buffered_.size()) {
      buffered_.clear();
      buffered_.shrink_to_fit();
      buffered_next_ = 0;
    }
    return v;
  }
  auto v = read();
  if (v && !selected_.empty()) return flowdata::project(*v, selected_);
  return v;
}

std::size_t CsvSource::dimension() const {
  return selected_.empty() ? preprocessor_.dimension() : selected_.size();
}

std::vector<std::string> CsvSource::feature_names() const {
  const auto& all = preprocessor_.feature_names();
  if (selected_.empty()) return all;
  std::vector<std::string> out;
  for (const auto i : selected_) out.push_back(all[i]);
  return out;
}

std::unique_ptr<RecordSource> open_source(const ExperimentConfig& config) {
  if (const auto* d = std::get_if<DatasetSource>(&config.source)) {
    if (!std::filesystem::exists(d->path)) {
      throw Error("dataset file '" + d->path.string() + "' does not exist");
    }
    return std::make_unique<CsvSource>(*d);
  }
  return std::make_unique<SyntheticSourceReader>(std::get<SyntheticSource>(config.source));
}

EvaluationResult prequential_evaluate(pipeline::StreamModel& model, RecordSource& source,
                                      const EvaluationOptions& options) {
  EvaluationResult result;
  WindowedMetrics windows(options.window_stride);
  ConfusionCounts counts;
  std::optional<flowdata::RunningScaler> scaler;
  if (options.scale) scaler.emplace(source.dimension());
  bool frozen = false;

  while (options.max_records == 0 || result.records < options.max_records) {
    if (!frozen && options.freeze_after && result.records >= *options.freeze_after) {
      model.freeze();
      frozen = true;
    }
    auto record = source.next();
    if (!record) break;
    check_dimension(source.dimension(), record->dimension());
    if (scaler) record->x = scaler->transform(record->x, !frozen);

    const auto verdict = model.process(*record);
    counts.add(verdict.is_attack(), record->y);
    windows.add(verdict.is_attack(), record->y);
    if (options.keep_verdicts) result.verdicts.push_back(verdict.kind);
    model.update(*record, verdict);
    ++result.records;
  }
  windows.finish();
  result.metrics = compute_metrics(counts);
  result.windows = windows.windows();
  return result;
}

std::unique_ptr<pipeline::HybridPipeline> build_pipeline(const PipelineConfig& config,
                                                         std::size_t dimension, bool adaptive) {
  const bool kdq = adaptive && config.distribution_drift.has_value();
  const bool per_model = adaptive && config.drift_detection && !kdq;

  auto sig = config.signature;
  sig.detector = config.detector;
  sig.drift_detection = per_model;
  std::optional<drift::DetectorConfig> monitor;
  if (per_model) monitor = config.detector;

  pipeline::PipelineOptions options;
  options.cold_start = config.cold_start;
  options.anomaly_training = config.anomaly_training;
  if (kdq) options.distribution_drift = config.distribution_drift;

  return std::make_unique<pipeline::HybridPipeline>(
      std::make_unique<pipeline::ArfSignatureStage>(dimension, sig),
      std::make_unique<pipeline::OcSvmAnomalyStage>(dimension, config.anomaly, monitor), options);
}

RunReport prequential_run(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  auto source = open_source(config);
  const bool adaptive = config.ablation == Ablation::None;
  auto model = build_pipeline(config.pipeline, source->dimension(), adaptive);

  std::ofstream alerts;
  if (config.alerts_path) {
    if (config.alerts_path->has_parent_path()) {
      std::filesystem::create_directories(config.alerts_path->parent_path());
    }
    alerts.open(*config.alerts_path, std::ios::binary | std::ios::trunc);
    if (!alerts) throw Error("cannot write alert log '" + config.alerts_path->string() + "'");
    model->set_alert_sink([&alerts](const pipeline::Alert& a) {
      json line{{"index", a.index},
                {"kind", pipeline::to_string(a.kind)},
                {"signature_score", a.signature_score},
                {"anomaly_score", optional_number(a.anomaly_score)}};
      if (a.timestamp_ns) line["timestamp_ns"] = *a.timestamp_ns;
      alerts << line.dump() << '\n';
    });
  }

  EvaluationOptions options;
  options.window_stride = config.window_stride;
  options.max_records = config.max_records;
  if (!adaptive) {
    auto n = source->length_hint();
    if (!n) throw Error("frozen ablation needs a stream of known length");
    if (config.max_records > 0) n = std::min(*n, config.max_records);
    options.freeze_after =
        static_cast<std::size_t>(std::floor(config.frozen_fraction * static_cast<double>(*n)));
  }
  const auto result = prequential_evaluate(*model, *source, options);

  RunReport report;
  report.name = config.name;
  report.mode = adaptive ? "adaptive" : "frozen";
  if (!adaptive) {
    report.detector = "none";
  } else if (config.pipeline.distribution_drift) {
    report.detector = "kdq-tree";
  } else if (config.pipeline.drift_detection) {
    report.detector = std::string(drift::detector_label(config.pipeline.detector.kind));
  } else {
    report.detector = "none";
  }
  report.records = result.records;
  report.skipped_rows = source->skipped_rows();
  report.alerts = model->alert_count();
  report.metrics = result.metrics;
  report.windows = result.windows;
  report.drift_events = model->drift_events();
  if (const auto* csv = dynamic_cast<const CsvSource*>(source.get())) {
    report.row_errors = csv->row_errors();
    if (!csv->selected_features().empty()) report.selected_features = csv->feature_names();
  }
  report.config = config.echo;
  if (config.include_timing) {
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  if (config.report_path) write_report(report, *config.report_path);
  return report;
}

nlohmann::json to_json(const PrequentialMetrics& m) {
  json undefined = json::array();
  if (m.accuracy_undefined) undefined.push_back("accuracy");
  if (m.recall_undefined) undefined.push_back("recall");
  if (m.precision_undefined) undefined.push_back("precision");
  if (m.f1_undefined) undefined.push_back("f1");
  return json{{"accuracy", m.accuracy},   {"recall", m.recall},   {"precision", m.precision},
              {"f1", m.f1},               {"tp", m.counts.tp},    {"fp", m.counts.fp},
              {"tn", m.counts.tn},        {"fn", m.counts.fn},    {"undefined", undefined}};
}

nlohmann::json to_json(const RunReport& r) {
  json windows = json::array();
  for (const auto& w : r.windows) {
    auto entry = to_json(w.metrics);
    entry["first"] = w.first_index;
    entry["last"] = w.end_index;
    windows.push_back(std::move(entry));
  }
  json events = json::array();
  for (const auto& e : r.drift_events) {
    json entry{{"step", e.step},
               {"module", e.module},
               {"detector", e.detector},
               {"status", drift::to_string(e.status)}};
    if (e.tree) entry["tree"] = *e.tree;
    events.push_back(std::move(entry));
  }
  json out{{"name", r.name},
           {"mode", r.mode},
           {"detector", r.detector},
           {"records", r.records},
           {"skipped_rows", r.skipped_rows},
           {"row_errors", r.row_errors},
           {"alerts", r.alerts},
           {"metrics", to_json(r.metrics)},
           {"windows", std::move(windows)},
           {"drift_events", std::move(events)},
           {"selected_features", r.selected_features},
           {"config", r.config}};
  if (r.wall_seconds) out["wall_seconds"] = *r.wall_seconds;
  return out;
}

std::string render_report(const RunReport& r) {
  std::ostringstream out;
  std::size_t drifts = 0;
  std::size_t warnings = 0;
  for (const auto& e : r.drift_events) {
    ++(e.status == drift::DriftStatus::Drift ? drifts : warnings);
  }
  out << "Run: " << r.name << " (" << r.mode << ", detector " << r.detector << ")\n";
  out << "Records: " << r.records << "  skipped rows: " << r.skipped_rows
      << "  alerts: " << r.alerts << "  drifts: " << drifts << "  warnings: " << warnings << "\n";
  if (!r.selected_features.empty()) {
    out << "Features:";
    for (const auto& f : r.selected_features) out << " [" << f << "]";
    out << "\n";
  }
  if (r.wall_seconds) out << "Wall clock: " << fixed4(*r.wall_seconds) << " s\n";
  out << kTableHeader << table_row(r.detector, r.metrics);
  return out.str();
}

void write_text_atomically(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << text;
    if (!out) throw Error("failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

void write_report(const RunReport& report, const std::filesystem::path& path) {
  write_text_atomically(path, to_json(report).dump(2) + "\n");
}

std::vector<ComparisonRow> compare_detectors(const ExperimentConfig& config,
                                             std::span<const drift::DetectorKind> kinds) {
  std::vector<std::future<RunReport>> runs;
  for (const auto kind : kinds) {
    ExperimentConfig c = config;
    c.ablation = Ablation::None;
    c.pipeline.distribution_drift.reset();
    c.pipeline.drift_detection = true;
    c.pipeline.detector.kind = kind;
    c.pipeline.signature.detector = c.pipeline.detector;
    c.report_path.reset();
    c.alerts_path.reset();
    runs.push_back(std::async(std::launch::async, [c] { return prequential_run(c); }));
  }
  std::vector<ComparisonRow> rows;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    rows.push_back({std::string(drift::detector_label(kinds[i])), runs[i].get()});
  }
  return rows;
}

std::string render_comparison(std::span<const ComparisonRow> rows) {
  std::string out = kTableHeader;
  for (const auto& row : rows) out += table_row(row.technique, row.report.metrics);
  return out;
}

nlohmann::json comparison_to_json(std::span<const ComparisonRow> rows) {
  json out = json::array();
  for (const auto& row : rows) {
    auto entry = to_json(row.report.metrics);
    entry["technique"] = row.technique;
    entry["records"] = row.report.records;
    entry["drift_events"] = row.report.drift_events.size();
    out.push_back(std::move(entry));
  }
  return json{{"comparison", std::move(out)}};
}

}  // namespace hids::harness
