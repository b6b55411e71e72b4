#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hids/anomaly/ocsvm.hpp"
#include "hids/distdrift/kdq_tree.hpp"
#include "hids/drift/factory.hpp"
#include "hids/flowdata/flow_record.hpp"
#include "hids/signature/arf.hpp"

namespace hids::pipeline {

using flowdata::FeatureVector;

enum class VerdictKind { Benign, KnownAttack, UnknownAttack };

std::string_view to_string(VerdictKind kind);

struct Verdict {
  VerdictKind kind = VerdictKind::Benign;
  double signature_score = 0.0;
  // Present iff the anomaly stage was consulted and had a fitted model.
  std::optional<double> anomaly_score;
  // The anomaly stage was consulted but had no model yet.
  bool cold_start = false;

  bool is_attack() const { return kind != VerdictKind::Benign; }
};

struct Alert {
  std::size_t index = 0;
  VerdictKind kind = VerdictKind::KnownAttack;
  double signature_score = 0.0;
  std::optional<double> anomaly_score;
  // Wall-clock time of processing (ns since epoch), when timing is enabled.
  std::optional<std::int64_t> timestamp_ns;
};

struct DriftEvent {
  // 1-based record index.
  std::size_t step = 0;
  std::string module;
  std::string detector;
  drift::DriftStatus status = drift::DriftStatus::Drift;
  // Tree slot for signature-module events.
  std::optional<std::size_t> tree;

  bool operator==(const DriftEvent&) const = default;
};

// Anything that can be run test-then-train over a labeled stream.
class StreamModel {
 public:
  virtual ~StreamModel() = default;
  virtual Verdict process(const FeatureVector& x) = 0;
  virtual void update(const FeatureVector& x, const Verdict& verdict) = 0;
  virtual const std::vector<DriftEvent>& drift_events() const = 0;
  // Stops all further learning; models without a notion of learning ignore it.
  virtual void freeze() {}
};

// First stage: known-attack classifier learning from labeled data.
class SignatureStage {
 public:
  virtual ~SignatureStage() = default;
  virtual signature::Vote predict(std::span<const double> x) = 0;
  // Learns one labeled record and returns the detector signals it raised.
  virtual std::vector<signature::TreeEvent> learn(std::span<const double> x, int y) = 0;
  virtual void reset() = 0;
  virtual std::string detector_name() const = 0;
};

// Second stage: one-class model of normal traffic.
class AnomalyStage {
 public:
  virtual ~AnomalyStage() = default;
  // nullopt while unfitted; otherwise the decision score (< 0 is anomalous).
  virtual std::optional<double> score(std::span<const double> x) = 0;
  virtual void learn(std::span<const double> x) = 0;
  virtual drift::DriftStatus observe_outcome(bool flagged_anomalous, int y) = 0;
  virtual void reset() = 0;
  virtual std::string detector_name() const = 0;
};

class ArfSignatureStage final : public SignatureStage {
 public:
  ArfSignatureStage(std::size_t dimension, signature::ArfParams params);

  signature::Vote predict(std::span<const double> x) override { return forest_.predict(x); }
  std::vector<signature::TreeEvent> learn(std::span<const double> x, int y) override {
    return forest_.learn(x, y);
  }
  void reset() override { forest_.reset(); }
  std::string detector_name() const override;

  const signature::AdaptiveRandomForest& forest() const { return forest_; }

 private:
  signature::AdaptiveRandomForest forest_;
};

class OcSvmAnomalyStage final : public AnomalyStage {
 public:
  OcSvmAnomalyStage(std::size_t dimension, anomaly::OcSvmParams params,
                    std::optional<drift::DetectorConfig> monitor);

  std::optional<double> score(std::span<const double> x) override;
  void learn(std::span<const double> x) override { model_.learn(x); }
  drift::DriftStatus observe_outcome(bool flagged_anomalous, int y) override {
    return model_.observe_outcome(flagged_anomalous, y);
  }
  void reset() override { model_.reset(); }
  std::string detector_name() const override { return detector_; }

  const anomaly::AdaptiveOcSvm& model() const { return model_; }

 private:
  anomaly::AdaptiveOcSvm model_;
  std::string detector_;
};

enum class ColdStartPolicy { Benign, UnknownAttack };

// Which records the anomaly stage learns from.
enum class AnomalyTraining {
  // Ground-truth benign records (prequential evaluation).
  LabeledBenign,
  // Records the whole cascade judged benign (deployment).
  PredictedBenign,
};

struct PipelineOptions {
  ColdStartPolicy cold_start = ColdStartPolicy::Benign;
  AnomalyTraining anomaly_training = AnomalyTraining::LabeledBenign;
  // When set, a kdq-tree detector over the feature vectors replaces the
  // per-model detectors: on Drift both stages restart and retrain on what
  // follows.
  std::optional<distdrift::DistDriftConfig> distribution_drift;
  bool record_timestamps = false;
};

// Signature -> anomaly cascade. Known attacks skip the anomaly stage.
class HybridPipeline final : public StreamModel {
 public:
  using AlertSink = std::function<void(const Alert&)>;

  HybridPipeline(std::unique_ptr<SignatureStage> signature, std::unique_ptr<AnomalyStage> anomaly,
                 PipelineOptions options = {});

  Verdict process(const FeatureVector& x) override;
  void update(const FeatureVector& x, const Verdict& verdict) override;
  const std::vector<DriftEvent>& drift_events() const override { return events_; }

  // Stops all learning and drift monitoring from now on.
  void freeze() override { frozen_ = true; }
  bool frozen() const { return frozen_; }

  void set_alert_sink(AlertSink sink) { sink_ = std::move(sink); }
  std::size_t alert_count() const { return alerts_; }
  std::size_t anomaly_invocations() const { return anomaly_invocations_; }
  std::size_t processed() const { return processed_; }

  SignatureStage& signature() { return *signature_; }
  AnomalyStage& anomaly() { return *anomaly_; }
  const distdrift::KdqDriftDetector* distribution_detector() const {
    return kdq_ ? &*kdq_ : nullptr;
  }

 private:
  std::unique_ptr<SignatureStage> signature_;
  std::unique_ptr<AnomalyStage> anomaly_;
  PipelineOptions options_;
  std::optional<distdrift::KdqDriftDetector> kdq_;
  AlertSink sink_;
  std::vector<DriftEvent> events_;
  bool frozen_ = false;
  std::size_t processed_ = 0;
  std::size_t updated_ = 0;
  std::size_t alerts_ = 0;
  std::size_t anomaly_invocations_ = 0;
};

}  // namespace hids::pipeline
