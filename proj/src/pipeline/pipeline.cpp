#include "hids/pipeline/pipeline.hpp"

#include <chrono>

#include "hids/common/error.hpp"

namespace hids::pipeline {

std::string_view to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Benign:
      return "Benign";
    case VerdictKind::KnownAttack:
      return "KnownAttack";
    case VerdictKind::UnknownAttack:
      return "UnknownAttack";
  }
  return "?";
}

ArfSignatureStage::ArfSignatureStage(std::size_t dimension, signature::ArfParams params)
    : forest_(dimension, std::move(params)) {}

std::string ArfSignatureStage::detector_name() const {
  if (!forest_.params().drift_detection) return "none";
  return std::string(drift::detector_label(forest_.params().detector.kind));
}

OcSvmAnomalyStage::OcSvmAnomalyStage(std::size_t dimension, anomaly::OcSvmParams params,
                                     std::optional<drift::DetectorConfig> monitor)
    : model_(dimension, params, monitor),
      detector_(monitor ? std::string(drift::detector_label(monitor->kind)) : "none") {}

std::optional<double> OcSvmAnomalyStage::score(std::span<const double> x) {
  const auto s = model_.score(x);
  if (!s) return std::nullopt;
  return s->score;
}

HybridPipeline::HybridPipeline(std::unique_ptr<SignatureStage> signature,
                               std::unique_ptr<AnomalyStage> anomaly, PipelineOptions options)
    : signature_(std::move(signature)), anomaly_(std::move(anomaly)), options_(std::move(options)) {
  if (!signature_ || !anomaly_) throw ConfigError("pipeline needs both stages");
  if (options_.distribution_drift) kdq_.emplace(*options_.distribution_drift);
}

Verdict HybridPipeline::process(const FeatureVector& x) {
  ++processed_;
  Verdict verdict;
  const auto vote = signature_->predict(x.x);
  verdict.signature_score = vote.score;
  if (vote.label == 1) {
    verdict.kind = VerdictKind::KnownAttack;
  } else {
    ++anomaly_invocations_;
    if (const auto score = anomaly_->score(x.x)) {
      verdict.anomaly_score = *score;
      verdict.kind = *score < 0.0 ? VerdictKind::UnknownAttack : VerdictKind::Benign;
    } else {
      verdict.cold_start = true;
      verdict.kind = options_.cold_start == ColdStartPolicy::Benign ? VerdictKind::Benign
                                                                    : VerdictKind::UnknownAttack;
    }
  }

  if (verdict.is_attack()) {
    ++alerts_;
    if (sink_) {
      Alert alert{processed_, verdict.kind, verdict.signature_score, verdict.anomaly_score,
                  std::nullopt};
      if (options_.record_timestamps) {
        alert.timestamp_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                                 std::chrono::system_clock::now().time_since_epoch())
                                 .count();
      }
      sink_(alert);
    }
  }
  return verdict;
}

void HybridPipeline::update(const FeatureVector& x, const Verdict& verdict) {
  const std::size_t step = ++updated_;
  if (frozen_) return;

  if (kdq_ && kdq_->update(x.x) == drift::DriftStatus::Drift) {
    events_.push_back({step, "pipeline", "kdq-tree", drift::DriftStatus::Drift, std::nullopt});
    signature_->reset();
    anomaly_->reset();
  }

  for (const auto& e : signature_->learn(x.x, x.y)) {
    events_.push_back({step, "signature", signature_->detector_name(), e.status, e.tree});
  }

  if (verdict.anomaly_score && !kdq_) {
    const auto status = anomaly_->observe_outcome(*verdict.anomaly_score < 0.0, x.y);
    if (status != drift::DriftStatus::InControl) {
      events_.push_back({step, "anomaly", anomaly_->detector_name(), status, std::nullopt});
    }
  }

  const bool eligible = options_.anomaly_training == AnomalyTraining::LabeledBenign
                            ? x.y == 0
                            : verdict.kind == VerdictKind::Benign;
  if (eligible) anomaly_->learn(x.x);
}

}  // namespace hids::pipeline
