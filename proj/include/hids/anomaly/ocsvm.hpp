#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hids/drift/factory.hpp"

namespace hids::anomaly {

// Random Fourier features for the RBF kernel exp(-gamma ||x - y||^2):
//   phi(x) = sqrt(2/D) cos(W x + b),  W_ij ~ N(0, 2 gamma),  b_i ~ U[0, 2 pi).
class RandomFourierFeatures {
 public:
  RandomFourierFeatures(std::size_t input_dim, std::size_t output_dim, double gamma,
                        std::uint64_t seed);

  std::vector<double> transform(std::span<const double> x) const;

  std::size_t input_dim() const { return input_dim_; }
  std::size_t output_dim() const { return output_dim_; }
  double gamma() const { return gamma_; }

 private:
  std::size_t input_dim_;
  std::size_t output_dim_;
  double gamma_;
  // Row-major output_dim x input_dim.
  std::vector<double> projection_;
  std::vector<double> phase_;
};

// Per-sample one-class objective
//   L(w, rho; phi) = 1/2 ||w||^2 - rho + (1/nu) max(0, rho - <w, phi>).
double ocsvm_objective(std::span<const double> w, double rho, std::span<const double> phi, double nu);

struct Subgradient {
  std::vector<double> w;
  double rho = 0.0;
};

// Subgradient of ocsvm_objective; at the hinge kink the inactive branch is
// taken.
Subgradient ocsvm_subgradient(std::span<const double> w, double rho, std::span<const double> phi,
                              double nu);

struct AnomalyScore {
  bool anomalous = false;
  double score = 0.0;
};

// Linear one-class SVM on mapped features, trained by SGD with the step size
// eta_t = eta0 / (1 + eta0 t)^0.75.
class OneClassSgd {
 public:
  OneClassSgd(std::size_t dim, double nu, double eta0);

  void learn(std::span<const double> phi);
  // score = <w, phi> - rho; anomalous iff score < 0. Throws before the first
  // learning step.
  AnomalyScore score(std::span<const double> phi) const;
  double learning_rate(std::size_t step) const;

  bool fitted() const { return steps_ > 0; }
  std::size_t steps() const { return steps_; }
  const std::vector<double>& weights() const { return w_; }
  double offset() const { return rho_; }
  double nu() const { return nu_; }
  void reset();

 private:
  std::vector<double> w_;
  double rho_ = 0.0;
  double nu_;
  double eta0_;
  std::size_t steps_ = 0;
};

struct OcSvmParams {
  double nu = 0.2;
  double gamma = 0.9;
  std::size_t rff_dim = 500;
  double eta0 = 0.01;
  std::uint64_t seed = 1;
};

// Anomaly module: RFF map + SGD one-class SVM + a drift monitor fed with
// the module's decision errors. On Drift the linear model restarts from zero
// while the feature map is kept.
class AdaptiveOcSvm {
 public:
  // monitor == nullopt disables drift adaptation.
  AdaptiveOcSvm(std::size_t input_dim, OcSvmParams params,
                std::optional<drift::DetectorConfig> monitor);

  // nullopt while the model has not learned anything yet.
  std::optional<AnomalyScore> score(std::span<const double> x) const;
  void learn(std::span<const double> x);
  // Feeds the monitor with whether the anomaly decision disagreed with the
  // ground truth. Returns the monitor status (InControl when disabled).
  drift::DriftStatus observe_outcome(bool flagged_anomalous, int y);
  void reset();

  const RandomFourierFeatures& feature_map() const { return map_; }
  const OneClassSgd& model() const { return model_; }
  const OcSvmParams& params() const { return params_; }
  bool adaptive() const { return monitor_ != nullptr; }
  std::size_t resets() const { return resets_; }

 private:
  OcSvmParams params_;
  RandomFourierFeatures map_;
  OneClassSgd model_;
  std::optional<drift::DetectorConfig> monitor_config_;
  std::unique_ptr<drift::DriftDetector> monitor_;
  std::size_t resets_ = 0;
};

}  // namespace hids::anomaly
