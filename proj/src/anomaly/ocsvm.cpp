#include "hids/anomaly/ocsvm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "hids/common/error.hpp"

namespace hids::anomaly {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void check_finite(std::span<const double> v, const char* what) {
  for (const double x : v) {
    if (!std::isfinite(x)) throw Error(std::string(what) + " must be finite");
  }
}

}  // namespace

RandomFourierFeatures::RandomFourierFeatures(std::size_t input_dim, std::size_t output_dim,
                                             double gamma, std::uint64_t seed)
    : input_dim_(input_dim), output_dim_(output_dim), gamma_(gamma) {
  if (input_dim_ == 0 || output_dim_ == 0) throw ConfigError("RFF dimensions must be positive");
  if (!(gamma_ > 0.0)) throw ConfigError("RFF gamma must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(2.0 * gamma_));
  std::uniform_real_distribution<double> uniform(0.0, 2.0 * std::numbers::pi);
  projection_.resize(output_dim_ * input_dim_);
  for (auto& w : projection_) w = normal(rng);
  phase_.resize(output_dim_);
  for (auto& b : phase_) b = uniform(rng);
}

std::vector<double> RandomFourierFeatures::transform(std::span<const double> x) const {
  check_dimension(input_dim_, x.size());
  const double scale = std::sqrt(2.0 / static_cast<double>(output_dim_));
  std::vector<double> out(output_dim_);
  for (std::size_t i = 0; i < output_dim_; ++i) {
    const std::span<const double> row(projection_.data() + i * input_dim_, input_dim_);
    out[i] = scale * std::cos(dot(row, x) + phase_[i]);
  }
  return out;
}

double ocsvm_objective(std::span<const double> w, double rho, std::span<const double> phi,
                       double nu) {
  check_dimension(w.size(), phi.size());
  return 0.5 * dot(w, w) - rho + std::max(0.0, rho - dot(w, phi)) / nu;
}

Subgradient ocsvm_subgradient(std::span<const double> w, double rho, std::span<const double> phi,
                              double nu) {
  check_dimension(w.size(), phi.size());
  const double g = rho > dot(w, phi) ? 1.0 : 0.0;
  Subgradient out;
  out.w.resize(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out.w[i] = w[i] - g / nu * phi[i];
  out.rho = g / nu - 1.0;
  return out;
}

OneClassSgd::OneClassSgd(std::size_t dim, double nu, double eta0)
    : w_(dim, 0.0), nu_(nu), eta0_(eta0) {
  if (!(nu_ > 0.0 && nu_ <= 1.0)) throw ConfigError("nu must lie in (0, 1]");
  if (!(eta0_ > 0.0)) throw ConfigError("eta0 must be positive");
}

double OneClassSgd::learning_rate(std::size_t step) const {
  return eta0_ / std::pow(1.0 + eta0_ * static_cast<double>(step), 0.75);
}

void OneClassSgd::learn(std::span<const double> phi) {
  check_dimension(w_.size(), phi.size());
  check_finite(phi, "one-class SVM input");
  const double eta = learning_rate(steps_);
  const double g = rho_ > dot(w_, phi) ? 1.0 : 0.0;
  for (std::size_t i = 0; i < w_.size(); ++i) w_[i] -= eta * (w_[i] - g / nu_ * phi[i]);
  rho_ -= eta * (g / nu_ - 1.0);
  ++steps_;
}

AnomalyScore OneClassSgd::score(std::span<const double> phi) const {
  if (!fitted()) throw Error("one-class SVM has not been fitted");
  check_dimension(w_.size(), phi.size());
  const double s = dot(w_, phi) - rho_;
  return {s < 0.0, s};
}

void OneClassSgd::reset() {
  std::fill(w_.begin(), w_.end(), 0.0);
  rho_ = 0.0;
  steps_ = 0;
}

AdaptiveOcSvm::AdaptiveOcSvm(std::size_t input_dim, OcSvmParams params,
                             std::optional<drift::DetectorConfig> monitor)
    : params_(params),
      map_(input_dim, params.rff_dim, params.gamma, params.seed),
      model_(params.rff_dim, params.nu, params.eta0),
      monitor_config_(std::move(monitor)) {
  if (monitor_config_) monitor_ = drift::make_detector(*monitor_config_, params_.seed + 1);
}

std::optional<AnomalyScore> AdaptiveOcSvm::score(std::span<const double> x) const {
  if (!model_.fitted()) return std::nullopt;
  return model_.score(map_.transform(x));
}

void AdaptiveOcSvm::learn(std::span<const double> x) {
  check_finite(x, "one-class SVM input");
  model_.learn(map_.transform(x));
}

drift::DriftStatus AdaptiveOcSvm::observe_outcome(bool flagged_anomalous, int y) {
  if (!monitor_) return drift::DriftStatus::InControl;
  const bool wrong = flagged_anomalous != (y == 1);
  const auto status = monitor_->update(wrong ? 1.0 : 0.0);
  if (status == drift::DriftStatus::Drift) {
    model_.reset();
    monitor_ = drift::make_detector(*monitor_config_, params_.seed + 1 + ++resets_);
  }
  return status;
}

void AdaptiveOcSvm::reset() {
  model_.reset();
  if (monitor_config_) monitor_ = drift::make_detector(*monitor_config_, params_.seed + 1);
}

}  // namespace hids::anomaly
