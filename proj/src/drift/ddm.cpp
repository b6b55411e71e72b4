#include "hids/drift/ddm.hpp"

#include <cmath>

#include "hids/common/error.hpp"

namespace hids::drift {
namespace {

bool binary(double v) { return v == 0.0 || v == 1.0; }

}  // namespace

Ddm::Ddm(DdmParams params) : params_(params) {
  if (!(params_.warning_level > 0.0 && params_.drift_level > params_.warning_level)) {
    throw ConfigError("DDM needs 0 < warning_level < drift_level");
  }
}

void Ddm::reset() { *this = Ddm(params_); }

DriftStatus Ddm::update(double error) {
  if (!binary(error)) throw Error("DDM input must be 0 or 1");
  ++n_;
  p_ += (error - p_) / static_cast<double>(n_);
  const double s = std::sqrt(p_ * (1.0 - p_) / static_cast<double>(n_));
  if (n_ <= params_.min_samples) return DriftStatus::InControl;

  if (p_ + s <= ps_min_) {
    p_min_ = p_;
    s_min_ = s;
    ps_min_ = p_ + s;
  }
  if (p_ + s >= p_min_ + params_.drift_level * s_min_) {
    reset();
    return DriftStatus::Drift;
  }
  if (p_ + s >= p_min_ + params_.warning_level * s_min_) return DriftStatus::Warning;
  return DriftStatus::InControl;
}

Eddm::Eddm(EddmParams params) : params_(params) {
  if (!(params_.drift_ratio < params_.warning_ratio && params_.warning_ratio <= 1.0 &&
        params_.drift_ratio > 0.0)) {
    throw ConfigError("EDDM needs 0 < drift_ratio < warning_ratio <= 1");
  }
}

void Eddm::reset() { *this = Eddm(params_); }

DriftStatus Eddm::update(double error) {
  if (!binary(error)) throw Error("EDDM input must be 0 or 1");
  ++n_;
  if (error == 0.0) return DriftStatus::InControl;

  ++errors_;
  const double distance = static_cast<double>(n_ - last_error_);
  last_error_ = n_;
  const double delta = distance - mean_;
  mean_ += delta / static_cast<double>(errors_);
  m2_ += delta * (distance - mean_);
  const double statistic = mean_ + 2.0 * std::sqrt(m2_ / static_cast<double>(errors_));

  if (statistic > max_statistic_) {
    max_statistic_ = statistic;
    return DriftStatus::InControl;
  }
  if (errors_ < params_.min_errors) return DriftStatus::InControl;
  const double ratio = statistic / max_statistic_;
  if (ratio < params_.drift_ratio) {
    reset();
    return DriftStatus::Drift;
  }
  if (ratio < params_.warning_ratio) return DriftStatus::Warning;
  return DriftStatus::InControl;
}

}  // namespace hids::drift
