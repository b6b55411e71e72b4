#include "hids/drift/hddm.hpp"

#include <cmath>

#include "hids/common/error.hpp"

namespace hids::drift {
namespace {

void check_confidences(const HddmParams& p) {
  if (!(p.drift_confidence > 0.0 && p.drift_confidence < 1.0 && p.warning_confidence > 0.0 &&
        p.warning_confidence < 1.0)) {
    throw ConfigError("HDDM confidences must lie in (0, 1)");
  }
}

void check_unit(double value, const char* who) {
  if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
    throw Error(std::string(who) + " input must lie in [0, 1]");
  }
}

// One-sided Hoeffding bound on the mean of n samples in [0, 1].
double mean_bound(double n, double confidence) {
  return std::sqrt(std::log(1.0 / confidence) / (2.0 * n));
}

// True when the mean of everything after the cut point significantly exceeds
// the mean up to the cut point.
bool mean_increased(double n_cut, double sum_cut, double n, double sum, double confidence) {
  if (n_cut <= 0.0 || n_cut >= n) return false;
  const double n_after = n - n_cut;
  const double m = n_after / (n_cut * n);
  const double bound = std::sqrt(m / 2.0 * std::log(1.0 / confidence));
  return sum / n - sum_cut / n_cut >= bound;
}

}  // namespace

HddmA::HddmA(HddmParams params) : params_(params) { check_confidences(params_); }

void HddmA::reset() { *this = HddmA(params_); }

DriftStatus HddmA::update(double value) {
  check_unit(value, "HDDM_A");
  n_ += 1.0;
  sum_ += value;
  if (n_cut_ == 0.0 || sum_ / n_ + mean_bound(n_, params_.drift_confidence) <=
                           sum_cut_ / n_cut_ + mean_bound(n_cut_, params_.drift_confidence)) {
    n_cut_ = n_;
    sum_cut_ = sum_;
  }
  if (mean_increased(n_cut_, sum_cut_, n_, sum_, params_.drift_confidence)) {
    reset();
    return DriftStatus::Drift;
  }
  if (mean_increased(n_cut_, sum_cut_, n_, sum_, params_.warning_confidence)) {
    return DriftStatus::Warning;
  }
  return DriftStatus::InControl;
}

void HddmW::Ewma::add(double value, double lambda) {
  if (empty) {
    estimate = value;
    weight_sq = 1.0;
    empty = false;
    return;
  }
  estimate = lambda * value + (1.0 - lambda) * estimate;
  weight_sq = lambda * lambda + (1.0 - lambda) * (1.0 - lambda) * weight_sq;
}

HddmW::HddmW(HddmParams params) : params_(params) {
  check_confidences(params_);
  if (!(params_.lambda > 0.0 && params_.lambda < 1.0)) {
    throw ConfigError("HDDM_W lambda must lie in (0, 1)");
  }
}

void HddmW::reset() { *this = HddmW(params_); }

DriftStatus HddmW::update(double value) {
  check_unit(value, "HDDM_W");
  total_.add(value, params_.lambda);

  const auto bound = [](double weight_sq, double confidence) {
    return std::sqrt(weight_sq * std::log(1.0 / confidence) / 2.0);
  };
  if (cut_.empty || total_.estimate + bound(total_.weight_sq, params_.drift_confidence) <=
                        cut_.estimate + bound(cut_.weight_sq, params_.drift_confidence)) {
    cut_ = total_;
    recent_ = Ewma{};
    return DriftStatus::InControl;
  }
  recent_.add(value, params_.lambda);

  const double gap = recent_.estimate - cut_.estimate;
  const double weight_sq = cut_.weight_sq + recent_.weight_sq;
  if (gap >= bound(weight_sq, params_.drift_confidence)) {
    reset();
    return DriftStatus::Drift;
  }
  if (gap >= bound(weight_sq, params_.warning_confidence)) return DriftStatus::Warning;
  return DriftStatus::InControl;
}

}  // namespace hids::drift
