#include "hids/drift/adwin.hpp"

#include <algorithm>
#include <cmath>

#include "hids/common/error.hpp"

namespace hids::drift {

std::string_view to_string(DriftStatus status) {
  switch (status) {
    case DriftStatus::InControl:
      return "InControl";
    case DriftStatus::Warning:
      return "Warning";
    case DriftStatus::Drift:
      return "Drift";
  }
  return "?";
}

double adwin_cut_threshold(double n0, double n1, double variance, double width, double delta) {
  const double m = 1.0 / (1.0 / n0 + 1.0 / n1);
  const double log_term = std::log(2.0 * width / delta);
  return std::sqrt(2.0 / m * variance * log_term) + 2.0 / (3.0 * m) * log_term;
}

Adwin::Adwin(AdwinParams params) : params_(params) {
  if (!(params_.delta > 0.0 && params_.delta < 1.0)) {
    throw ConfigError("ADWIN delta must lie in (0, 1)");
  }
  if (params_.max_buckets < 2) throw ConfigError("ADWIN needs max_buckets >= 2");
  if (params_.min_subwindow < 1) throw ConfigError("ADWIN needs min_subwindow >= 1");
}

void Adwin::reset() {
  rows_.clear();
  width_ = 0;
  sum_ = 0.0;
  m2_ = 0.0;
}

double Adwin::variance() const {
  if (width_ == 0) return 0.0;
  return std::max(0.0, m2_) / static_cast<double>(width_);
}

void Adwin::insert(double value) {
  if (!std::isfinite(value)) throw Error("ADWIN input must be finite");
  value = std::clamp(value, 0.0, 1.0);

  if (rows_.empty()) rows_.emplace_back();
  rows_.front().push_back(Bucket{value, 0.0});

  const double old_mean = mean();
  ++width_;
  sum_ += value;
  m2_ += (value - old_mean) * (value - mean());
  compress();
}

void Adwin::compress() {
  for (std::size_t row = 0; row < rows_.size(); ++row) {
    if (rows_[row].size() <= params_.max_buckets) break;
    const double n = std::ldexp(1.0, static_cast<int>(row));
    const Bucket a = rows_[row][0];
    const Bucket b = rows_[row][1];
    rows_[row].pop_front();
    rows_[row].pop_front();
    const double diff = a.sum / n - b.sum / n;
    const Bucket merged{a.sum + b.sum, a.m2 + b.m2 + n / 2.0 * diff * diff};
    if (row + 1 == rows_.size()) rows_.emplace_back();
    rows_[row + 1].push_back(merged);
  }
}

void Adwin::drop_oldest() {
  while (!rows_.empty() && rows_.back().empty()) rows_.pop_back();
  if (rows_.empty()) return;
  const std::size_t row = rows_.size() - 1;
  const Bucket bucket = rows_[row].front();
  rows_[row].pop_front();
  while (!rows_.empty() && rows_.back().empty()) rows_.pop_back();

  const std::size_t n_bucket = std::size_t{1} << row;
  const std::size_t remaining = width_ - n_bucket;
  if (remaining == 0) {
    reset();
    return;
  }
  const double bucket_mean = bucket.sum / static_cast<double>(n_bucket);
  const double rest_sum = sum_ - bucket.sum;
  const double rest_mean = rest_sum / static_cast<double>(remaining);
  const double diff = bucket_mean - rest_mean;
  m2_ -= bucket.m2 + static_cast<double>(n_bucket) * static_cast<double>(remaining) /
                         static_cast<double>(width_) * diff * diff;
  m2_ = std::max(0.0, m2_);
  width_ = remaining;
  sum_ = rest_sum;
}

bool Adwin::cut_exists() const {
  const double width = static_cast<double>(width_);
  if (width_ < 2 * params_.min_subwindow) return false;
  const double var = variance();
  std::size_t n0 = 0;
  double s0 = 0.0;
  std::size_t seen = 0;
  std::size_t total_buckets = 0;
  for (const auto& row : rows_) total_buckets += row.size();

  for (std::size_t r = rows_.size(); r-- > 0;) {
    const std::size_t size = std::size_t{1} << r;
    for (const auto& bucket : rows_[r]) {
      n0 += size;
      s0 += bucket.sum;
      if (++seen == total_buckets) return false;
      const std::size_t n1 = width_ - n0;
      if (n0 < params_.min_subwindow || n1 < params_.min_subwindow) continue;
      const double mean0 = s0 / static_cast<double>(n0);
      const double mean1 = (sum_ - s0) / static_cast<double>(n1);
      const double eps = adwin_cut_threshold(static_cast<double>(n0), static_cast<double>(n1),
                                             var, width, params_.delta);
      if (std::abs(mean0 - mean1) > eps) return true;
    }
  }
  return false;
}

DriftStatus Adwin::update(double value) {
  insert(value);
  bool cut = false;
  while (cut_exists()) {
    drop_oldest();
    cut = true;
  }
  return cut ? DriftStatus::Drift : DriftStatus::InControl;
}

std::vector<std::size_t> Adwin::bucket_sizes() const {
  std::vector<std::size_t> sizes;
  for (std::size_t r = rows_.size(); r-- > 0;) {
    sizes.insert(sizes.end(), rows_[r].size(), std::size_t{1} << r);
  }
  return sizes;
}

std::vector<double> Adwin::bucket_sums() const {
  std::vector<double> sums;
  for (std::size_t r = rows_.size(); r-- > 0;) {
    for (const auto& b : rows_[r]) sums.push_back(b.sum);
  }
  return sums;
}

AdwinWarningWrapper::AdwinWarningWrapper(AdwinParams drift, AdwinParams warning)
    : drift_(drift), warning_(warning) {}

DriftStatus AdwinWarningWrapper::update(double value) {
  const double drift_before = drift_.mean();
  const double warning_before = warning_.mean();
  const bool drift_cut = drift_.update(value) == DriftStatus::Drift;
  const bool warning_cut = warning_.update(value) == DriftStatus::Drift;
  if (drift_cut && drift_.mean() > drift_before) return DriftStatus::Drift;
  if (warning_cut && warning_.mean() > warning_before) return DriftStatus::Warning;
  return DriftStatus::InControl;
}

void AdwinWarningWrapper::reset() {
  drift_.reset();
  warning_.reset();
}

}  // namespace hids::drift
