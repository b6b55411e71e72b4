#include "hids/drift/page_hinkley.hpp"

#include <algorithm>
#include <cmath>

#include "hids/common/error.hpp"

namespace hids::drift {

PageHinkley::PageHinkley(PageHinkleyParams params) : params_(params) {
  if (!(params_.threshold > 0.0) || params_.delta < 0.0) {
    throw ConfigError("Page-Hinkley needs threshold > 0 and delta >= 0");
  }
}

void PageHinkley::reset() { *this = PageHinkley(params_); }

DriftStatus PageHinkley::update(double value) {
  if (!std::isfinite(value)) throw Error("Page-Hinkley input must be finite");
  ++n_;
  mean_ += (value - mean_) / static_cast<double>(n_);
  cumulative_ += value - mean_ - params_.delta;
  minimum_ = std::min(minimum_, cumulative_);
  if (n_ >= params_.min_samples && cumulative_ - minimum_ > params_.threshold) {
    reset();
    return DriftStatus::Drift;
  }
  return DriftStatus::InControl;
}

}  // namespace hids::drift
