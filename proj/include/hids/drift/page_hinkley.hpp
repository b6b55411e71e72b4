#pragma once

#include <cstddef>

#include "hids/drift/detector.hpp"

namespace hids::drift {

struct PageHinkleyParams {
  std::size_t min_samples = 30;
  // Tolerated magnitude of change.
  double delta = 0.005;
  // Alarm threshold on the cumulative deviation above its minimum.
  double threshold = 50.0;
};

// Page-Hinkley test for an increase of the mean:
//   m_T = sum_{t<=T} (x_t - mean_t - delta),  Drift when m_T - min_t m_t > threshold.
class PageHinkley final : public DriftDetector {
 public:
  explicit PageHinkley(PageHinkleyParams params = {});

  DriftStatus update(double value) override;
  void reset() override;
  std::string_view name() const override { return "PageHinkle"; }

  double cumulative() const { return cumulative_; }
  double minimum() const { return minimum_; }

 private:
  PageHinkleyParams params_;
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double cumulative_ = 0.0;
  double minimum_ = 0.0;
};

}  // namespace hids::drift
