#pragma once

#include <cstddef>
#include <limits>

#include "hids/drift/detector.hpp"

namespace hids::drift {

struct DdmParams {
  // No signal (and no minimum tracking) until more than this many samples.
  std::size_t min_samples = 30;
  double warning_level = 2.0;
  double drift_level = 3.0;
};

// Drift Detection Method over a 0/1 error stream: tracks the running error
// rate p and its standard deviation s = sqrt(p(1-p)/n) against the minimum of
// p + s seen so far.
class Ddm final : public DriftDetector {
 public:
  explicit Ddm(DdmParams params = {});

  DriftStatus update(double error) override;
  void reset() override;
  std::string_view name() const override { return "DDM"; }

  std::size_t count() const { return n_; }
  double error_rate() const { return p_; }
  double p_min() const { return p_min_; }
  double s_min() const { return s_min_; }

 private:
  DdmParams params_;
  std::size_t n_ = 0;
  double p_ = 0.0;
  double p_min_ = std::numeric_limits<double>::infinity();
  double s_min_ = std::numeric_limits<double>::infinity();
  double ps_min_ = std::numeric_limits<double>::infinity();
};

struct EddmParams {
  std::size_t min_errors = 30;
  double warning_ratio = 0.95;
  double drift_ratio = 0.90;
};

// Early Drift Detection Method: monitors the distance between consecutive
// errors. The statistic mean + 2 sd of the distances is compared with its
// running maximum.
class Eddm final : public DriftDetector {
 public:
  explicit Eddm(EddmParams params = {});

  DriftStatus update(double error) override;
  void reset() override;
  std::string_view name() const override { return "EDDM"; }

  std::size_t errors() const { return errors_; }

 private:
  EddmParams params_;
  std::size_t n_ = 0;
  std::size_t errors_ = 0;
  std::size_t last_error_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double max_statistic_ = 0.0;
};

}  // namespace hids::drift
