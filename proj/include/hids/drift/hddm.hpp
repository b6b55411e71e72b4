#pragma once

#include <cstddef>

#include "hids/drift/detector.hpp"

namespace hids::drift {

struct HddmParams {
  double drift_confidence = 0.001;
  double warning_confidence = 0.005;
  // EWMA weight for HDDM_W.
  double lambda = 0.05;
};

// Hoeffding-bound test on averages (A-test). Tracks the cut point where the
// running mean plus its Hoeffding bound was smallest, then tests whether the
// mean since then rose significantly. Inputs in [0, 1].
class HddmA final : public DriftDetector {
 public:
  explicit HddmA(HddmParams params = {});

  DriftStatus update(double value) override;
  void reset() override;
  std::string_view name() const override { return "HDDM_A"; }

 private:
  HddmParams params_;
  double n_ = 0.0;
  double sum_ = 0.0;
  double n_cut_ = 0.0;
  double sum_cut_ = 0.0;
};

// Hoeffding-bound test on EWMA estimates (W-test) with weight lambda.
class HddmW final : public DriftDetector {
 public:
  explicit HddmW(HddmParams params = {});

  DriftStatus update(double value) override;
  void reset() override;
  std::string_view name() const override { return "HDDM_W"; }

 private:
  struct Ewma {
    double estimate = 0.0;
    // Sum of squared weights of the samples behind the estimate.
    double weight_sq = 0.0;
    bool empty = true;

    void add(double value, double lambda);
  };

  HddmParams params_;
  Ewma total_;
  Ewma cut_;
  Ewma recent_;
};

}  // namespace hids::drift
