#pragma once

#include <cstddef>
#include <deque>
#include <vector>

#include "hids/drift/detector.hpp"

namespace hids::drift {

struct AdwinParams {
  double delta = 0.002;
  // Buckets kept per size class before the two oldest are merged.
  std::size_t max_buckets = 5;
  // Both sub-windows of a tested split must hold at least this many items.
  std::size_t min_subwindow = 5;
};

// Cut threshold of the variance-aware ADWIN test with delta' = delta / width:
//   m   = 1 / (1/n0 + 1/n1)
//   eps = sqrt(2/m * variance * ln(2 width / delta)) + 2/(3m) * ln(2 width / delta)
// A split cuts when |mean0 - mean1| > eps.
double adwin_cut_threshold(double n0, double n1, double variance, double width, double delta);

// ADaptive WINdowing over an exponential histogram of buckets.
//
// Bucket sizes are powers of two; at most max_buckets buckets of each size
// are kept. Splits are only tested at bucket boundaries.
class Adwin final : public DriftDetector {
 public:
  struct Bucket {
    double sum = 0.0;
    // Sum of squared deviations from the bucket mean.
    double m2 = 0.0;
  };

  explicit Adwin(AdwinParams params = {});

  // insert() followed by dropping the oldest bucket while a cut exists.
  // Values are clamped to [0, 1]; non-finite values throw.
  DriftStatus update(double value) override;
  void reset() override;
  std::string_view name() const override { return "ADWIN"; }

  void insert(double value);
  // True when some admissible split of the current window satisfies the
  // cut inequality.
  bool cut_exists() const;

  std::size_t width() const { return width_; }
  double sum() const { return sum_; }
  double mean() const { return width_ == 0 ? 0.0 : sum_ / static_cast<double>(width_); }
  // Population variance of the window.
  double variance() const;
  // Bucket sizes from the oldest to the newest.
  std::vector<std::size_t> bucket_sizes() const;
  // Bucket sums from the oldest to the newest.
  std::vector<double> bucket_sums() const;
  const AdwinParams& params() const { return params_; }

 private:
  void compress();
  void drop_oldest();

  AdwinParams params_;
  // rows_[i] holds buckets of size 2^i, oldest first. Rows with a higher
  // index are entirely older than rows with a lower index.
  std::vector<std::deque<Bucket>> rows_;
  std::size_t width_ = 0;
  double sum_ = 0.0;
  double m2_ = 0.0;
};

// Two ADWINs at different confidences. A cut of the strict one is Drift, a
// cut of the loose one alone is Warning. Cuts where the recent mean is not
// higher than the old mean (error rate improving) are reported as InControl.
class AdwinWarningWrapper final : public DriftDetector {
 public:
  AdwinWarningWrapper(AdwinParams drift, AdwinParams warning);

  DriftStatus update(double value) override;
  void reset() override;
  std::string_view name() const override { return "ADWIN"; }

  const Adwin& drift_detector() const { return drift_; }
  const Adwin& warning_detector() const { return warning_; }

 private:
  Adwin drift_;
  Adwin warning_;
};

}  // namespace hids::drift
