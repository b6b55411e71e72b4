#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <random>
#include <span>

#include "hids/drift/detector.hpp"

namespace hids::drift {

// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_statistic(std::span<const double> a, std::span<const double> b);

// Asymptotic two-sample KS p-value for statistic d with sample sizes n, m.
double ks_p_value(double d, std::size_t n, std::size_t m);

// Critical value c(alpha) * sqrt((n + m) / (n m)), c(alpha) = sqrt(-ln(alpha / 2) / 2).
double ks_critical_value(double alpha, std::size_t n, std::size_t m);

struct KswinParams {
  std::size_t window = 100;
  std::size_t stat_size = 30;
  double alpha = 0.005;
  std::uint64_t seed = 42;
};

// Kolmogorov-Smirnov windowing: once the window is full, compares the newest
// stat_size items with stat_size items sampled without replacement from the
// older part of the window.
class Kswin final : public DriftDetector {
 public:
  explicit Kswin(KswinParams params = {});

  DriftStatus update(double value) override;
  void reset() override;
  std::string_view name() const override { return "KSWIN"; }

  std::size_t size() const { return window_.size(); }
  double last_statistic() const { return last_statistic_; }

 private:
  KswinParams params_;
  std::mt19937_64 rng_;
  std::deque<double> window_;
  double critical_;
  double last_statistic_ = 0.0;
};

}  // namespace hids::drift
