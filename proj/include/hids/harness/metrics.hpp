#pragma once

#include <cstddef>
#include <vector>

namespace hids::harness {

// Binary confusion counts; positive = attack (1).
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  void add(bool predicted_attack, int label);
  bool operator==(const ConfusionCounts&) const = default;
};

// A ratio whose denominator was zero is reported as 0 with its flag set.
struct PrequentialMetrics {
  ConfusionCounts counts;
  double accuracy = 0.0;
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  bool accuracy_undefined = false;
  bool recall_undefined = false;
  bool precision_undefined = false;
  bool f1_undefined = false;
};

PrequentialMetrics compute_metrics(const ConfusionCounts& counts);

struct WindowMetrics {
  // 1-based index of the first and last record in the window.
  std::size_t first_index = 0;
  std::size_t end_index = 0;
  PrequentialMetrics metrics;
};

// Tumbling windows of `stride` records; a trailing partial window is emitted
// by finish().
class WindowedMetrics {
 public:
  explicit WindowedMetrics(std::size_t stride);

  void add(bool predicted_attack, int label);
  void finish();

  const std::vector<WindowMetrics>& windows() const { return windows_; }
  std::size_t stride() const { return stride_; }

 private:
  void close();

  std::size_t stride_;
  std::size_t seen_ = 0;
  ConfusionCounts current_;
  std::vector<WindowMetrics> windows_;
};

// The window whose range contains `index` (1-based), or nullptr.
const WindowMetrics* window_at(const std::vector<WindowMetrics>& windows, std::size_t index);

}  // namespace hids::harness
