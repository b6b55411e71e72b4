#include "hids/harness/metrics.hpp"

#include "hids/common/error.hpp"

namespace hids::harness {

void ConfusionCounts::add(bool predicted_attack, int label) {
  if (label == 1) {
    ++(predicted_attack ? tp : fn);
  } else {
    ++(predicted_attack ? fp : tn);
  }
}

PrequentialMetrics compute_metrics(const ConfusionCounts& c) {
  PrequentialMetrics m;
  m.counts = c;
  const auto ratio = [](std::size_t num, std::size_t den, bool& undefined) {
    undefined = den == 0;
    return undefined ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  m.accuracy = ratio(c.tp + c.tn, c.total(), m.accuracy_undefined);
  m.recall = ratio(c.tp, c.tp + c.fn, m.recall_undefined);
  m.precision = ratio(c.tp, c.tp + c.fp, m.precision_undefined);
  const double pr = m.precision + m.recall;
  m.f1_undefined = m.recall_undefined || m.precision_undefined || pr == 0.0;
  m.f1 = m.f1_undefined ? 0.0 : 2.0 * m.precision * m.recall / pr;
  return m;
}

WindowedMetrics::WindowedMetrics(std::size_t stride) : stride_(stride) {
  if (stride_ == 0) throw ConfigError("window stride must be positive");
}

void WindowedMetrics::add(bool predicted_attack, int label) {
  current_.add(predicted_attack, label);
  ++seen_;
  if (current_.total() == stride_) close();
}

void WindowedMetrics::finish() {
  if (current_.total() > 0) close();
}

void WindowedMetrics::close() {
  windows_.push_back({seen_ - current_.total() + 1, seen_, compute_metrics(current_)});
  current_ = {};
}

const WindowMetrics* window_at(const std::vector<WindowMetrics>& windows, std::size_t index) {
  for (const auto& w : windows) {
    if (w.first_index <= index && index <= w.end_index) return &w;
  }
  return nullptr;
}

}  // namespace hids::harness
