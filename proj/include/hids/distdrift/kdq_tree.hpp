#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "hids/drift/detector.hpp"

namespace hids::distdrift {

using Point = std::vector<double>;

struct KdqTreeParams {
  // Cells holding fewer points than this are not split.
  std::size_t min_cell_count = 20;
  std::size_t max_depth = 12;
  // Additive smoothing on leaf proportions; negative means 0.5 / n_ref.
  double smoothing = -1.0;
};

// Axis-aligned box [lo, hi] per dimension.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
};

// Space partition over a reference sample. Cells are halved at their
// midpoint, cycling through dimensions and skipping dimensions of zero extent.
// Points outside the reference bounding box land in the nearest boundary
// leaf.
class KdqTree {
 public:
  static KdqTree build(std::span<const Point> reference, const KdqTreeParams& params = {});

  std::size_t dimension() const { return bounds_.lo.size(); }
  std::size_t leaf_count() const { return reference_counts_.size(); }
  std::size_t reference_size() const { return reference_size_; }
  double smoothing() const { return smoothing_; }
  const Box& bounds() const { return bounds_; }

  std::size_t leaf_of(std::span<const double> x) const;
  std::vector<std::size_t> histogram(std::span<const Point> points) const;
  const std::vector<std::size_t>& reference_counts() const { return reference_counts_; }
  // Leaf cells in leaf-index order.
  const std::vector<Box>& leaf_boxes() const { return leaf_boxes_; }
  std::size_t depth() const { return depth_; }

  // KL(test || reference) over the leaves with smoothed proportions.
  double kl_divergence(std::span<const Point> test) const;
  double kl_divergence_counts(std::span<const std::size_t> test_counts,
                              std::span<const std::size_t> reference_counts) const;

 private:
  struct Node {
    std::size_t dim = 0;
    double split = 0.0;
    // Children indices; -1 for a leaf.
    int left = -1;
    int right = -1;
    std::size_t leaf = 0;
  };

  int grow(std::vector<std::size_t>& rows, std::span<const Point> reference, Box cell,
           std::size_t depth, std::size_t next_dim, const KdqTreeParams& params);

  std::vector<Node> nodes_;
  std::vector<std::size_t> reference_counts_;
  std::vector<Box> leaf_boxes_;
  Box bounds_;
  std::size_t reference_size_ = 0;
  std::size_t depth_ = 0;
  double smoothing_ = 0.0;
};

// KL(p || q) of smoothed count histograms: proportions are
// (c / n + eps) / (1 + L eps).
double smoothed_kl(std::span<const std::size_t> p_counts, std::span<const std::size_t> q_counts,
                   double eps);

struct DistDriftConfig {
  std::size_t reference_size = 500;
  std::size_t test_size = 500;
  std::size_t bootstrap_replicates = 500;
  double alpha = 0.01;
  KdqTreeParams tree{};
  std::uint64_t seed = 1;

  void validate() const;
};

struct WindowResult {
  // 1-based index of the last record of the window.
  std::size_t end_index = 0;
  double statistic = 0.0;
  double threshold = 0.0;
  drift::DriftStatus status = drift::DriftStatus::InControl;
};

// Streaming kdq-tree change detector over feature vectors.
//
// The first reference_size points form the reference window; a bootstrap
// threshold is computed from it. Subsequent points fill consecutive test
// windows of test_size; each full window is scored. On Drift the reference is
// discarded and rebuilt from the next reference_size points.
class KdqDriftDetector {
 public:
  explicit KdqDriftDetector(DistDriftConfig config);

  drift::DriftStatus update(std::span<const double> x);

  bool has_reference() const { return tree_.has_value(); }
  const std::optional<KdqTree>& tree() const { return tree_; }
  double threshold() const { return threshold_; }
  const std::optional<WindowResult>& last_window() const { return last_window_; }
  std::size_t records_seen() const { return seen_; }
  // 1-based index of the first record of the current reference window.
  std::size_t reference_start() const { return reference_start_; }
  const DistDriftConfig& config() const { return config_; }

 private:
  void fit_reference();

  DistDriftConfig config_;
  std::mt19937_64 rng_;
  std::vector<Point> reference_;
  std::vector<Point> test_;
  std::optional<KdqTree> tree_;
  std::vector<std::size_t> reference_leaves_;
  double threshold_ = 0.0;
  std::optional<WindowResult> last_window_;
  std::size_t seen_ = 0;
  std::size_t reference_start_ = 1;
};

// Runs the detector over a whole stream and returns one result per scored
// test window. Throws if the stream is shorter than reference + test size.
std::vector<WindowResult> kdq_detect(const DistDriftConfig& config, std::span<const Point> stream);

}  // namespace hids::distdrift
