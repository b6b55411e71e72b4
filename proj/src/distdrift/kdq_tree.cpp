#include "hids/distdrift/kdq_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hids/common/error.hpp"

namespace hids::distdrift {

KdqTree KdqTree::build(std::span<const Point> reference, const KdqTreeParams& params) {
  if (reference.empty()) throw Error("kdq-tree needs a non-empty reference window");
  const std::size_t d = reference.front().size();
  if (d == 0) throw Error("kdq-tree needs points of positive dimension");
  for (const auto& p : reference) check_dimension(d, p.size());
  if (params.min_cell_count < 1) throw ConfigError("kdq-tree min_cell_count must be >= 1");

  KdqTree tree;
  tree.reference_size_ = reference.size();
  tree.smoothing_ = params.smoothing < 0.0 ? 0.5 / static_cast<double>(reference.size())
                                           : params.smoothing;
  tree.bounds_.lo = reference.front();
  tree.bounds_.hi = reference.front();
  for (const auto& p : reference) {
    for (std::size_t i = 0; i < d; ++i) {
      tree.bounds_.lo[i] = std::min(tree.bounds_.lo[i], p[i]);
      tree.bounds_.hi[i] = std::max(tree.bounds_.hi[i], p[i]);
    }
  }
  std::vector<std::size_t> rows(reference.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  tree.grow(rows, reference, tree.bounds_, 0, 0, params);
  return tree;
}

int KdqTree::grow(std::vector<std::size_t>& rows, std::span<const Point> reference, Box cell,
                  std::size_t depth, std::size_t next_dim, const KdqTreeParams& params) {
  const int index = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  depth_ = std::max(depth_, depth);

  std::optional<std::size_t> dim;
  if (rows.size() >= params.min_cell_count && depth < params.max_depth) {
    const std::size_t d = dimension();
    for (std::size_t k = 0; k < d; ++k) {
      const std::size_t candidate = (next_dim + k) % d;
      const double mid = 0.5 * (cell.lo[candidate] + cell.hi[candidate]);
      if (cell.lo[candidate] < mid && mid < cell.hi[candidate]) {
        dim = candidate;
        break;
      }
    }
  }
  if (!dim) {
    nodes_[index].leaf = reference_counts_.size();
    reference_counts_.push_back(rows.size());
    leaf_boxes_.push_back(std::move(cell));
    return index;
  }

  const double mid = 0.5 * (cell.lo[*dim] + cell.hi[*dim]);
  std::vector<std::size_t> left_rows;
  std::vector<std::size_t> right_rows;
  for (const auto r : rows) (reference[r][*dim] < mid ? left_rows : right_rows).push_back(r);
  rows.clear();
  rows.shrink_to_fit();

  Box left_cell = cell;
  left_cell.hi[*dim] = mid;
  Box right_cell = std::move(cell);
  right_cell.lo[*dim] = mid;

  nodes_[index].dim = *dim;
  nodes_[index].split = mid;
  const std::size_t after = (*dim + 1) % dimension();
  const int left = grow(left_rows, reference, std::move(left_cell), depth + 1, after, params);
  const int right = grow(right_rows, reference, std::move(right_cell), depth + 1, after, params);
  nodes_[index].left = left;
  nodes_[index].right = right;
  return index;
}

std::size_t KdqTree::leaf_of(std::span<const double> x) const {
  check_dimension(dimension(), x.size());
  std::size_t i = 0;
  while (nodes_[i].left >= 0) {
    const auto& node = nodes_[i];
    i = static_cast<std::size_t>(x[node.dim] < node.split ? node.left : node.right);
  }
  return nodes_[i].leaf;
}

std::vector<std::size_t> KdqTree::histogram(std::span<const Point> points) const {
  std::vector<std::size_t> counts(leaf_count(), 0);
  for (const auto& p : points) ++counts[leaf_of(p)];
  return counts;
}

double KdqTree::kl_divergence(std::span<const Point> test) const {
  if (test.empty()) throw Error("kdq-tree KL needs a non-empty test window");
  return smoothed_kl(histogram(test), reference_counts_, smoothing_);
}

double KdqTree::kl_divergence_counts(std::span<const std::size_t> test_counts,
                                     std::span<const std::size_t> reference_counts) const {
  return smoothed_kl(test_counts, reference_counts, smoothing_);
}

double smoothed_kl(std::span<const std::size_t> p_counts, std::span<const std::size_t> q_counts,
                   double eps) {
  check_dimension(p_counts.size(), q_counts.size());
  const double leaves = static_cast<double>(p_counts.size());
  const double n_p = static_cast<double>(std::accumulate(p_counts.begin(), p_counts.end(), std::size_t{0}));
  const double n_q = static_cast<double>(std::accumulate(q_counts.begin(), q_counts.end(), std::size_t{0}));
  if (n_p == 0.0 || n_q == 0.0) throw Error("KL needs non-empty histograms");
  const double norm = 1.0 + leaves * eps;
  double kl = 0.0;
  for (std::size_t i = 0; i < p_counts.size(); ++i) {
    const double p = (static_cast<double>(p_counts[i]) / n_p + eps) / norm;
    const double q = (static_cast<double>(q_counts[i]) / n_q + eps) / norm;
    if (p == 0.0) continue;
    if (q == 0.0) return std::numeric_limits<double>::infinity();
    kl += p * std::log(p / q);
  }
  return std::max(0.0, kl);
}

void DistDriftConfig::validate() const {
  if (reference_size < 100 || test_size < 100) {
    throw ConfigError("distdrift window sizes must be >= 100");
  }
  if (bootstrap_replicates < 100) throw ConfigError("distdrift needs >= 100 bootstrap replicates");
  if (!(alpha > 0.0 && alpha < 0.5)) throw ConfigError("distdrift alpha must lie in (0, 0.5)");
}

KdqDriftDetector::KdqDriftDetector(DistDriftConfig config)
    : config_(std::move(config)), rng_(config_.seed) {
  config_.validate();
  reference_.reserve(config_.reference_size);
}

void KdqDriftDetector::fit_reference() {
  tree_ = KdqTree::build(reference_, config_.tree);
  reference_leaves_.clear();
  reference_leaves_.reserve(reference_.size());
  for (const auto& p : reference_) reference_leaves_.push_back(tree_->leaf_of(p));

  std::uniform_int_distribution<std::size_t> pick(0, reference_.size() - 1);
  std::vector<double> stats;
  stats.reserve(config_.bootstrap_replicates);
  std::vector<std::size_t> pseudo_ref(tree_->leaf_count());
  std::vector<std::size_t> pseudo_test(tree_->leaf_count());
  for (std::size_t b = 0; b < config_.bootstrap_replicates; ++b) {
    std::fill(pseudo_ref.begin(), pseudo_ref.end(), 0);
    std::fill(pseudo_test.begin(), pseudo_test.end(), 0);
    for (std::size_t i = 0; i < config_.reference_size; ++i) ++pseudo_ref[reference_leaves_[pick(rng_)]];
    for (std::size_t i = 0; i < config_.test_size; ++i) ++pseudo_test[reference_leaves_[pick(rng_)]];
    stats.push_back(tree_->kl_divergence_counts(pseudo_test, pseudo_ref));
  }
  std::sort(stats.begin(), stats.end());
  const double pos = (1.0 - config_.alpha) * static_cast<double>(stats.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, stats.size() - 1);
  threshold_ = stats[lo] + (pos - static_cast<double>(lo)) * (stats[hi] - stats[lo]);
  reference_.clear();
}

drift::DriftStatus KdqDriftDetector::update(std::span<const double> x) {
  ++seen_;
  if (!tree_) {
    if (!reference_.empty()) check_dimension(reference_.front().size(), x.size());
    reference_.emplace_back(x.begin(), x.end());
    if (reference_.size() == config_.reference_size) fit_reference();
    return drift::DriftStatus::InControl;
  }
  check_dimension(tree_->dimension(), x.size());
  test_.emplace_back(x.begin(), x.end());
  if (test_.size() < config_.test_size) return drift::DriftStatus::InControl;

  WindowResult result;
  result.end_index = seen_;
  result.statistic = tree_->kl_divergence(test_);
  result.threshold = threshold_;
  test_.clear();
  if (result.statistic > threshold_) {
    result.status = drift::DriftStatus::Drift;
    tree_.reset();
    reference_start_ = seen_ + 1;
  }
  last_window_ = result;
  return result.status;
}

std::vector<WindowResult> kdq_detect(const DistDriftConfig& config, std::span<const Point> stream) {
  config.validate();
  const std::size_t needed = config.reference_size + config.test_size;
  if (stream.size() < needed) {
    throw Error("kdq detection needs at least " + std::to_string(needed) + " vectors, got " +
                std::to_string(stream.size()));
  }
  KdqDriftDetector detector(config);
  std::vector<WindowResult> results;
  for (const auto& x : stream) {
    const auto before = detector.last_window() ? detector.last_window()->end_index : 0;
    detector.update(x);
    if (detector.last_window() && detector.last_window()->end_index != before) {
      results.push_back(*detector.last_window());
    }
  }
  return results;
}

}  // namespace hids::distdrift
