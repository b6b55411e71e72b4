#include "hids/signature/hoeffding_tree.hpp"

#include <algorithm>
#include <cmath>

#include "hids/common/error.hpp"

namespace hids::signature {
namespace {

double entropy(const ClassProba& counts) {
  const double total = counts[0] + counts[1];
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (const double c : counts) {
    if (c <= 0.0) continue;
    const double p = c / total;
    h -= p * std::log2(p);
  }
  return h;
}

double total(const ClassProba& c) { return c[0] + c[1]; }

}  // namespace

double hoeffding_bound(double range, double confidence, double n) {
  return std::sqrt(range * range * std::log(1.0 / confidence) / (2.0 * n));
}

void GaussianEstimator::add(double value, double weight) {
  if (weight_ == 0.0) {
    weight_ = weight;
    mean_ = value;
    m2_ = 0.0;
    min_ = max_ = value;
    return;
  }
  weight_ += weight;
  const double delta = value - mean_;
  mean_ += weight / weight_ * delta;
  m2_ += weight * delta * (value - mean_);
  min_ = std::min(min_, value);
  max_ = std::max(max_, value);
}

double GaussianEstimator::variance() const {
  return weight_ > 1.0 ? std::max(0.0, m2_) / (weight_ - 1.0) : 0.0;
}

double GaussianEstimator::weight_at_most(double v) const {
  if (weight_ == 0.0 || v < min_) return 0.0;
  if (v >= max_) return weight_;
  const double sd = std::sqrt(variance());
  if (sd <= 0.0) return v >= mean_ ? weight_ : 0.0;
  const double z = (v - mean_) / sd;
  return weight_ * 0.5 * std::erfc(-z / std::sqrt(2.0));
}

double information_gain(const ClassProba& parent, const ClassProba& left, const ClassProba& right) {
  const double n = total(parent);
  if (n <= 0.0) return 0.0;
  return entropy(parent) - total(left) / n * entropy(left) - total(right) / n * entropy(right);
}

HoeffdingTree::HoeffdingTree(std::size_t dimension, std::vector<std::size_t> features,
                             HoeffdingTreeParams params)
    : dimension_(dimension), features_(std::move(features)), params_(params) {
  if (features_.empty()) throw ConfigError("Hoeffding tree needs at least one feature");
  for (const auto f : features_) {
    if (f >= dimension_) throw ConfigError("Hoeffding tree feature index out of range");
  }
  if (!(params_.grace_period > 0.0)) throw ConfigError("grace period must be positive");
  if (!(params_.split_confidence > 0.0 && params_.split_confidence < 1.0)) {
    throw ConfigError("split confidence must lie in (0, 1)");
  }
  Node root;
  root.leaf = make_leaf({0.0, 0.0});
  nodes_.push_back(std::move(root));
}

HoeffdingTree::Leaf HoeffdingTree::make_leaf(const ClassProba& prior) const {
  Leaf leaf;
  leaf.prior = prior;
  leaf.estimators.resize(features_.size());
  return leaf;
}

std::size_t HoeffdingTree::route(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes_[i].leaf) {
    const auto& node = nodes_[i];
    i = static_cast<std::size_t>(x[node.feature] <= node.threshold ? node.left : node.right);
  }
  return i;
}

void HoeffdingTree::learn(std::span<const double> x, int y, double weight) {
  check_dimension(dimension_, x.size());
  if (!(weight > 0.0)) throw Error("Hoeffding tree weight must be positive");
  if (y != 0 && y != 1) throw Error("Hoeffding tree labels must be 0 or 1");

  const std::size_t index = route(x);
  Leaf& leaf = *nodes_[index].leaf;
  leaf.counts[static_cast<std::size_t>(y)] += weight;
  for (std::size_t k = 0; k < features_.size(); ++k) {
    leaf.estimators[k][static_cast<std::size_t>(y)].add(x[features_[k]], weight);
  }
  const double seen = total(leaf.counts);
  if (seen - leaf.weight_at_last_attempt >= params_.grace_period) {
    leaf.weight_at_last_attempt = seen;
    attempt_split(index);
  }
}

std::optional<SplitCandidate> HoeffdingTree::best_split_for(const Leaf& leaf, std::size_t k) const {
  const auto& est = leaf.estimators[k];
  const ClassProba parent{est[0].weight(), est[1].weight()};
  double lo = 0.0;
  double hi = 0.0;
  bool any = false;
  for (const auto& e : est) {
    if (e.weight() <= 0.0) continue;
    lo = any ? std::min(lo, e.min()) : e.min();
    hi = any ? std::max(hi, e.max()) : e.max();
    any = true;
  }
  if (!any || !(lo < hi)) return std::nullopt;

  std::optional<SplitCandidate> best;
  const double step = (hi - lo) / static_cast<double>(params_.split_points + 1);
  for (std::size_t i = 1; i <= params_.split_points; ++i) {
    const double t = lo + step * static_cast<double>(i);
    SplitCandidate c;
    c.feature = features_[k];
    c.threshold = t;
    for (std::size_t cls = 0; cls < 2; ++cls) {
      c.left[cls] = est[cls].weight_at_most(t);
      c.right[cls] = parent[cls] - c.left[cls];
    }
    c.merit = information_gain(parent, c.left, c.right);
    if (!best || c.merit > best->merit) best = c;
  }
  return best;
}

void HoeffdingTree::attempt_split(std::size_t node_index) {
  const Leaf& leaf = *nodes_[node_index].leaf;
  if (leaf.counts[0] <= 0.0 || leaf.counts[1] <= 0.0) return;
  if (nodes_[node_index].depth >= params_.max_depth) return;

  std::vector<SplitCandidate> candidates;
  for (std::size_t k = 0; k < features_.size(); ++k) {
    if (auto c = best_split_for(leaf, k)) candidates.push_back(*c);
  }
  if (candidates.empty()) return;
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& a, const auto& b) { return a.merit > b.merit; });
  const SplitCandidate best = candidates.front();
  // The null split (no split) has merit 0.
  const double runner_up = candidates.size() > 1 ? std::max(candidates[1].merit, 0.0) : 0.0;
  if (best.merit <= 0.0) return;

  const double eps = hoeffding_bound(1.0, params_.split_confidence, total(leaf.counts));
  if (!(best.merit - runner_up > eps || eps < params_.tie_threshold)) return;

  const std::size_t depth = nodes_[node_index].depth;
  Node left;
  left.depth = depth + 1;
  left.leaf = make_leaf(best.left);
  Node right;
  right.depth = depth + 1;
  right.leaf = make_leaf(best.right);
  nodes_.push_back(std::move(left));
  nodes_.push_back(std::move(right));

  Node& node = nodes_[node_index];
  node.leaf.reset();
  node.feature = best.feature;
  node.threshold = best.threshold;
  node.left = static_cast<int>(nodes_.size() - 2);
  node.right = static_cast<int>(nodes_.size() - 1);
}

ClassProba HoeffdingTree::leaf_counts(std::span<const double> x) const {
  check_dimension(dimension_, x.size());
  return nodes_[route(x)].leaf->counts;
}

ClassProba HoeffdingTree::predict_proba(std::span<const double> x) const {
  check_dimension(dimension_, x.size());
  const Leaf& leaf = *nodes_[route(x)].leaf;
  const ClassProba& counts = total(leaf.counts) > 0.0 ? leaf.counts : leaf.prior;
  const double denom = total(counts) + 2.0 * params_.laplace;
  if (denom <= 0.0) return {0.5, 0.5};
  return {(counts[0] + params_.laplace) / denom, (counts[1] + params_.laplace) / denom};
}

int HoeffdingTree::predict(std::span<const double> x) const {
  const auto p = predict_proba(x);
  return p[1] > p[0] ? 1 : 0;
}

std::size_t HoeffdingTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.leaf.has_value(); }));
}

std::size_t HoeffdingTree::depth() const {
  std::size_t d = 0;
  for (const auto& n : nodes_) d = std::max(d, n.depth);
  return d;
}

std::vector<std::size_t> HoeffdingTree::split_features() const {
  std::vector<std::size_t> out;
  for (const auto& n : nodes_) {
    if (!n.leaf) out.push_back(n.feature);
  }
  return out;
}

std::optional<std::pair<std::size_t, double>> HoeffdingTree::root_split() const {
  if (nodes_.front().leaf) return std::nullopt;
  return std::make_pair(nodes_.front().feature, nodes_.front().threshold);
}

}  // namespace hids::signature
