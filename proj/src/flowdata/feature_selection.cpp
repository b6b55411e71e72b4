#include "hids/flowdata/feature_selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>

namespace hids::flowdata {
namespace {

struct ClassCounts {
  double benign = 0.0;
  double attack = 0.0;

  double total() const { return benign + attack; }
  double gini() const {
    const double n = total();
    if (n <= 0.0) return 0.0;
    const double p0 = benign / n;
    const double p1 = attack / n;
    return 1.0 - p0 * p0 - p1 * p1;
  }
  void add(int y) { (y == 1 ? attack : benign) += 1.0; }
  void remove(int y) { (y == 1 ? attack : benign) -= 1.0; }
};

struct Split {
  std::size_t feature = 0;
  double threshold = 0.0;
  double decrease = 0.0;
};

class ImportanceTree {
 public:
  ImportanceTree(std::span<const FeatureVector> data, const ImportanceForestOptions& options,
                 std::size_t features_per_node, std::uint64_t seed)
      : data_(data),
        options_(options),
        features_per_node_(features_per_node),
        rng_(seed),
        importance_(data.front().dimension(), 0.0),
        total_(static_cast<double>(data.size())) {}

  std::vector<double> grow() {
    std::vector<std::size_t> rows(data_.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    grow_node(rows, 0);
    return importance_;
  }

 private:
  void grow_node(std::vector<std::size_t>& rows, std::size_t depth) {
    ClassCounts counts;
    for (const auto r : rows) counts.add(data_[r].y);
    if (counts.benign == 0.0 || counts.attack == 0.0) return;
    if (depth >= options_.max_depth) return;
    if (counts.total() / total_ < options_.min_node_fraction) return;

    const auto candidates = sample_features();
    std::optional<Split> best;
    for (const auto f : candidates) {
      const auto split = best_split(rows, f, counts);
      if (!split) continue;
      if (!best || split->decrease > best->decrease ||
          (split->decrease == best->decrease && split->feature < best->feature)) {
        best = split;
      }
    }
    if (!best || best->decrease <= 0.0) return;

    importance_[best->feature] += best->decrease;
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (const auto r : rows) {
      (data_[r].x[best->feature] <= best->threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    grow_node(left, depth + 1);
    grow_node(right, depth + 1);
  }

  std::vector<std::size_t> sample_features() {
    const std::size_t d = importance_.size();
    std::vector<std::size_t> all(d);
    std::iota(all.begin(), all.end(), std::size_t{0});
    const std::size_t m = std::min(features_per_node_, d);
    for (std::size_t i = 0; i < m; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, d - 1);
      std::swap(all[i], all[pick(rng_)]);
    }
    all.resize(m);
    return all;
  }

  std::optional<Split> best_split(const std::vector<std::size_t>& rows, std::size_t feature,
                                  const ClassCounts& parent) const {
    std::vector<std::pair<double, int>> column;
    column.reserve(rows.size());
    for (const auto r : rows) column.emplace_back(data_[r].x[feature], data_[r].y);
    std::stable_sort(column.begin(), column.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    ClassCounts left;
    ClassCounts right = parent;
    const double parent_term = parent.total() / total_ * parent.gini();
    std::optional<Split> best;
    for (std::size_t i = 0; i + 1 < column.size(); ++i) {
      left.add(column[i].second);
      right.remove(column[i].second);
      if (!(column[i].first < column[i + 1].first)) continue;
      const double decrease = parent_term - left.total() / total_ * left.gini() -
                              right.total() / total_ * right.gini();
      if (!best || decrease > best->decrease) best = Split{feature, column[i].first, decrease};
    }
    return best;
  }

  std::span<const FeatureVector> data_;
  const ImportanceForestOptions& options_;
  std::size_t features_per_node_;
  std::mt19937_64 rng_;
  std::vector<double> importance_;
  double total_;
};

}  // namespace

std::vector<double> impurity_importance(std::span<const FeatureVector> data,
                                        const ImportanceForestOptions& options) {
  if (data.empty()) throw Error("feature importance needs at least one sample");
  const std::size_t d = data.front().dimension();
  for (const auto& v : data) check_dimension(d, v.dimension());

  const std::size_t per_node =
      options.features_per_node > 0
          ? options.features_per_node
          : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));

  std::vector<double> importance(d, 0.0);
  for (std::size_t t = 0; t < options.n_trees; ++t) {
    ImportanceTree tree(data, options, per_node, options.seed + 0x9E3779B97F4A7C15ULL * (t + 1));
    const auto tree_importance = tree.grow();
    const double sum = std::accumulate(tree_importance.begin(), tree_importance.end(), 0.0);
    if (sum <= 0.0) continue;
    for (std::size_t i = 0; i < d; ++i) importance[i] += tree_importance[i] / sum;
  }
  const double total = std::accumulate(importance.begin(), importance.end(), 0.0);
  if (total > 0.0) {
    for (auto& v : importance) v /= total;
  }
  return importance;
}

std::vector<std::size_t> select_features(std::span<const FeatureVector> warmup, std::size_t k,
                                         const ImportanceForestOptions& options) {
  if (warmup.empty()) throw Error("feature selection needs a non-empty warmup");
  const std::size_t d = warmup.front().dimension();
  if (k < 1 || k > d) {
    throw Error("feature selection k=" + std::to_string(k) + " outside [1, " +
                std::to_string(d) + "]");
  }
  const bool has_benign =
      std::any_of(warmup.begin(), warmup.end(), [](const auto& v) { return v.y == 0; });
  const bool has_attack =
      std::any_of(warmup.begin(), warmup.end(), [](const auto& v) { return v.y == 1; });
  if (!has_benign || !has_attack) {
    throw Error("feature importance is undefined on a single-class warmup");
  }

  const auto importance = impurity_importance(warmup, options);
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return importance[a] > importance[b];
  });
  order.resize(k);
  return order;
}

}  // namespace hids::flowdata
