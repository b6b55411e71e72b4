#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace hids::signature {

// Hoeffding bound sqrt(R^2 ln(1/delta) / (2n)).
double hoeffding_bound(double range, double confidence, double n);

using ClassProba = std::array<double, 2>;

struct HoeffdingTreeParams {
  // Weight a leaf must accumulate between split attempts.
  double grace_period = 50.0;
  double split_confidence = 1e-7;
  double tie_threshold = 0.05;
  // Laplace smoothing added to each class count at prediction time.
  double laplace = 1.0;
  // Candidate thresholds tried per feature, evenly spaced in the observed range.
  std::size_t split_points = 10;
  std::size_t max_depth = 20;
};

// Weighted running mean and variance of one feature for one class.
class GaussianEstimator {
 public:
  void add(double value, double weight);

  double weight() const { return weight_; }
  double mean() const { return mean_; }
  double variance() const;
  double min() const { return min_; }
  double max() const { return max_; }
  // Estimated weight of observations <= v: 0 below the observed minimum,
  // everything at or above the maximum, a normal CDF in between.
  double weight_at_most(double v) const;

 private:
  double weight_ = 0.0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double min_ = 0.0;
  double max_ = 0.0;
};

// Information gain of splitting class counts `parent` into `left`/`right`
// (entropy in bits).
double information_gain(const ClassProba& parent, const ClassProba& left, const ClassProba& right);

struct SplitCandidate {
  std::size_t feature = 0;
  double threshold = 0.0;
  double merit = 0.0;
  ClassProba left{};
  ClassProba right{};
};

// Very Fast Decision Tree for binary labels over numeric features.
//
// The tree only observes and splits on the features it was given. Leaves keep
// per-class Gaussian estimators for each of those features; split candidates
// are evaluated every grace_period of weight and accepted by the Hoeffding
// test against the runner-up (including "no split").
class HoeffdingTree {
 public:
  HoeffdingTree(std::size_t dimension, std::vector<std::size_t> features,
                HoeffdingTreeParams params = {});

  void learn(std::span<const double> x, int y, double weight);
  ClassProba predict_proba(std::span<const double> x) const;
  // argmax of predict_proba; ties go to 0.
  int predict(std::span<const double> x) const;

  std::size_t dimension() const { return dimension_; }
  const std::vector<std::size_t>& features() const { return features_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t leaf_count() const;
  std::size_t depth() const;
  // Features used by internal nodes, in node order.
  std::vector<std::size_t> split_features() const;
  // Root split, if the root has split.
  std::optional<std::pair<std::size_t, double>> root_split() const;
  // Weighted class counts of the leaf x falls into.
  ClassProba leaf_counts(std::span<const double> x) const;

 private:
  struct Leaf {
    ClassProba counts{};
    // Estimated branch counts at creation; used for predictions until the
    // leaf has seen data.
    ClassProba prior{};
    double weight_at_last_attempt = 0.0;
    // estimators[k][c] for the k-th tracked feature and class c.
    std::vector<std::array<GaussianEstimator, 2>> estimators;
  };
  struct Node {
    std::size_t feature = 0;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::size_t depth = 0;
    std::optional<Leaf> leaf;
  };

  std::size_t route(std::span<const double> x) const;
  void attempt_split(std::size_t node_index);
  std::optional<SplitCandidate> best_split_for(const Leaf& leaf, std::size_t k) const;
  Leaf make_leaf(const ClassProba& prior) const;

  std::size_t dimension_;
  std::vector<std::size_t> features_;
  HoeffdingTreeParams params_;
  std::vector<Node> nodes_;
};

}  // namespace hids::signature
