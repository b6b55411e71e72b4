#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "hids/drift/factory.hpp"
#include "hids/signature/hoeffding_tree.hpp"

namespace hids::signature {

struct Vote {
  int label = 0;
  // Weighted fraction of trees voting attack.
  double score = 0.0;
};

// Weighted majority vote over binary votes. A tie goes to 0; if every weight
// is zero the vote is unweighted.
Vote weighted_vote(std::span<const double> weights, std::span<const int> votes);

struct ArfParams {
  std::size_t n_estimators = 7;
  std::size_t max_features = 5;
  double lambda = 6.0;
  HoeffdingTreeParams tree{};
  bool drift_detection = true;
  drift::DetectorConfig detector{};
  // Length of the per-tree accuracy window used as the vote weight.
  std::size_t accuracy_window = 200;
  std::uint64_t seed = 1;
};

// One entry per non-InControl status a tree's monitor returned.
struct TreeEvent {
  std::size_t tree = 0;
  drift::DriftStatus status = drift::DriftStatus::InControl;
};

// Adaptive Random Forest: online bagging of Hoeffding trees on random feature
// subsets, each tree paired with a drift monitor. A Warning starts a
// background tree; a Drift swaps it in (or a fresh tree when none exists).
class AdaptiveRandomForest {
 public:
  AdaptiveRandomForest(std::size_t dimension, ArfParams params = {});

  Vote predict(std::span<const double> x) const;
  // Test-then-train step for one labeled record. Returns the warnings and
  // drifts raised by the tree monitors on this record.
  std::vector<TreeEvent> learn(std::span<const double> x, int y);
  // Replaces every tree with a fresh one (new subsets, monitors, weights).
  void reset();

  std::size_t size() const { return members_.size(); }
  std::size_t dimension() const { return dimension_; }
  const ArfParams& params() const { return params_; }
  const HoeffdingTree& tree(std::size_t i) const { return members_.at(i).tree; }
  bool has_background(std::size_t i) const { return members_.at(i).background.has_value(); }
  double weight(std::size_t i) const;
  // Total Poisson weight tree slot i received.
  double bagging_mass(std::size_t i) const { return members_.at(i).bagging_mass; }
  std::size_t replacements(std::size_t i) const { return members_.at(i).replacements; }
  std::size_t total_replacements() const;
  std::size_t records_learned() const { return records_; }

 private:
  struct Member {
    HoeffdingTree tree;
    std::unique_ptr<drift::DriftDetector> monitor;
    std::optional<HoeffdingTree> background;
    std::vector<bool> recent;
    std::size_t recent_next = 0;
    std::size_t recent_correct = 0;
    double bagging_mass = 0.0;
    std::size_t replacements = 0;
  };

  HoeffdingTree make_tree();
  std::unique_ptr<drift::DriftDetector> make_monitor();
  void record_outcome(Member& m, bool correct);
  void reset_accuracy(Member& m);

  std::size_t dimension_;
  ArfParams params_;
  std::mt19937_64 rng_;
  std::vector<Member> members_;
  std::size_t records_ = 0;
  std::uint64_t monitors_made_ = 0;
};

}  // namespace hids::signature
