#include "hids/signature/arf.hpp"

#include <algorithm>
#include <numeric>

#include "hids/common/error.hpp"

namespace hids::signature {

Vote weighted_vote(std::span<const double> weights, std::span<const int> votes) {
  check_dimension(weights.size(), votes.size());
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  const bool unweighted = !(total > 0.0);
  double attack = 0.0;
  double benign = 0.0;
  for (std::size_t i = 0; i < votes.size(); ++i) {
    const double w = unweighted ? 1.0 : weights[i];
    (votes[i] == 1 ? attack : benign) += w;
  }
  total = attack + benign;
  Vote v;
  v.score = total > 0.0 ? attack / total : 0.0;
  v.label = attack > benign ? 1 : 0;
  return v;
}

AdaptiveRandomForest::AdaptiveRandomForest(std::size_t dimension, ArfParams params)
    : dimension_(dimension), params_(std::move(params)), rng_(params_.seed) {
  if (dimension_ == 0) throw ConfigError("ARF needs a positive feature dimension");
  if (params_.n_estimators == 0) throw ConfigError("ARF needs n_estimators >= 1");
  if (params_.max_features == 0) throw ConfigError("ARF needs max_features >= 1");
  if (!(params_.lambda > 0.0)) throw ConfigError("ARF lambda must be positive");
  if (params_.accuracy_window == 0) throw ConfigError("ARF accuracy window must be positive");
  reset();
}

void AdaptiveRandomForest::reset() {
  members_.clear();
  members_.reserve(params_.n_estimators);
  for (std::size_t i = 0; i < params_.n_estimators; ++i) {
    members_.push_back(Member{make_tree(), make_monitor(), std::nullopt, {}, 0, 0, 0.0, 0});
  }
}

HoeffdingTree AdaptiveRandomForest::make_tree() {
  const std::size_t k = std::min(params_.max_features, dimension_);
  std::vector<std::size_t> all(dimension_);
  std::iota(all.begin(), all.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, dimension_ - 1);
    std::swap(all[i], all[pick(rng_)]);
  }
  all.resize(k);
  std::sort(all.begin(), all.end());
  return HoeffdingTree(dimension_, std::move(all), params_.tree);
}

std::unique_ptr<drift::DriftDetector> AdaptiveRandomForest::make_monitor() {
  if (!params_.drift_detection) return nullptr;
  const std::uint64_t seed = params_.seed * 0x9E3779B97F4A7C15ULL + ++monitors_made_;
  return drift::make_detector(params_.detector, seed);
}

double AdaptiveRandomForest::weight(std::size_t i) const {
  const auto& m = members_.at(i);
  if (m.recent.empty()) return 0.0;
  return static_cast<double>(m.recent_correct) / static_cast<double>(m.recent.size());
}

std::size_t AdaptiveRandomForest::total_replacements() const {
  std::size_t n = 0;
  for (const auto& m : members_) n += m.replacements;
  return n;
}

void AdaptiveRandomForest::record_outcome(Member& m, bool correct) {
  if (m.recent.size() < params_.accuracy_window) {
    m.recent.push_back(correct);
  } else {
    if (m.recent[m.recent_next]) --m.recent_correct;
    m.recent[m.recent_next] = correct;
    m.recent_next = (m.recent_next + 1) % params_.accuracy_window;
  }
  if (correct) ++m.recent_correct;
}

void AdaptiveRandomForest::reset_accuracy(Member& m) {
  m.recent.clear();
  m.recent_next = 0;
  m.recent_correct = 0;
}

Vote AdaptiveRandomForest::predict(std::span<const double> x) const {
  check_dimension(dimension_, x.size());
  std::vector<double> weights(members_.size());
  std::vector<int> votes(members_.size());
  for (std::size_t i = 0; i < members_.size(); ++i) {
    weights[i] = weight(i);
    votes[i] = members_[i].tree.predict(x);
  }
  return weighted_vote(weights, votes);
}

std::vector<TreeEvent> AdaptiveRandomForest::learn(std::span<const double> x, int y) {
  check_dimension(dimension_, x.size());
  if (y != 0 && y != 1) throw Error("ARF labels must be 0 or 1");
  ++records_;
  std::vector<TreeEvent> events;
  std::poisson_distribution<int> poisson(params_.lambda);

  for (std::size_t i = 0; i < members_.size(); ++i) {
    Member& m = members_[i];
    const bool correct = m.tree.predict(x) == y;
    record_outcome(m, correct);

    const int k = poisson(rng_);
    m.bagging_mass += k;
    if (k > 0) {
      m.tree.learn(x, y, k);
      if (m.background) m.background->learn(x, y, k);
    }
    if (!m.monitor) continue;

    const auto status = m.monitor->update(correct ? 0.0 : 1.0);
    if (status == drift::DriftStatus::Warning) {
      events.push_back({i, status});
      if (!m.background) m.background = make_tree();
    } else if (status == drift::DriftStatus::Drift) {
      events.push_back({i, status});
      m.tree = m.background ? std::move(*m.background) : make_tree();
      m.background.reset();
      m.monitor = make_monitor();
      reset_accuracy(m);
      ++m.replacements;
    }
  }
  return events;
}

}  // namespace hids::signature
