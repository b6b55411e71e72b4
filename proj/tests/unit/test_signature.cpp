#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "hids/common/error.hpp"
#include "hids/signature/arf.hpp"

using namespace hids;
using namespace hids::signature;

namespace {

struct Sample {
  std::vector<double> x;
  int y;
};

// Label = x[feature] > threshold; other coordinates uniform noise.
std::vector<Sample> threshold_stream(std::size_t n, std::size_t dim, std::size_t feature,
                                     double threshold, std::uint64_t seed, bool flip_at_half = false,
                                     std::size_t flip_at = 0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Sample> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].x.resize(dim);
    for (auto& v : out[i].x) v = u(rng);
    out[i].y = out[i].x[feature] > threshold ? 1 : 0;
    if (flip_at_half && i >= flip_at) out[i].y = 1 - out[i].y;
  }
  return out;
}

double entropy_bits(double a, double b) {
  const double n = a + b;
  double h = 0.0;
  for (const double c : {a, b}) {
    if (c > 0) h -= c / n * std::log2(c / n);
  }
  return h;
}

// Exhaustive depth-1 tree: the threshold between sorted neighbours that
// maximizes information gain.
double batch_stump_threshold(std::vector<Sample> data) {
  std::sort(data.begin(), data.end(), [](const Sample& a, const Sample& b) { return a.x[0] < b.x[0]; });
  double total1 = 0;
  for (const auto& s : data) total1 += s.y;
  const double n = static_cast<double>(data.size());
  const double h = entropy_bits(n - total1, total1);
  double best = -1.0;
  double best_t = 0.0;
  double left1 = 0;
  for (std::size_t i = 0; i + 1 < data.size(); ++i) {
    left1 += data[i].y;
    const double nl = static_cast<double>(i + 1);
    const double nr = n - nl;
    const double gain = h - nl / n * entropy_bits(nl - left1, left1) -
                        nr / n * entropy_bits(nr - (total1 - left1), total1 - left1);
    if (gain > best) {
      best = gain;
      best_t = 0.5 * (data[i].x[0] + data[i + 1].x[0]);
    }
  }
  return best_t;
}

}  // namespace

TEST_CASE("hoeffding bound at R=1, delta=1e-7, n=1000") {
  const double direct = std::sqrt(std::log(1.0 / 1e-7) / (2.0 * 1000.0));
  CHECK(hoeffding_bound(1.0, 1e-7, 1000.0) == doctest::Approx(direct).epsilon(1e-14));
  CHECK(std::abs(hoeffding_bound(1.0, 1e-7, 1000.0) - 0.0897) <= 1e-4);
}

TEST_CASE("information gain in bits") {
  CHECK(information_gain({5, 5}, {5, 0}, {0, 5}) == doctest::Approx(1.0));
  CHECK(information_gain({5, 5}, {3, 3}, {2, 2}) == doctest::Approx(0.0));
  const double expected = entropy_bits(6, 4) - 0.5 * entropy_bits(5, 0) - 0.5 * entropy_bits(1, 4);
  CHECK(information_gain({6, 4}, {5, 0}, {1, 4}) == doctest::Approx(expected));
}

TEST_CASE("gaussian estimator") {
  GaussianEstimator g;
  g.add(1.0, 1.0);
  g.add(3.0, 1.0);
  g.add(5.0, 2.0);
  CHECK(g.weight() == 4.0);
  CHECK(g.mean() == doctest::Approx(3.5));
  CHECK(g.min() == 1.0);
  CHECK(g.max() == 5.0);
  CHECK(g.weight_at_most(0.5) == 0.0);
  CHECK(g.weight_at_most(5.0) == 4.0);
  const double mid = g.weight_at_most(3.5);
  CHECK(mid == doctest::Approx(2.0));
}

TEST_CASE("untrained tree predicts uniform; one record gives a single leaf of its class") {
  HoeffdingTree t(3, {0, 1, 2});
  const std::vector<double> x{0.1, 0.2, 0.3};
  const auto p = t.predict_proba(x);
  CHECK(p[0] == 0.5);
  CHECK(p[1] == 0.5);
  CHECK(t.predict(x) == 0);
  t.learn(x, 1, 1.0);
  CHECK(t.leaf_count() == 1);
  CHECK(t.predict(x) == 1);
  CHECK(t.predict(std::vector<double>{9, 9, 9}) == 1);
}

TEST_CASE("Laplace smoothing: counts (9, 1) give (10/12, 2/12)") {
  HoeffdingTree t(1, {0});
  for (int i = 0; i < 9; ++i) t.learn(std::vector<double>{0.1 * i}, 0, 1.0);
  t.learn(std::vector<double>{0.95}, 1, 1.0);
  const std::vector<double> probe{0.5};
  CHECK(t.leaf_counts(probe)[0] == 9.0);
  CHECK(t.leaf_counts(probe)[1] == 1.0);
  const auto p = t.predict_proba(probe);
  CHECK(p[0] == doctest::Approx(10.0 / 12.0));
  CHECK(p[1] == doctest::Approx(2.0 / 12.0));
}

TEST_CASE("probabilities sum to 1 and dimension is checked") {
  HoeffdingTree t(2, {0, 1});
  const auto data = threshold_stream(2000, 2, 1, 0.3, 1);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2.0, 3.0);
  for (const auto& s : data) t.learn(s.x, s.y, 1.0);
  for (int i = 0; i < 200; ++i) {
    const std::vector<double> x{u(rng), u(rng)};
    const auto p = t.predict_proba(x);
    CHECK(p[0] + p[1] == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(t.predict(std::vector<double>{1.0}), DimensionError);
  CHECK_THROWS_AS(t.learn(std::vector<double>{1.0}, 0, 1.0), DimensionError);
  CHECK_THROWS_AS(t.learn(std::vector<double>{1.0, 2.0}, 0, 0.0), Error);
}

TEST_CASE("1-D threshold data: root split near the batch stump, accuracy >= 0.95") {
  const auto train = threshold_stream(5000, 1, 0, 0.37, 3);
  HoeffdingTree t(1, {0});
  for (const auto& s : train) t.learn(s.x, s.y, 1.0);
  const auto root = t.root_split();
  REQUIRE(root.has_value());
  CHECK(root->first == 0);
  const double oracle = batch_stump_threshold(train);
  CHECK(std::abs(oracle - 0.37) < 0.01);
  CHECK(std::abs(root->second - oracle) < 0.05);

  const auto test = threshold_stream(2000, 1, 0, 0.37, 4);
  std::size_t correct = 0;
  for (const auto& s : test) correct += t.predict(s.x) == s.y;
  CHECK(static_cast<double>(correct) / test.size() >= 0.95);
}

TEST_CASE("tree only splits on its assigned features") {
  const auto data = threshold_stream(5000, 6, 2, 0.5, 5);
  HoeffdingTree t(6, {0, 3, 5});
  for (const auto& s : data) t.learn(s.x, s.y, 1.0);
  for (const auto f : t.split_features()) CHECK((f == 0 || f == 3 || f == 5));
}

TEST_CASE("weighted vote") {
  const std::vector<double> ones(7, 1.0);
  const auto v = weighted_vote(ones, std::vector<int>{1, 1, 1, 1, 0, 0, 0});
  CHECK(v.label == 1);
  CHECK(v.score == doctest::Approx(4.0 / 7.0));
  const auto all = weighted_vote(ones, std::vector<int>(7, 1));
  CHECK(all.label == 1);
  CHECK(all.score == 1.0);
  const auto tie = weighted_vote(std::vector<double>(4, 1.0), std::vector<int>{1, 0, 1, 0});
  CHECK(tie.label == 0);
  CHECK(tie.score == 0.5);
  const auto zero = weighted_vote(std::vector<double>(3, 0.0), std::vector<int>{1, 1, 0});
  CHECK(zero.label == 1);
  CHECK(zero.score == doctest::Approx(2.0 / 3.0));
  const auto weighted = weighted_vote(std::vector<double>{0.9, 0.1, 0.1}, std::vector<int>{0, 1, 1});
  CHECK(weighted.label == 0);
}

TEST_CASE("ARF: configuration accepted verbatim, feature subsets respected") {
  ArfParams p;
  p.n_estimators = 7;
  p.max_features = 5;
  p.detector.kind = drift::parse_detector_kind("ADWIN");
  AdaptiveRandomForest f(10, p);
  CHECK(f.size() == 7);
  CHECK(f.params().max_features == 5);
  CHECK(f.params().detector.kind == drift::DetectorKind::Adwin);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(f.tree(i).features().size() == 5);

  const auto data = threshold_stream(3000, 10, 4, 0.5, 6);
  for (const auto& s : data) f.learn(s.x, s.y);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto& feats = f.tree(i).features();
    const std::set<std::size_t> allowed(feats.begin(), feats.end());
    for (const auto s : f.tree(i).split_features()) CHECK(allowed.count(s) == 1);
  }

  AdaptiveRandomForest small(3, p);
  CHECK(small.tree(0).features().size() == 3);
}

TEST_CASE("ARF: untrained forest votes benign") {
  AdaptiveRandomForest f(4);
  const auto v = f.predict(std::vector<double>{0, 0, 0, 0});
  CHECK(v.label == 0);
}

TEST_CASE("ARF: stationary separable stream causes no replacements") {
  std::size_t clean_runs = 0;
  const std::size_t runs = 20;
  for (std::uint64_t seed = 0; seed < runs; ++seed) {
    ArfParams p;
    p.seed = seed;
    AdaptiveRandomForest f(5, p);
    for (const auto& s : threshold_stream(10000, 5, 0, 0.5, seed + 1000)) {
      f.learn(s.x, s.y);
      CHECK(f.size() == 7);
    }
    clean_runs += f.total_replacements() == 0;
  }
  CHECK(clean_runs >= 19);
}

TEST_CASE("ARF: label flip replaces every tree within 2000 records") {
  ArfParams p;
  p.seed = 3;
  AdaptiveRandomForest f(5, p);
  const auto data = threshold_stream(7000, 5, 0, 0.5, 11, true, 5000);
  for (std::size_t i = 0; i < 5000; ++i) f.learn(data[i].x, data[i].y);
  std::vector<std::size_t> before(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) before[i] = f.replacements(i);
  std::size_t warnings = 0;
  for (std::size_t i = 5000; i < 7000; ++i) {
    for (const auto& e : f.learn(data[i].x, data[i].y)) {
      warnings += e.status == drift::DriftStatus::Warning;
    }
    CHECK(f.size() == 7);
  }
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(f.replacements(i) > before[i]);
  CHECK(warnings > 0);
}

TEST_CASE("ARF: online bagging mass converges to lambda") {
  ArfParams p;
  p.drift_detection = false;
  p.seed = 5;
  AdaptiveRandomForest f(2, p);
  const std::size_t n = 100000;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double> x{u(rng), u(rng)};
    f.learn(x, x[0] > 0.5 ? 1 : 0);
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(std::abs(f.bagging_mass(i) / n - 6.0) / 6.0 < 0.05);
  }
}

TEST_CASE("ARF: deterministic under a fixed seed") {
  const auto data = threshold_stream(4000, 6, 1, 0.4, 9, true, 2000);
  ArfParams p;
  p.seed = 42;
  AdaptiveRandomForest a(6, p);
  AdaptiveRandomForest b(6, p);
  for (const auto& s : data) {
    CHECK(a.predict(s.x).score == b.predict(s.x).score);
    const auto ea = a.learn(s.x, s.y);
    const auto eb = b.learn(s.x, s.y);
    REQUIRE(ea.size() == eb.size());
  }
  CHECK(a.total_replacements() == b.total_replacements());
}

TEST_CASE("ARF: vote weights are recent accuracies") {
  AdaptiveRandomForest f(3);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(f.weight(i) == 0.0);
  const auto data = threshold_stream(1000, 3, 0, 0.5, 12);
  for (const auto& s : data) f.learn(s.x, s.y);
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(f.weight(i) >= 0.0);
    CHECK(f.weight(i) <= 1.0);
  }
  CHECK_THROWS_AS(f.learn(std::vector<double>{1, 2, 3}, 2), Error);
}
