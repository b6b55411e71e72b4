#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hids/common/error.hpp"
#include "hids/distdrift/kdq_tree.hpp"

using namespace hids;
using namespace hids::distdrift;

namespace {

std::vector<Point> gaussian(std::size_t n, std::size_t d, std::mt19937_64& rng, double shift = 0.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Point> out(n, Point(d));
  for (auto& p : out) {
    for (auto& v : p) v = g(rng);
    p[0] += shift;
  }
  return out;
}

std::vector<Point> uniform(std::size_t n, std::size_t d, std::mt19937_64& rng, double lo = 0.0,
                           double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<Point> out(n, Point(d));
  for (auto& p : out) {
    for (auto& v : p) v = u(rng);
  }
  return out;
}

// Leaves whose box holds p under the half-open convention, with the outer
// upper face closed. Points outside the bounding box are clamped first.
std::vector<std::size_t> boxes_containing(const KdqTree& tree, Point p) {
  const auto& b = tree.bounds();
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = std::clamp(p[k], b.lo[k], b.hi[k]);
  std::vector<std::size_t> hits;
  const auto& boxes = tree.leaf_boxes();
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    bool in = true;
    for (std::size_t k = 0; k < p.size() && in; ++k) {
      const double lo = boxes[i].lo[k];
      const double hi = boxes[i].hi[k];
      in = lo <= p[k] && (p[k] < hi || (hi == b.hi[k] && p[k] <= hi));
    }
    if (in) hits.push_back(i);
  }
  return hits;
}

double direct_kl(const std::vector<std::size_t>& p, const std::vector<std::size_t>& q, double eps) {
  double np = 0;
  double nq = 0;
  for (const auto c : p) np += c;
  for (const auto c : q) nq += c;
  const double norm = 1.0 + eps * p.size();
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double a = (p[i] / np + eps) / norm;
    const double b = (q[i] / nq + eps) / norm;
    kl += a * std::log(a / b);
  }
  return kl;
}

}  // namespace

TEST_CASE("identical reference points give a single leaf") {
  const std::vector<Point> ref(500, Point{1.0, 2.0, 3.0});
  const auto tree = KdqTree::build(ref);
  CHECK(tree.leaf_count() == 1);
  CHECK(tree.reference_counts() == std::vector<std::size_t>{500});
}

TEST_CASE("2-D uniform reference: stopping rule and partition") {
  std::mt19937_64 rng(1);
  const auto ref = uniform(500, 2, rng);
  KdqTreeParams params;
  params.min_cell_count = 20;
  const auto tree = KdqTree::build(ref, params);
  CHECK(tree.leaf_count() > 10);
  std::size_t total = 0;
  for (const auto c : tree.reference_counts()) {
    CHECK(c < 2 * params.min_cell_count);
    total += c;
  }
  CHECK(total == 500);
  CHECK(tree.depth() <= params.max_depth);
  for (const auto& p : ref) {
    const auto hits = boxes_containing(tree, p);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0] == tree.leaf_of(p));
  }
}

TEST_CASE("every point, inside or outside the reference box, maps to exactly one leaf") {
  std::mt19937_64 rng(2);
  const auto ref = gaussian(500, 3, rng);
  const auto tree = KdqTree::build(ref);
  const auto probes = uniform(2000, 3, rng, -8.0, 8.0);
  for (const auto& p : probes) {
    const auto leaf = tree.leaf_of(p);
    CHECK(leaf < tree.leaf_count());
    const auto hits = boxes_containing(tree, p);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0] == leaf);
  }
}

TEST_CASE("statistic equals a direct KL over leaf histograms") {
  std::mt19937_64 rng(3);
  const auto ref = gaussian(500, 5, rng);
  const auto tree = KdqTree::build(ref);
  for (const double shift : {0.0, 0.5, 3.0}) {
    const auto test = gaussian(500, 5, rng, shift);
    std::vector<std::size_t> p(tree.leaf_count(), 0);
    std::vector<std::size_t> q(tree.leaf_count(), 0);
    for (const auto& x : test) ++p[boxes_containing(tree, x).at(0)];
    for (const auto& x : ref) ++q[boxes_containing(tree, x).at(0)];
    CHECK(q == tree.reference_counts());
    const double direct = direct_kl(p, q, 0.5 / 500);
    CHECK(std::abs(tree.kl_divergence(test) - direct) <= 1e-12);
    CHECK(tree.kl_divergence(test) >= 0.0);
  }
}

TEST_CASE("KL is non-negative and zero for identical histograms") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::size_t> c(0, 30);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::size_t> p(16);
    std::vector<std::size_t> q(16);
    for (auto& v : p) v = c(rng);
    for (auto& v : q) v = c(rng);
    p[0] += 1;
    q[0] += 1;
    CHECK(smoothed_kl(p, q, 0.001) >= 0.0);
    CHECK(smoothed_kl(p, p, 0.001) == doctest::Approx(0.0));
  }
}

TEST_CASE("increasing the smoothing never increases the statistic") {
  std::mt19937_64 rng(5);
  const auto ref = gaussian(500, 2, rng);
  const auto tree = KdqTree::build(ref);
  const auto test = gaussian(500, 2, rng, 1.5);
  const auto p = tree.histogram(test);
  const auto& q = tree.reference_counts();
  bool disagree = false;
  for (std::size_t i = 0; i < p.size(); ++i) disagree |= (p[i] == 0) != (q[i] == 0);
  REQUIRE(disagree);
  double previous = INFINITY;
  for (const double eps : {1e-6, 1e-4, 1e-3, 1e-2, 0.1, 1.0, 10.0}) {
    const double kl = smoothed_kl(p, q, eps);
    CHECK(kl <= previous);
    previous = kl;
  }
}

TEST_CASE("build and KL preconditions") {
  CHECK_THROWS_AS(KdqTree::build(std::vector<Point>{}), Error);
  CHECK_THROWS_AS(KdqTree::build(std::vector<Point>{{1.0, 2.0}, {1.0}}), DimensionError);
  std::mt19937_64 rng(6);
  const auto tree = KdqTree::build(gaussian(200, 2, rng));
  CHECK_THROWS_AS(tree.kl_divergence(std::vector<Point>{{1.0, 2.0, 3.0}}), DimensionError);
}

TEST_CASE("config validation") {
  DistDriftConfig c;
  CHECK_NOTHROW(c.validate());
  c.reference_size = 50;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.alpha = 0.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.bootstrap_replicates = 10;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("kdq_detect: too little data names the minimum") {
  std::mt19937_64 rng(7);
  const auto stream = gaussian(999, 2, rng);
  try {
    kdq_detect(DistDriftConfig{}, stream);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("1000") != std::string::npos);
  }
}

TEST_CASE("a test window resampled from the reference stays below the threshold") {
  std::mt19937_64 rng(8);
  const auto ref = gaussian(500, 5, rng);
  DistDriftConfig cfg;
  KdqDriftDetector det(cfg);
  for (const auto& p : ref) det.update(p);
  REQUIRE(det.has_reference());
  std::uniform_int_distribution<std::size_t> pick(0, ref.size() - 1);
  for (std::size_t i = 0; i < cfg.test_size; ++i) det.update(ref[pick(rng)]);
  REQUIRE(det.last_window().has_value());
  CHECK(det.last_window()->statistic < det.threshold());
  CHECK(det.last_window()->status == drift::DriftStatus::InControl);
}

TEST_CASE("3-sigma shift detected within two windows; the new reference is post-shift") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::mt19937_64 rng(seed);
    auto stream = gaussian(2500, 5, rng);
    const auto after = gaussian(2500, 5, rng, 3.0);
    stream.insert(stream.end(), after.begin(), after.end());
    DistDriftConfig cfg;
    cfg.seed = seed;
    KdqDriftDetector det(cfg);
    std::optional<std::size_t> first_drift;
    for (std::size_t i = 0; i < stream.size(); ++i) {
      if (det.update(stream[i]) == drift::DriftStatus::Drift && !first_drift) {
        first_drift = i + 1;
        CHECK(det.reference_start() == i + 2);
      }
    }
    REQUIRE(first_drift.has_value());
    CHECK(*first_drift > 2500);
    CHECK(*first_drift <= 2500 + 2 * cfg.test_size);
    CHECK(det.reference_start() > 2500);
  }
}

TEST_CASE("kdq_detect reports one result per scored window and is seed-deterministic") {
  std::mt19937_64 rng(9);
  const auto stream = gaussian(3000, 3, rng);
  const auto a = kdq_detect(DistDriftConfig{}, stream);
  const auto b = kdq_detect(DistDriftConfig{}, stream);
  REQUIRE(a.size() == b.size());
  CHECK(a.size() >= 4);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].statistic == b[i].statistic);
    CHECK(a[i].threshold == b[i].threshold);
    CHECK(a[i].end_index % 500 == 0);
  }
}
