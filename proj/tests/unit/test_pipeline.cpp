#include <doctest.h>

#include <map>
#include <random>
#include <utility>

#include "hids/common/error.hpp"
#include "hids/pipeline/pipeline.hpp"
#include "hids/streams/generator.hpp"

using namespace hids;
using namespace hids::pipeline;

namespace {

struct SignatureProbe {
  int vote = 0;
  std::size_t learned = 0;
  std::size_t resets = 0;
  // learn() call number (1-based) -> event to emit.
  std::map<std::size_t, signature::TreeEvent> events;
};

class StubSignature final : public SignatureStage {
 public:
  explicit StubSignature(SignatureProbe& p) : p_(p) {}
  signature::Vote predict(std::span<const double>) override {
    return {p_.vote, static_cast<double>(p_.vote)};
  }
  std::vector<signature::TreeEvent> learn(std::span<const double>, int) override {
    ++p_.learned;
    const auto it = p_.events.find(p_.learned);
    if (it == p_.events.end()) return {};
    return {it->second};
  }
  void reset() override { ++p_.resets; }
  std::string detector_name() const override { return "STUB"; }

 private:
  SignatureProbe& p_;
};

struct AnomalyProbe {
  std::optional<double> score = 1.0;
  std::size_t scored = 0;
  std::size_t learned = 0;
  std::size_t observed = 0;
  std::size_t resets = 0;
  drift::DriftStatus next_status = drift::DriftStatus::InControl;
};

class StubAnomaly final : public AnomalyStage {
 public:
  explicit StubAnomaly(AnomalyProbe& p) : p_(p) {}
  std::optional<double> score(std::span<const double>) override {
    ++p_.scored;
    return p_.score;
  }
  void learn(std::span<const double>) override { ++p_.learned; }
  drift::DriftStatus observe_outcome(bool, int) override {
    ++p_.observed;
    return std::exchange(p_.next_status, drift::DriftStatus::InControl);
  }
  void reset() override { ++p_.resets; }
  std::string detector_name() const override { return "STUB"; }

 private:
  AnomalyProbe& p_;
};

HybridPipeline stub_pipeline(SignatureProbe& s, AnomalyProbe& a, PipelineOptions o = {}) {
  return HybridPipeline(std::make_unique<StubSignature>(s), std::make_unique<StubAnomaly>(a),
                        std::move(o));
}

FeatureVector fv(std::vector<double> x, int y) { return {std::move(x), y}; }

std::unique_ptr<HybridPipeline> real_pipeline(std::size_t dim, std::uint64_t seed) {
  signature::ArfParams sp;
  sp.seed = seed;
  anomaly::OcSvmParams ap;
  ap.seed = seed + 1;
  return std::make_unique<HybridPipeline>(
      std::make_unique<ArfSignatureStage>(dim, sp),
      std::make_unique<OcSvmAnomalyStage>(dim, ap, drift::DetectorConfig{}));
}

}  // namespace

TEST_CASE("cascade truth table with the anomaly invocation counter") {
  struct Row {
    int vote;
    double score;
    VerdictKind expected;
  };
  const Row rows[] = {
      {1, 0.7, VerdictKind::KnownAttack},
      {1, -0.7, VerdictKind::KnownAttack},
      {0, 0.7, VerdictKind::Benign},
      {0, -0.7, VerdictKind::UnknownAttack},
  };
  for (const auto& row : rows) {
    SignatureProbe s;
    AnomalyProbe a;
    s.vote = row.vote;
    a.score = row.score;
    auto p = stub_pipeline(s, a);
    const auto v = p.process(fv({0.0}, 0));
    CHECK(v.kind == row.expected);
    if (row.vote == 1) {
      CHECK(a.scored == 0);
      CHECK(p.anomaly_invocations() == 0);
      CHECK_FALSE(v.anomaly_score.has_value());
    } else {
      CHECK(a.scored == 1);
      CHECK(p.anomaly_invocations() == 1);
      REQUIRE(v.anomaly_score.has_value());
      CHECK(*v.anomaly_score == row.score);
    }
  }
}

TEST_CASE("anomaly score of exactly 0 is benign") {
  SignatureProbe s;
  AnomalyProbe a;
  a.score = 0.0;
  auto p = stub_pipeline(s, a);
  CHECK(p.process(fv({0.0}, 0)).kind == VerdictKind::Benign);
}

TEST_CASE("cold start policy") {
  SignatureProbe s;
  AnomalyProbe a;
  a.score = std::nullopt;
  auto p = stub_pipeline(s, a);
  const auto v = p.process(fv({0.0}, 0));
  CHECK(v.kind == VerdictKind::Benign);
  CHECK(v.cold_start);
  CHECK_FALSE(v.anomaly_score.has_value());

  PipelineOptions o;
  o.cold_start = ColdStartPolicy::UnknownAttack;
  auto q = stub_pipeline(s, a, o);
  const auto w = q.process(fv({0.0}, 0));
  CHECK(w.kind == VerdictKind::UnknownAttack);
  CHECK(w.cold_start);
}

TEST_CASE("alert count equals non-benign verdicts; sink sees each alert") {
  SignatureProbe s;
  AnomalyProbe a;
  auto p = stub_pipeline(s, a);
  std::vector<Alert> alerts;
  p.set_alert_sink([&](const Alert& al) { alerts.push_back(al); });
  std::mt19937_64 rng(1);
  std::bernoulli_distribution coin(0.5);
  std::size_t non_benign = 0;
  std::vector<std::size_t> indices;
  for (std::size_t i = 1; i <= 200; ++i) {
    s.vote = coin(rng) ? 1 : 0;
    a.score = coin(rng) ? 1.0 : -1.0;
    const auto v = p.process(fv({0.0}, 0));
    if (v.is_attack()) {
      ++non_benign;
      indices.push_back(i);
    }
    p.update(fv({0.0}, 0), v);
  }
  CHECK(p.alert_count() == non_benign);
  REQUIRE(alerts.size() == non_benign);
  for (std::size_t i = 0; i < alerts.size(); ++i) {
    CHECK(alerts[i].index == indices[i]);
    CHECK_FALSE(alerts[i].timestamp_ns.has_value());
    CHECK(alerts[i].kind != VerdictKind::Benign);
  }
}

TEST_CASE("timestamps only when enabled") {
  SignatureProbe s;
  AnomalyProbe a;
  s.vote = 1;
  PipelineOptions o;
  o.record_timestamps = true;
  auto p = stub_pipeline(s, a, o);
  std::optional<Alert> got;
  p.set_alert_sink([&](const Alert& al) { got = al; });
  p.process(fv({0.0}, 1));
  REQUIRE(got.has_value());
  CHECK(got->timestamp_ns.has_value());
}

TEST_CASE("update: benign records train both stages, attacks only the signature") {
  SignatureProbe s;
  AnomalyProbe a;
  auto p = stub_pipeline(s, a);
  const auto benign = fv({0.0}, 0);
  p.update(benign, p.process(benign));
  CHECK(s.learned == 1);
  CHECK(a.learned == 1);
  const auto attack = fv({0.0}, 1);
  p.update(attack, p.process(attack));
  CHECK(s.learned == 2);
  CHECK(a.learned == 1);
}

TEST_CASE("deployment training rule follows the verdict") {
  SignatureProbe s;
  AnomalyProbe a;
  PipelineOptions o;
  o.anomaly_training = AnomalyTraining::PredictedBenign;
  auto p = stub_pipeline(s, a, o);
  a.score = 1.0;
  const auto attack_label = fv({0.0}, 1);
  p.update(attack_label, p.process(attack_label));
  CHECK(a.learned == 1);
  a.score = -1.0;
  const auto benign_label = fv({0.0}, 0);
  p.update(benign_label, p.process(benign_label));
  CHECK(a.learned == 1);
}

TEST_CASE("anomaly monitor sees only records it scored") {
  SignatureProbe s;
  AnomalyProbe a;
  auto p = stub_pipeline(s, a);
  s.vote = 1;
  p.update(fv({0.0}, 1), p.process(fv({0.0}, 1)));
  CHECK(a.observed == 0);
  s.vote = 0;
  p.update(fv({0.0}, 0), p.process(fv({0.0}, 0)));
  CHECK(a.observed == 1);
}

TEST_CASE("drift events carry the step index, module and tree") {
  SignatureProbe s;
  AnomalyProbe a;
  s.events[3] = {4, drift::DriftStatus::Warning};
  s.events[5] = {4, drift::DriftStatus::Drift};
  auto p = stub_pipeline(s, a);
  for (int i = 0; i < 6; ++i) {
    if (i == 4) a.next_status = drift::DriftStatus::Drift;
    const auto x = fv({0.0}, 0);
    p.update(x, p.process(x));
  }
  const auto& ev = p.drift_events();
  REQUIRE(ev.size() == 3);
  CHECK(ev[0] == DriftEvent{3, "signature", "STUB", drift::DriftStatus::Warning, 4});
  CHECK(ev[1] == DriftEvent{5, "signature", "STUB", drift::DriftStatus::Drift, 4});
  CHECK(ev[2] == DriftEvent{5, "anomaly", "STUB", drift::DriftStatus::Drift, std::nullopt});
}

TEST_CASE("every emitted warning or drift is logged exactly once") {
  SignatureProbe s;
  AnomalyProbe a;
  s.events[2] = {1, drift::DriftStatus::Warning};
  s.events[3] = {1, drift::DriftStatus::Warning};
  auto p = stub_pipeline(s, a);
  const drift::DriftStatus seq[] = {drift::DriftStatus::Warning, drift::DriftStatus::Warning,
                                    drift::DriftStatus::InControl, drift::DriftStatus::Warning};
  for (const auto st : seq) {
    a.next_status = st;
    const auto x = fv({0.0}, 0);
    p.update(x, p.process(x));
  }
  const auto& ev = p.drift_events();
  REQUIRE(ev.size() == 5);
  std::vector<std::pair<std::size_t, std::string>> got;
  for (const auto& e : ev) got.emplace_back(e.step, e.module);
  CHECK(got == std::vector<std::pair<std::size_t, std::string>>{
                   {1, "anomaly"}, {2, "signature"}, {2, "anomaly"}, {3, "signature"}, {4, "anomaly"}});
}

TEST_CASE("freeze stops all learning") {
  SignatureProbe s;
  AnomalyProbe a;
  auto p = stub_pipeline(s, a);
  p.freeze();
  const auto x = fv({0.0}, 0);
  p.update(x, p.process(x));
  CHECK(s.learned == 0);
  CHECK(a.learned == 0);
  CHECK(a.observed == 0);
}

TEST_CASE("distribution-drift mode restarts both stages and logs one event") {
  SignatureProbe s;
  AnomalyProbe a;
  PipelineOptions o;
  distdrift::DistDriftConfig cfg;
  cfg.reference_size = 100;
  cfg.test_size = 100;
  cfg.bootstrap_replicates = 100;
  o.distribution_drift = cfg;
  auto p = stub_pipeline(s, a, o);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const auto x = fv({g(rng) + (i >= 200 ? 6.0 : 0.0), g(rng)}, 0);
    p.update(x, p.process(x));
  }
  CHECK(a.observed == 0);
  REQUIRE(p.drift_events().size() == 1);
  const auto& e = p.drift_events()[0];
  CHECK(e.step == 300);
  CHECK(e.module == "pipeline");
  CHECK(e.detector == "kdq-tree");
  CHECK(s.resets == 1);
  CHECK(a.resets == 1);
}

TEST_CASE("full pipeline is deterministic") {
  const auto a = streams::random_hyperplane(5, 2);
  const auto stream =
      streams::gen_stream(a, streams::flip_labels(a), {streams::DriftType::Sudden, 1500, 3000},
                          3000, 4);
  auto p1 = real_pipeline(5, 9);
  auto p2 = real_pipeline(5, 9);
  for (const auto& s : stream) {
    const auto v1 = p1->process(s.sample);
    const auto v2 = p2->process(s.sample);
    CHECK(v1.kind == v2.kind);
    CHECK(v1.signature_score == v2.signature_score);
    CHECK(v1.anomaly_score == v2.anomaly_score);
    p1->update(s.sample, v1);
    p2->update(s.sample, v2);
  }
  CHECK(p1->drift_events() == p2->drift_events());
  CHECK_FALSE(p1->drift_events().empty());
}

TEST_CASE("canary: a record's verdict does not depend on its own label") {
  const auto a = streams::random_hyperplane(4, 5);
  const auto stream = streams::gen_stream(a, a, {streams::DriftType::Sudden, 1, 2}, 1500, 6);
  for (int label = 0; label <= 1; ++label) {
    auto p = real_pipeline(4, 1);
    auto q = real_pipeline(4, 1);
    for (const auto& s : stream) {
      p->update(s.sample, p->process(s.sample));
      q->update(s.sample, q->process(s.sample));
    }
    auto canary = stream.back().sample;
    canary.x[0] += 0.01;
    auto flipped = canary;
    canary.y = label;
    flipped.y = 1 - label;
    const auto v1 = p->process(canary);
    const auto v2 = q->process(flipped);
    CHECK(v1.kind == v2.kind);
    CHECK(v1.signature_score == v2.signature_score);
    CHECK(v1.anomaly_score == v2.anomaly_score);
  }
}

TEST_CASE("construction needs both stages") {
  SignatureProbe s;
  CHECK_THROWS_AS(HybridPipeline(std::make_unique<StubSignature>(s), nullptr), ConfigError);
}
