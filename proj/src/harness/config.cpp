#include "hids/harness/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include "hids/common/error.hpp"

namespace hids::harness {
namespace {

using nlohmann::json;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Object accessor that rejects keys nobody asked about, so typos surface.
class Fields {
 public:
  Fields(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + " must be an object");
  }

  bool has(const std::string& key) {
    known_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const json& at(const std::string& key) {
    if (!has(key)) throw ConfigError(where_ + "." + key + " is required");
    return j_.at(key);
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    if (!has(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(where_ + "." + key + ": " + e.what());
    }
  }

  template <typename T>
  T value(const std::string& key, T fallback) {
    get(key, fallback);
    return fallback;
  }

  std::string path(const std::string& key) const { return where_ + "." + key; }

  void finish() const {
    for (const auto& [key, _] : j_.items()) {
      if (!known_.count(key)) throw ConfigError("unknown key " + where_ + "." + key);
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> known_;
};

void parse_adwin(const json& j, drift::AdwinParams& p, drift::AdwinParams& warn) {
  Fields f(j, "detectors.adwin");
  f.get("delta", p.delta);
  f.get("warning_delta", warn.delta);
  f.get("max_buckets", p.max_buckets);
  warn.max_buckets = p.max_buckets;
  f.get("min_subwindow", p.min_subwindow);
  warn.min_subwindow = p.min_subwindow;
  f.finish();
}

drift::DetectorConfig parse_detectors(const json& j, drift::DetectorConfig cfg) {
  Fields f(j, "detectors");
  if (f.has("adwin")) parse_adwin(f.at("adwin"), cfg.adwin, cfg.adwin_warning);
  if (f.has("ddm")) {
    Fields d(f.at("ddm"), "detectors.ddm");
    d.get("min_samples", cfg.ddm.min_samples);
    d.get("warning_level", cfg.ddm.warning_level);
    d.get("drift_level", cfg.ddm.drift_level);
    d.finish();
  }
  if (f.has("eddm")) {
    Fields d(f.at("eddm"), "detectors.eddm");
    d.get("min_errors", cfg.eddm.min_errors);
    d.get("warning_ratio", cfg.eddm.warning_ratio);
    d.get("drift_ratio", cfg.eddm.drift_ratio);
    d.finish();
  }
  if (f.has("hddm")) {
    Fields d(f.at("hddm"), "detectors.hddm");
    d.get("drift_confidence", cfg.hddm.drift_confidence);
    d.get("warning_confidence", cfg.hddm.warning_confidence);
    d.get("lambda", cfg.hddm.lambda);
    d.finish();
  }
  if (f.has("page_hinkley")) {
    Fields d(f.at("page_hinkley"), "detectors.page_hinkley");
    d.get("min_samples", cfg.page_hinkley.min_samples);
    d.get("delta", cfg.page_hinkley.delta);
    d.get("threshold", cfg.page_hinkley.threshold);
    d.finish();
  }
  if (f.has("kswin")) {
    Fields d(f.at("kswin"), "detectors.kswin");
    d.get("window", cfg.kswin.window);
    d.get("stat_size", cfg.kswin.stat_size);
    d.get("alpha", cfg.kswin.alpha);
    d.get("seed", cfg.kswin.seed);
    d.finish();
  }
  f.finish();
  return cfg;
}

distdrift::DistDriftConfig parse_distribution(const json& j, std::uint64_t seed) {
  distdrift::DistDriftConfig c;
  c.seed = seed;
  Fields f(j, "pipeline.distribution_drift");
  f.get("reference_size", c.reference_size);
  f.get("test_size", c.test_size);
  f.get("bootstrap_replicates", c.bootstrap_replicates);
  f.get("alpha", c.alpha);
  f.get("min_cell_count", c.tree.min_cell_count);
  f.get("max_depth", c.tree.max_depth);
  f.get("smoothing", c.tree.smoothing);
  f.get("seed", c.seed);
  f.finish();
  c.validate();
  return c;
}

std::vector<double> doubles(Fields& f, const std::string& key) {
  std::vector<double> v;
  f.get(key, v);
  return v;
}

}  // namespace

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  try {
    return json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

streams::ConceptSpec parse_concept(const json& j) {
  Fields f(j, "concept");
  const std::string family = lower(f.value<std::string>("family", "hyperplane"));
  streams::ConceptSpec spec;
  const double noise = f.value("noise", 0.0);
  if (family == "hyperplane") {
    if (f.has("normal")) {
      streams::HyperplaneConcept h;
      h.normal = doubles(f, "normal");
      f.get("threshold", h.threshold);
      f.get("lo", h.lo);
      f.get("hi", h.hi);
      spec.params = std::move(h);
    } else {
      spec = streams::random_hyperplane(f.at("dimension").get<std::size_t>(),
                                        f.value<std::uint64_t>("seed", 1));
    }
  } else if (family == "gaussian" || family == "gaussian_clusters") {
    if (f.has("benign_mean")) {
      streams::GaussianConcept g;
      g.benign_mean = doubles(f, "benign_mean");
      g.attack_mean = doubles(f, "attack_mean");
      g.benign_sd = f.has("benign_sd") ? doubles(f, "benign_sd")
                                       : std::vector<double>(g.benign_mean.size(), 1.0);
      g.attack_sd = f.has("attack_sd") ? doubles(f, "attack_sd")
                                       : std::vector<double>(g.attack_mean.size(), 1.0);
      f.get("attack_prior", g.attack_prior);
      spec.params = std::move(g);
    } else {
      spec = streams::gaussian_clusters(f.at("dimension").get<std::size_t>(),
                                        f.value("separation", 3.0));
      f.get("attack_prior", std::get<streams::GaussianConcept>(spec.params).attack_prior);
    }
  } else {
    throw ConfigError("unknown concept family '" + family + "'");
  }
  spec.noise = noise;
  f.finish();
  spec.validate();
  return spec;
}

SyntheticSource parse_synthetic(const json& j, std::uint64_t default_seed) {
  Fields f(j, "synthetic");
  SyntheticSource s;
  s.length = f.at("length").get<std::size_t>();
  s.seed = f.value("seed", default_seed);
  s.concept_a = parse_concept(f.at("concept_a"));

  const json& b = f.at("concept_b");
  if (b.is_object() && b.contains("transform")) {
    Fields t(b, "synthetic.concept_b");
    const std::string kind = lower(t.at("transform").get<std::string>());
    if (kind == "flip_labels") {
      s.concept_b = streams::flip_labels(s.concept_a);
    } else if (kind == "shift_means") {
      s.concept_b = streams::shift_means(s.concept_a, t.value<std::size_t>("coordinate", 0),
                                         t.at("delta").get<double>());
    } else if (kind == "rotate") {
      s.concept_b = streams::random_hyperplane(s.concept_a.dimension(),
                                               t.value<std::uint64_t>("seed", s.seed + 1),
                                               s.concept_a.noise);
    } else {
      throw ConfigError("unknown concept transform '" + kind + "'");
    }
    if (t.has("noise")) s.concept_b.noise = t.at("noise").get<double>();
    t.finish();
  } else {
    s.concept_b = parse_concept(b);
  }

  Fields d(f.at("drift"), "synthetic.drift");
  s.schedule.type = streams::parse_drift_type(d.value<std::string>("type", "sudden"));
  s.schedule.t0 = d.at("t0").get<std::size_t>();
  s.schedule.t1 = d.value("t1", s.length);
  d.finish();
  f.finish();
  s.schedule.validate(s.length);
  if (s.concept_a.dimension() != s.concept_b.dimension()) {
    throw ConfigError("synthetic concepts must share one dimension");
  }
  return s;
}

DatasetSource parse_dataset(const json& j) {
  Fields f(j, "dataset");
  DatasetSource d;
  f.get("name", d.name);
  d.path = f.at("path").get<std::string>();
  f.get("columns", d.schema.column_names);
  f.get("drop_columns", d.schema.drop_columns);
  f.get("label_column", d.schema.label_column);
  std::vector<std::string> positives;
  f.get("positive_labels", positives);
  d.schema.positive_labels = {positives.begin(), positives.end()};
  f.get("benign_labels", d.schema.benign_labels);
  if (f.has("feature_selection")) {
    Fields s(f.at("feature_selection"), "dataset.feature_selection");
    s.get("enabled", d.feature_selection.enabled);
    s.get("k", d.feature_selection.k);
    s.get("warmup", d.feature_selection.warmup);
    s.finish();
  }
  f.finish();
  d.schema.validate();
  return d;
}

PipelineConfig parse_pipeline(const json& j, std::uint64_t seed) {
  PipelineConfig p;
  p.signature.seed = seed;
  p.anomaly.seed = seed + 1;
  Fields f(j, "pipeline");
  if (f.has("drift_detection_method")) {
    p.detector.kind = drift::parse_detector_kind(f.at("drift_detection_method").get<std::string>());
  }
  f.get("drift_detection", p.drift_detection);
  if (f.has("detectors")) p.detector = parse_detectors(f.at("detectors"), p.detector);

  std::optional<drift::DetectorKind> signature_kind;
  if (f.has("signature")) {
    Fields s(f.at("signature"), "pipeline.signature");
    s.get("n_estimators", p.signature.n_estimators);
    s.get("max_features", p.signature.max_features);
    if (s.has("lambda") && s.has("lambda_bag")) {
      throw ConfigError("pipeline.signature: give 'lambda_bag' or 'lambda', not both");
    }
    s.get("lambda_bag", p.signature.lambda);
    s.get("lambda", p.signature.lambda);
    if (s.has("drift_detection_method")) {
      signature_kind =
          drift::parse_detector_kind(s.at("drift_detection_method").get<std::string>());
    }
    s.get("accuracy_window", p.signature.accuracy_window);
    s.get("grace_period", p.signature.tree.grace_period);
    s.get("split_confidence", p.signature.tree.split_confidence);
    s.get("tie_threshold", p.signature.tree.tie_threshold);
    s.get("split_points", p.signature.tree.split_points);
    s.get("max_depth", p.signature.tree.max_depth);
    s.get("seed", p.signature.seed);
    s.finish();
  }
  if (f.has("anomaly")) {
    Fields a(f.at("anomaly"), "pipeline.anomaly");
    a.get("nu", p.anomaly.nu);
    a.get("gamma", p.anomaly.gamma);
    a.get("rff_dim", p.anomaly.rff_dim);
    a.get("eta0", p.anomaly.eta0);
    a.get("seed", p.anomaly.seed);
    a.finish();
  }
  if (f.has("distribution_drift")) {
    p.distribution_drift = parse_distribution(f.at("distribution_drift"), seed + 2);
  }
  if (f.has("cold_start")) {
    const auto v = lower(f.at("cold_start").get<std::string>());
    if (v == "benign") {
      p.cold_start = pipeline::ColdStartPolicy::Benign;
    } else if (v == "unknown_attack") {
      p.cold_start = pipeline::ColdStartPolicy::UnknownAttack;
    } else {
      throw ConfigError("cold_start must be 'benign' or 'unknown_attack'");
    }
  }
  if (f.has("anomaly_training")) {
    const auto v = lower(f.at("anomaly_training").get<std::string>());
    if (v == "labeled_benign") {
      p.anomaly_training = pipeline::AnomalyTraining::LabeledBenign;
    } else if (v == "predicted_benign") {
      p.anomaly_training = pipeline::AnomalyTraining::PredictedBenign;
    } else {
      throw ConfigError("anomaly_training must be 'labeled_benign' or 'predicted_benign'");
    }
  }
  f.finish();
  p.signature.detector = p.detector;
  if (signature_kind) p.signature.detector.kind = *signature_kind;
  return p;
}

void ExperimentConfig::validate() const {
  if (window_stride == 0) throw ConfigError("window_stride must be positive");
  if (!(frozen_fraction > 0.0 && frozen_fraction < 1.0)) {
    throw ConfigError("frozen_fraction must lie in (0, 1)");
  }
  if (pipeline.distribution_drift) pipeline.distribution_drift->validate();
}

ExperimentConfig parse_experiment(const json& j, const std::filesystem::path& base_dir) {
  ExperimentConfig c;
  c.echo = j;
  Fields f(j, "config");
  f.get("name", c.name);
  f.get("seed", c.seed);

  const bool has_dataset = f.has("dataset") || f.has("dataset_config");
  const bool has_synthetic = f.has("synthetic");
  if (has_dataset == has_synthetic) {
    throw ConfigError("config needs exactly one data source: 'dataset' or 'synthetic'");
  }
  if (has_synthetic) {
    c.source = parse_synthetic(f.at("synthetic"), c.seed);
  } else {
    json merged = json::object();
    if (f.has("dataset_config")) {
      std::filesystem::path ref = f.at("dataset_config").get<std::string>();
      if (ref.is_relative()) ref = base_dir / ref;
      merged = read_json_file(ref);
      // a path inside the dataset file is relative to that file
      if (merged.is_object() && merged.contains("path") && merged["path"].is_string()) {
        const std::filesystem::path inner = merged["path"].get<std::string>();
        if (inner.is_relative()) merged["path"] = (ref.parent_path() / inner).string();
      }
    }
    if (f.has("dataset")) merged.merge_patch(f.at("dataset"));
    auto d = parse_dataset(merged);
    if (d.path.is_relative()) d.path = base_dir / d.path;
    c.source = std::move(d);
  }

  c.pipeline = parse_pipeline(f.has("pipeline") ? f.at("pipeline") : json::object(), c.seed);

  if (f.has("ablation")) {
    const auto v = lower(f.at("ablation").get<std::string>());
    if (v == "none") {
      c.ablation = Ablation::None;
    } else if (v == "frozen") {
      c.ablation = Ablation::Frozen;
    } else {
      throw ConfigError("ablation must be 'none' or 'frozen'");
    }
  }
  f.get("frozen_fraction", c.frozen_fraction);
  f.get("window_stride", c.window_stride);
  f.get("max_records", c.max_records);
  if (f.has("report")) c.report_path = f.at("report").get<std::string>();
  if (f.has("alerts")) c.alerts_path = f.at("alerts").get<std::string>();
  f.get("include_timing", c.include_timing);
  f.finish();
  c.validate();
  return c;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw ConfigError("config file '" + path.string() + "' does not exist");
  }
  return parse_experiment(read_json_file(path), path.parent_path());
}

}  // namespace hids::harness
