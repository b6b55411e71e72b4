#include "hids/streams/generator.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <numeric>
#include <string>

#include "hids/common/error.hpp"

namespace hids::streams {
namespace {

std::vector<double> blend(const std::vector<double>& a, const std::vector<double>& b, double w) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (1.0 - w) * a[i] + w * b[i];
  return out;
}

void append_number(std::string& out, double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error("cannot format value");
  out.append(buf, ptr);
}

}  // namespace

std::size_t ConceptSpec::dimension() const {
  return std::visit(
      [](const auto& c) -> std::size_t {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, HyperplaneConcept>) {
          return c.normal.size();
        } else {
          return c.benign_mean.size();
        }
      },
      params);
}

void ConceptSpec::validate() const {
  if (!(noise >= 0.0 && noise < 0.5)) throw ConfigError("concept noise must lie in [0, 0.5)");
  if (dimension() == 0) throw ConfigError("concept dimension must be positive");
  if (const auto* h = std::get_if<HyperplaneConcept>(&params)) {
    if (!(h->lo < h->hi)) throw ConfigError("hyperplane domain needs lo < hi");
  } else {
    const auto& g = std::get<GaussianConcept>(params);
    const std::size_t d = g.benign_mean.size();
    if (g.benign_sd.size() != d || g.attack_mean.size() != d || g.attack_sd.size() != d) {
      throw ConfigError("Gaussian concept vectors must share one dimension");
    }
    if (!(g.attack_prior >= 0.0 && g.attack_prior <= 1.0)) {
      throw ConfigError("Gaussian concept attack_prior must lie in [0, 1]");
    }
    for (std::size_t i = 0; i < d; ++i) {
      if (!(g.benign_sd[i] >= 0.0 && g.attack_sd[i] >= 0.0)) {
        throw ConfigError("Gaussian concept standard deviations must be >= 0");
      }
    }
  }
}

int hyperplane_label(const HyperplaneConcept& c, std::span<const double> x) {
  check_dimension(c.normal.size(), x.size());
  return std::inner_product(c.normal.begin(), c.normal.end(), x.begin(), 0.0) > c.threshold ? 1 : 0;
}

DriftType parse_drift_type(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (key == "sudden" || key == "abrupt") return DriftType::Sudden;
  if (key == "incremental") return DriftType::Incremental;
  if (key == "gradual") return DriftType::Gradual;
  if (key == "reoccurring" || key == "recurring") return DriftType::Reoccurring;
  throw ConfigError("unknown drift type '" + std::string(name) + "'");
}

std::string_view to_string(DriftType type) {
  switch (type) {
    case DriftType::Sudden:
      return "sudden";
    case DriftType::Incremental:
      return "incremental";
    case DriftType::Gradual:
      return "gradual";
    case DriftType::Reoccurring:
      return "reoccurring";
  }
  return "?";
}

void DriftSchedule::validate(std::size_t length) const {
  if (!(0 < t0 && t0 < t1 && t1 <= length)) {
    throw ConfigError("drift schedule needs 0 < t0 < t1 <= length (t0=" + std::to_string(t0) +
                      ", t1=" + std::to_string(t1) + ", length=" + std::to_string(length) + ")");
  }
}

ConceptSpec interpolate(const ConceptSpec& a, const ConceptSpec& b, double weight) {
  if (a.params.index() != b.params.index()) {
    throw ConfigError("cannot interpolate concepts of different families");
  }
  ConceptSpec out;
  out.noise = (1.0 - weight) * a.noise + weight * b.noise;
  if (const auto* ha = std::get_if<HyperplaneConcept>(&a.params)) {
    const auto& hb = std::get<HyperplaneConcept>(b.params);
    HyperplaneConcept h;
    h.normal = blend(ha->normal, hb.normal, weight);
    h.threshold = (1.0 - weight) * ha->threshold + weight * hb.threshold;
    h.lo = (1.0 - weight) * ha->lo + weight * hb.lo;
    h.hi = (1.0 - weight) * ha->hi + weight * hb.hi;
    out.params = std::move(h);
  } else {
    const auto& ga = std::get<GaussianConcept>(a.params);
    const auto& gb = std::get<GaussianConcept>(b.params);
    GaussianConcept g;
    g.benign_mean = blend(ga.benign_mean, gb.benign_mean, weight);
    g.benign_sd = blend(ga.benign_sd, gb.benign_sd, weight);
    g.attack_mean = blend(ga.attack_mean, gb.attack_mean, weight);
    g.attack_sd = blend(ga.attack_sd, gb.attack_sd, weight);
    g.attack_prior = (1.0 - weight) * ga.attack_prior + weight * gb.attack_prior;
    out.params = std::move(g);
  }
  return out;
}

StreamGenerator::StreamGenerator(ConceptSpec a, ConceptSpec b, DriftSchedule schedule,
                                 std::size_t length, std::uint64_t seed)
    : a_(std::move(a)), b_(std::move(b)), schedule_(schedule), length_(length), rng_(seed) {
  a_.validate();
  b_.validate();
  if (a_.dimension() != b_.dimension()) throw ConfigError("concepts must share one dimension");
  if (schedule_.type == DriftType::Incremental && a_.params.index() != b_.params.index()) {
    throw ConfigError("incremental drift needs concepts of the same family");
  }
  schedule_.validate(length_);
}

LabeledSample StreamGenerator::draw(const ConceptSpec& spec, Provenance provenance) {
  LabeledSample out;
  out.provenance = provenance;
  const std::size_t d = spec.dimension();
  out.sample.x.resize(d);
  if (const auto* h = std::get_if<HyperplaneConcept>(&spec.params)) {
    std::uniform_real_distribution<double> u(h->lo, h->hi);
    for (auto& v : out.sample.x) v = u(rng_);
    out.sample.y = hyperplane_label(*h, out.sample.x);
  } else {
    const auto& g = std::get<GaussianConcept>(spec.params);
    std::bernoulli_distribution attack(g.attack_prior);
    out.sample.y = attack(rng_) ? 1 : 0;
    const auto& mean = out.sample.y == 1 ? g.attack_mean : g.benign_mean;
    const auto& sd = out.sample.y == 1 ? g.attack_sd : g.benign_sd;
    std::normal_distribution<double> n(0.0, 1.0);
    for (std::size_t i = 0; i < d; ++i) out.sample.x[i] = mean[i] + sd[i] * n(rng_);
  }
  if (spec.noise > 0.0) {
    std::bernoulli_distribution flip(spec.noise);
    if (flip(rng_)) out.sample.y = 1 - out.sample.y;
  }
  return out;
}

LabeledSample StreamGenerator::next() {
  if (done()) throw Error("stream generator exhausted");
  const std::size_t t = index_++;
  const auto progress = [&] {
    return static_cast<double>(t - schedule_.t0) / static_cast<double>(schedule_.t1 - schedule_.t0);
  };
  switch (schedule_.type) {
    case DriftType::Sudden:
      return t < schedule_.t0 ? draw(a_, Provenance::A) : draw(b_, Provenance::B);
    case DriftType::Incremental:
      if (t < schedule_.t0) return draw(a_, Provenance::A);
      if (t >= schedule_.t1) return draw(b_, Provenance::B);
      return draw(interpolate(a_, b_, progress()), Provenance::Blend);
    case DriftType::Gradual: {
      if (t < schedule_.t0) return draw(a_, Provenance::A);
      if (t >= schedule_.t1) return draw(b_, Provenance::B);
      std::bernoulli_distribution pick_b(progress());
      return pick_b(rng_) ? draw(b_, Provenance::B) : draw(a_, Provenance::A);
    }
    case DriftType::Reoccurring:
      if (t >= schedule_.t0 && t < schedule_.t1) return draw(b_, Provenance::B);
      return draw(a_, Provenance::A);
  }
  throw Error("unhandled drift type");
}

std::vector<LabeledSample> gen_stream(const ConceptSpec& a, const ConceptSpec& b,
                                      const DriftSchedule& schedule, std::size_t length,
                                      std::uint64_t seed) {
  StreamGenerator gen(a, b, schedule, length, seed);
  std::vector<LabeledSample> out;
  out.reserve(length);
  while (!gen.done()) out.push_back(gen.next());
  return out;
}

ConceptSpec random_hyperplane(std::size_t dimension, std::uint64_t seed, double noise) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  HyperplaneConcept h;
  h.normal.resize(dimension);
  for (auto& w : h.normal) w = u(rng);
  const double sum = std::accumulate(h.normal.begin(), h.normal.end(), 0.0);
  for (auto& w : h.normal) w /= sum;
  h.threshold = 0.5;
  ConceptSpec out{std::move(h), noise};
  out.validate();
  return out;
}

ConceptSpec flip_labels(const ConceptSpec& c) {
  ConceptSpec out = c;
  if (auto* h = std::get_if<HyperplaneConcept>(&out.params)) {
    for (auto& w : h->normal) w = -w;
    h->threshold = -h->threshold;
  } else {
    auto& g = std::get<GaussianConcept>(out.params);
    std::swap(g.benign_mean, g.attack_mean);
    std::swap(g.benign_sd, g.attack_sd);
    g.attack_prior = 1.0 - g.attack_prior;
  }
  return out;
}

ConceptSpec gaussian_clusters(std::size_t dimension, double separation, double noise) {
  GaussianConcept g;
  g.benign_mean.assign(dimension, 0.0);
  g.benign_sd.assign(dimension, 1.0);
  g.attack_mean.assign(dimension, separation);
  g.attack_sd.assign(dimension, 1.0);
  ConceptSpec out{std::move(g), noise};
  out.validate();
  return out;
}

ConceptSpec shift_means(const ConceptSpec& c, std::size_t coordinate, double delta) {
  ConceptSpec out = c;
  auto* g = std::get_if<GaussianConcept>(&out.params);
  if (!g) throw ConfigError("mean shift applies to Gaussian concepts only");
  if (coordinate >= g->benign_mean.size()) throw ConfigError("shift coordinate out of range");
  g->benign_mean[coordinate] += delta;
  g->attack_mean[coordinate] += delta;
  return out;
}

void write_csv(const std::filesystem::path& path, std::span<const LabeledSample> samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  const std::size_t d = samples.empty() ? 0 : samples.front().sample.dimension();
  std::string line;
  for (std::size_t i = 0; i < d; ++i) line += "f" + std::to_string(i) + ",";
  line += kGeneratedLabelColumn;
  line += '\n';
  out << line;
  for (const auto& s : samples) {
    check_dimension(d, s.sample.dimension());
    line.clear();
    for (const double v : s.sample.x) {
      append_number(line, v);
      line += ',';
    }
    line += s.sample.y == 1 ? kAttackLabel : kBenignLabel;
    line += '\n';
    out << line;
  }
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

flowdata::StreamSchema generated_schema() {
  flowdata::StreamSchema schema;
  schema.label_column = std::string(kGeneratedLabelColumn);
  schema.benign_labels = {std::string(kBenignLabel)};
  return schema;
}

}  // namespace hids::streams
