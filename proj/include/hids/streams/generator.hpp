#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "hids/flowdata/flow_record.hpp"

namespace hids::streams {

using flowdata::FeatureVector;

// Points uniform in [lo, hi]^d, labeled 1 iff <normal, x> > threshold.
struct HyperplaneConcept {
  std::vector<double> normal;
  double threshold = 0.0;
  double lo = 0.0;
  double hi = 1.0;
};

// Label drawn first (attack with probability attack_prior), then the point
// from an axis-aligned Gaussian for that class.
struct GaussianConcept {
  std::vector<double> benign_mean;
  std::vector<double> benign_sd;
  std::vector<double> attack_mean;
  std::vector<double> attack_sd;
  double attack_prior = 0.5;
};

struct ConceptSpec {
  std::variant<HyperplaneConcept, GaussianConcept> params;
  // Probability of flipping the generated label.
  double noise = 0.0;

  std::size_t dimension() const;
  void validate() const;
};

int hyperplane_label(const HyperplaneConcept& c, std::span<const double> x);

enum class DriftType { Sudden, Incremental, Gradual, Reoccurring };

DriftType parse_drift_type(std::string_view name);
std::string_view to_string(DriftType type);

// Change points are 0-based record indices. Sudden switches to B at t0;
// incremental interpolates A -> B over [t0, t1); gradual picks B with
// probability rising from 0 to 1 over [t0, t1); reoccurring uses B on
// [t0, t1) and A elsewhere.
struct DriftSchedule {
  DriftType type = DriftType::Sudden;
  std::size_t t0 = 0;
  std::size_t t1 = 0;

  void validate(std::size_t length) const;
};

// Which concept produced a record. Test-only information; learners never see
// it.
enum class Provenance { A, B, Blend };

struct LabeledSample {
  FeatureVector sample;
  Provenance provenance = Provenance::A;
};

// Deterministic record-at-a-time generator.
class StreamGenerator {
 public:
  StreamGenerator(ConceptSpec a, ConceptSpec b, DriftSchedule schedule, std::size_t length,
                  std::uint64_t seed);

  bool done() const { return index_ >= length_; }
  LabeledSample next();
  std::size_t length() const { return length_; }
  std::size_t dimension() const { return a_.dimension(); }

 private:
  LabeledSample draw(const ConceptSpec& spec, Provenance provenance);

  ConceptSpec a_;
  ConceptSpec b_;
  DriftSchedule schedule_;
  std::size_t length_;
  std::mt19937_64 rng_;
  std::size_t index_ = 0;
};

std::vector<LabeledSample> gen_stream(const ConceptSpec& a, const ConceptSpec& b,
                                      const DriftSchedule& schedule, std::size_t length,
                                      std::uint64_t seed);

// Linear blend of two same-family concepts (weight on b).
ConceptSpec interpolate(const ConceptSpec& a, const ConceptSpec& b, double weight);

// Random unit-sum normal in [0, 1]^d with threshold splitting the cube in half.
ConceptSpec random_hyperplane(std::size_t dimension, std::uint64_t seed, double noise = 0.0);
// Same boundary, opposite labels.
ConceptSpec flip_labels(const ConceptSpec& c);
// Benign around the origin, attacks around `separation` in every coordinate,
// unit standard deviations.
ConceptSpec gaussian_clusters(std::size_t dimension, double separation, double noise = 0.0);
// Moves both class means by `delta` along `coordinate`.
ConceptSpec shift_means(const ConceptSpec& c, std::size_t coordinate, double delta);

inline constexpr std::string_view kGeneratedLabelColumn = "label";
inline constexpr std::string_view kBenignLabel = "BENIGN";
inline constexpr std::string_view kAttackLabel = "ATTACK";

// Writes samples as a flow CSV (f0..f{d-1},label) with round-trip exact values.
void write_csv(const std::filesystem::path& path, std::span<const LabeledSample> samples);
// Schema for files written by write_csv.
flowdata::StreamSchema generated_schema();

}  // namespace hids::streams
