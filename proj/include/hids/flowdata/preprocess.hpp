#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hids/flowdata/flow_record.hpp"

namespace hids::flowdata {

// Turns FlowRecords into unscaled FeatureVectors: drop columns and the label
// column are removed, missing cells become 0, the label is binarized.
class Preprocessor {
 public:
  // `schema` must have resolved column names.
  explicit Preprocessor(const StreamSchema& schema);

  FeatureVector operator()(const FlowRecord& record) const;

  std::size_t dimension() const { return feature_columns_.size(); }
  const std::vector<std::string>& feature_names() const { return names_; }

 private:
  StreamSchema schema_;
  std::vector<std::size_t> feature_columns_;
  std::vector<std::string> names_;
};

FeatureVector preprocess(const FlowRecord& record, const StreamSchema& schema);

// Keeps only the listed feature positions, in the listed order.
FeatureVector project(const FeatureVector& v, std::span<const std::size_t> indices);

// Streaming standardizer using Welford's running moments.
//
// transform() maps each component to (x - mean) / sd with the sample standard
// deviation of everything observed so far; components with fewer than two
// observations or zero variance map to 0. With learn = true the statistics are
// updated after the transform.
class RunningScaler {
 public:
  explicit RunningScaler(std::size_t dimension);

  std::vector<double> transform(std::span<const double> x, bool learn);
  void observe(std::span<const double> x);

  std::size_t dimension() const { return mean_.size(); }
  std::size_t count() const { return count_; }
  double mean(std::size_t i) const { return mean_.at(i); }
  // Sample variance M2 / (n - 1); 0 while n < 2.
  double variance(std::size_t i) const;

 private:
  std::size_t count_ = 0;
  std::vector<double> mean_;
  std::vector<double> m2_;
};

}  // namespace hids::flowdata
