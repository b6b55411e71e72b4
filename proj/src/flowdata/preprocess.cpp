#include "hids/flowdata/preprocess.hpp"

#include <algorithm>
#include <cmath>

namespace hids::flowdata {

Preprocessor::Preprocessor(const StreamSchema& schema) : schema_(schema) {
  schema_.validate();
  if (schema_.column_names.empty()) {
    throw SchemaError("schema has no resolved column names", "");
  }
  for (std::size_t i = 0; i < schema_.column_names.size(); ++i) {
    const auto& name = schema_.column_names[i];
    if (name == schema_.label_column) continue;
    if (std::find(schema_.drop_columns.begin(), schema_.drop_columns.end(), name) !=
        schema_.drop_columns.end()) {
      continue;
    }
    feature_columns_.push_back(i);
    names_.push_back(name);
  }
}

FeatureVector Preprocessor::operator()(const FlowRecord& record) const {
  check_dimension(schema_.column_names.size(), record.values.size());
  FeatureVector out;
  out.x.reserve(feature_columns_.size());
  for (const auto column : feature_columns_) {
    out.x.push_back(record.values[column].value_or(0.0));
  }
  out.y = schema_.label_of(record.label_raw);
  return out;
}

FeatureVector preprocess(const FlowRecord& record, const StreamSchema& schema) {
  return Preprocessor(schema)(record);
}

FeatureVector project(const FeatureVector& v, std::span<const std::size_t> indices) {
  FeatureVector out;
  out.y = v.y;
  out.x.reserve(indices.size());
  for (const auto i : indices) out.x.push_back(v.x.at(i));
  return out;
}

RunningScaler::RunningScaler(std::size_t dimension) : mean_(dimension, 0.0), m2_(dimension, 0.0) {}

double RunningScaler::variance(std::size_t i) const {
  if (count_ < 2) return 0.0;
  return std::max(0.0, m2_.at(i)) / static_cast<double>(count_ - 1);
}

std::vector<double> RunningScaler::transform(std::span<const double> x, bool learn) {
  check_dimension(dimension(), x.size());
  std::vector<double> out(x.size(), 0.0);
  if (count_ >= 2) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double var = variance(i);
      if (var > 0.0) out[i] = (x[i] - mean_[i]) / std::sqrt(var);
    }
  }
  if (learn) observe(x);
  return out;
}

void RunningScaler::observe(std::span<const double> x) {
  check_dimension(dimension(), x.size());
  ++count_;
  const double n = static_cast<double>(count_);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double delta = x[i] - mean_[i];
    mean_[i] += delta / n;
    m2_[i] += delta * (x[i] - mean_[i]);
  }
}

}  // namespace hids::flowdata
