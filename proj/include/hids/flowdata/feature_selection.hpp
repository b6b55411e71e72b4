#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hids/flowdata/flow_record.hpp"

namespace hids::flowdata {

struct ImportanceForestOptions {
  std::size_t n_trees = 25;
  std::size_t max_depth = 10;
  // Nodes holding less than this fraction of the data are not split. Keeping
  // the rule relative makes the forest invariant to duplicating the data.
  double min_node_fraction = 0.002;
  // Candidate features per node; 0 means ceil(sqrt(dimension)).
  std::size_t features_per_node = 0;
  std::uint64_t seed = 7;
};

// Mean decrease in Gini impurity per feature from a batch random forest
// trained on `data` (no bootstrap; random feature subsets per node).
// Normalized to sum to 1 unless no split was made at all.
std::vector<double> impurity_importance(std::span<const FeatureVector> data,
                                        const ImportanceForestOptions& options = {});

// Indices of the k most important features, most important first; ties go to
// the lower index. Throws if the data holds a single class or k is out of
// range.
std::vector<std::size_t> select_features(std::span<const FeatureVector> warmup,
                                         std::size_t k,
                                         const ImportanceForestOptions& options = {});

}  // namespace hids::flowdata
