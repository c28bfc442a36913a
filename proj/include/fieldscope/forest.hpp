#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fieldscope/features.hpp"

namespace fieldscope {

struct ForestHyperparams {
  int n_trees = 100;
  int max_depth = 0;           // 0 = unlimited
  int min_leaf = 1;
  int features_per_split = 0;  // 0 = ceil(sqrt(feature_dim))
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double vote = 0;  // leaf only: class-weighted positive fraction
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root; children precede use

  // Weighted positive fraction at the leaf x falls into.
  double leaf_vote(std::span<const double> x) const;
  int depth() const;
};

struct ForestModel {
  ForestHyperparams hp;
  double weight_positive = 1;
  double weight_negative = 1;
  std::uint64_t seed = 0;
  std::size_t feature_dim = 0;
  std::vector<DecisionTree> trees;
};

struct Prediction {
  bool label = false;
  double score = 0;  // in [0, 1]
};

// Bagged Gini forest: each tree fits a bootstrap resample (with replacement,
// original size) and splits on a fresh random feature subset per node. Class
// weights default to inverse class frequency. Deterministic given the seed,
// independent of n_threads. Throws EmptyData / SingleClass.
ForestModel train_forest(const std::vector<FeatureVector>& x, const std::vector<bool>& y,
                         const ForestHyperparams& hp, std::uint64_t seed,
                         std::optional<std::pair<double, double>> class_weights = {},
                         unsigned n_threads = 1);

// score = class-weighted mean of per-tree votes; label = score >= 0.5.
// Throws DimensionMismatch.
Prediction predict_forest(const ForestModel& model, std::span<const double> x);
Prediction predict_forest(const ForestModel& model, const FeatureVector& x);

// Exhaustive best split over a feature subset, exposed for oracle checks.
// Candidates are midpoints between consecutive distinct values; both children
// must keep at least min_leaf points. Ties keep the earliest (feature order
// as given, thresholds ascending).
struct SplitCandidate {
  bool valid = false;
  int feature = -1;
  double threshold = 0;
  double impurity = 0;  // weighted mean child Gini
};

SplitCandidate best_split(const std::vector<FeatureVector>& x, const std::vector<char>& y,
                          std::span<const std::uint32_t> indices,
                          std::span<const int> features, int min_leaf, double weight_positive,
                          double weight_negative);

}  // namespace fieldscope
