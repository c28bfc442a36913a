#include "fieldscope/forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fieldscope/error.hpp"
#include "fieldscope/parallel.hpp"
#include "fieldscope/rng.hpp"

namespace fieldscope {

double DecisionTree::leaf_vote(std::span<const double> x) const {
  const TreeNode* node = &nodes[0];
  while (node->feature >= 0)
    node = &nodes[x[static_cast<std::size_t>(node->feature)] <= node->threshold
                      ? node->left
                      : node->right];
  return node->vote;
}

int DecisionTree::depth() const {
  std::vector<int> level(nodes.size(), 0);
  int max_level = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const TreeNode& n = nodes[i];
    if (n.feature < 0) continue;
    level[n.left] = level[i] + 1;
    level[n.right] = level[i] + 1;
    max_level = std::max(max_level, level[i] + 1);
  }
  return max_level;
}

namespace {

double gini(double wp, double wn) {
  const double total = wp + wn;
  if (total <= 0) return 0;
  return 1.0 - (wp * wp + wn * wn) / (total * total);
}

}  // namespace

SplitCandidate best_split(const std::vector<FeatureVector>& x, const std::vector<char>& y,
                          std::span<const std::uint32_t> indices,
                          std::span<const int> features, int min_leaf,
                          double weight_positive, double weight_negative) {
  SplitCandidate best;
  best.impurity = std::numeric_limits<double>::infinity();
  const std::size_t m = indices.size();
  if (m < 2 * static_cast<std::size_t>(min_leaf)) return best;

  double total_wp = 0, total_wn = 0;
  for (std::uint32_t idx : indices)
    (y[idx] ? total_wp : total_wn) += y[idx] ? weight_positive : weight_negative;

  std::vector<std::uint32_t> order(indices.begin(), indices.end());
  for (int f : features) {
    const std::size_t fi = static_cast<std::size_t>(f);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return x[a].values[fi] < x[b].values[fi];
    });
    double left_wp = 0, left_wn = 0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const std::uint32_t idx = order[i];
      (y[idx] ? left_wp : left_wn) += y[idx] ? weight_positive : weight_negative;
      const double v = x[idx].values[fi];
      const double v_next = x[order[i + 1]].values[fi];
      if (v == v_next) continue;
      const std::size_t n_left = i + 1, n_right = m - n_left;
      if (n_left < static_cast<std::size_t>(min_leaf) ||
          n_right < static_cast<std::size_t>(min_leaf))
        continue;
      const double right_wp = total_wp - left_wp;
      const double right_wn = total_wn - left_wn;
      const double wl = left_wp + left_wn, wr = right_wp + right_wn;
      const double impurity =
          (wl * gini(left_wp, left_wn) + wr * gini(right_wp, right_wn)) / (wl + wr);
      if (impurity < best.impurity) {
        best.valid = true;
        best.feature = f;
        best.threshold = v + (v_next - v) / 2;
        best.impurity = impurity;
      }
    }
  }
  return best;
}

namespace {

struct TreeBuilder {
  const std::vector<FeatureVector>& x;
  const std::vector<char>& y;
  const ForestHyperparams& hp;
  int features_per_split;
  double wp, wn;
  Rng rng;
  DecisionTree tree;
  std::vector<int> feature_pool;  // scratch for subset sampling

  std::int32_t build(std::vector<std::uint32_t>& indices, int depth) {
    double node_wp = 0, node_wn = 0;
    for (std::uint32_t idx : indices) (y[idx] ? node_wp : node_wn) += y[idx] ? wp : wn;

    const std::int32_t node_id = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    const double vote = node_wp / (node_wp + node_wn);

    const bool pure = node_wp == 0 || node_wn == 0;
    const bool depth_capped = hp.max_depth > 0 && depth >= hp.max_depth;
    if (pure || depth_capped ||
        indices.size() < 2 * static_cast<std::size_t>(hp.min_leaf)) {
      tree.nodes[node_id].vote = vote;
      return node_id;
    }

    sample_features();
    const SplitCandidate split =
        best_split(x, y, indices, std::span<const int>(feature_pool.data(),
                                                       static_cast<std::size_t>(features_per_split)),
                   hp.min_leaf, wp, wn);
    if (!split.valid) {
      tree.nodes[node_id].vote = vote;
      return node_id;
    }

    std::vector<std::uint32_t> left, right;
    for (std::uint32_t idx : indices)
      (x[idx].values[static_cast<std::size_t>(split.feature)] <= split.threshold ? left
                                                                                 : right)
          .push_back(idx);
    indices.clear();
    indices.shrink_to_fit();

    const std::int32_t left_id = build(left, depth + 1);
    const std::int32_t right_id = build(right, depth + 1);
    TreeNode& node = tree.nodes[node_id];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = left_id;
    node.right = right_id;
    return node_id;
  }

  // Partial Fisher-Yates: first features_per_split entries of feature_pool
  // become the sampled subset, then sorted for a stable evaluation order.
  void sample_features() {
    const std::size_t k = static_cast<std::size_t>(features_per_split);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(feature_pool.size() - i));
      std::swap(feature_pool[i], feature_pool[j]);
    }
    std::sort(feature_pool.begin(), feature_pool.begin() + static_cast<std::ptrdiff_t>(k));
  }
};

}  // namespace

ForestModel train_forest(const std::vector<FeatureVector>& x, const std::vector<bool>& y,
                         const ForestHyperparams& hp, std::uint64_t seed,
                         std::optional<std::pair<double, double>> class_weights,
                         unsigned n_threads) {
  if (x.empty()) throw EmptyData();
  if (x.size() != y.size()) throw InputError("feature/label size mismatch");
  if (hp.n_trees < 1) throw InputError("n_trees must be at least 1");
  if (hp.min_leaf < 1) throw InputError("min_leaf must be at least 1");
  const std::size_t n = x.size();
  const std::size_t dim = x[0].values.size();
  for (const auto& row : x)
    if (row.values.size() != dim) throw DimensionMismatch(row.record_id, dim, row.values.size());

  std::size_t n_pos = 0;
  std::vector<char> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = y[i] ? 1 : 0;
    n_pos += labels[i];
  }
  if (n_pos == 0 || n_pos == n) throw SingleClass();

  ForestModel model;
  model.hp = hp;
  model.seed = seed;
  model.feature_dim = dim;
  if (class_weights) {
    model.weight_positive = class_weights->first;
    model.weight_negative = class_weights->second;
  } else {
    // Inverse class frequency, normalized so weights average 1.
    model.weight_positive = static_cast<double>(n) / (2.0 * static_cast<double>(n_pos));
    model.weight_negative = static_cast<double>(n) / (2.0 * static_cast<double>(n - n_pos));
  }
  if (model.weight_positive <= 0 || model.weight_negative <= 0)
    throw InputError("class weights must be positive");

  int per_split = hp.features_per_split;
  if (per_split <= 0)
    per_split = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(dim))));
  per_split = std::min(per_split, static_cast<int>(dim));

  model.trees.resize(static_cast<std::size_t>(hp.n_trees));
  parallel_chunks(model.trees.size(), n_threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      TreeBuilder builder{x,
                          labels,
                          hp,
                          per_split,
                          model.weight_positive,
                          model.weight_negative,
                          Rng::stream(seed, t),
                          {},
                          {}};
      builder.feature_pool.resize(dim);
      for (std::size_t f = 0; f < dim; ++f) builder.feature_pool[f] = static_cast<int>(f);
      std::vector<std::uint32_t> bootstrap(n);
      for (auto& idx : bootstrap)
        idx = static_cast<std::uint32_t>(builder.rng.below(n));
      builder.build(bootstrap, 0);
      model.trees[t] = std::move(builder.tree);
    }
  });
  return model;
}

Prediction predict_forest(const ForestModel& model, std::span<const double> x) {
  if (x.size() != model.feature_dim)
    throw DimensionMismatch("input", model.feature_dim, x.size());
  double vote_mass = 0, total_mass = 0;
  for (const auto& tree : model.trees) {
    const bool positive = tree.leaf_vote(x) >= 0.5;
    const double w = positive ? model.weight_positive : model.weight_negative;
    total_mass += w;
    if (positive) vote_mass += w;
  }
  Prediction p;
  p.score = total_mass == 0 ? 0.0 : vote_mass / total_mass;
  p.label = p.score >= 0.5;
  return p;
}

Prediction predict_forest(const ForestModel& model, const FeatureVector& x) {
  return predict_forest(model, std::span<const double>(x.values));
}

}  // namespace fieldscope
