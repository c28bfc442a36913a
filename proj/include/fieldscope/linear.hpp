#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fieldscope/forest.hpp"  // Prediction
#include "fieldscope/ingest.hpp"

namespace fieldscope {

struct LinearModel {
  std::vector<double> weights;
  double bias = 0;
  double l2 = 0;
  double threshold = 0.5;
  double weight_positive = 1;
  double weight_negative = 1;
};

// Row-major dense design matrix with per-example class weights.
struct DenseDataset {
  std::size_t n = 0;
  std::size_t dim = 0;
  std::vector<double> x;  // n * dim
  std::vector<char> y;    // 0/1
  std::vector<double> example_weight;
};

// Mean class-weighted logistic loss plus (l2/2)*||w||^2 (bias unregularized);
// fills grad_w (size dim) and grad_b. Exposed for the finite-difference
// oracle.
double logistic_loss_grad(const DenseDataset& data, std::span<const double> weights,
                          double bias, double l2, std::span<double> grad_w,
                          double& grad_b);

struct LinearTrainOptions {
  double l2 = 1.0;
  std::optional<std::pair<double, double>> class_weights;  // default: inverse frequency
  double grad_tol = 1e-6;
  int max_iters = 10000;
};

// Full-batch gradient descent from the zero vector with backtracking line
// search, until the gradient norm drops below grad_tol or max_iters passes.
// Deterministic given (table, labels, options); the seed is recorded on the
// run manifest but the optimizer itself draws nothing. Throws SingleClass and
// MissingEmbedding(id).
LinearModel train_linear(const EmbeddingTable& table,
                         const std::map<std::string, bool>& labels,
                         const LinearTrainOptions& options = {});

// score = sigmoid(w.x + b); label = score >= threshold.
// Throws DimensionMismatch.
Prediction predict_linear(const LinearModel& model, std::span<const double> x);

// Threshold maximizing positive-class F1 over the given scored examples
// (candidates are midpoints between consecutive distinct scores). Ties keep
// the smallest candidate.
double tune_threshold(std::span<const double> scores, std::span<const char> labels);

}  // namespace fieldscope
