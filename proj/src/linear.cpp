#include "fieldscope/linear.hpp"

#include <algorithm>
#include <cmath>

#include "fieldscope/error.hpp"
#include "fieldscope/metrics.hpp"

namespace fieldscope {

namespace {

// log(1 + exp(-t)) without overflow for large |t|.
double log1p_exp_neg(double t) {
  if (t >= 0) return std::log1p(std::exp(-t));
  return -t + std::log1p(std::exp(t));
}

double sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

double logistic_loss_grad(const DenseDataset& data, std::span<const double> weights,
                          double bias, double l2, std::span<double> grad_w,
                          double& grad_b) {
  const std::size_t n = data.n, dim = data.dim;
  std::fill(grad_w.begin(), grad_w.end(), 0.0);
  grad_b = 0;
  double loss = 0;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* xi = data.x.data() + i * dim;
    double margin = bias;
    for (std::size_t j = 0; j < dim; ++j) margin += weights[j] * xi[j];
    const double z = data.y[i] ? 1.0 : -1.0;
    const double cw = data.example_weight[i];
    loss += cw * log1p_exp_neg(z * margin);
    // d/dm of log(1+exp(-z m)) = -z * sigmoid(-z m)
    const double g = cw * -z * sigmoid(-z * margin) * inv_n;
    grad_b += g;
    for (std::size_t j = 0; j < dim; ++j) grad_w[j] += g * xi[j];
  }
  loss *= inv_n;
  for (std::size_t j = 0; j < dim; ++j) {
    loss += 0.5 * l2 * weights[j] * weights[j];
    grad_w[j] += l2 * weights[j];
  }
  return loss;
}

LinearModel train_linear(const EmbeddingTable& table,
                         const std::map<std::string, bool>& labels,
                         const LinearTrainOptions& options) {
  if (labels.empty()) throw EmptyData();

  DenseDataset data;
  data.n = labels.size();
  data.dim = table.dim;
  data.x.reserve(data.n * data.dim);
  data.y.reserve(data.n);
  std::size_t n_pos = 0;
  for (const auto& [id, label] : labels) {  // sorted ids: deterministic layout
    auto row = table.rows.find(id);
    if (row == table.rows.end()) throw MissingEmbedding(id);
    data.x.insert(data.x.end(), row->second.begin(), row->second.end());
    data.y.push_back(label ? 1 : 0);
    n_pos += label ? 1 : 0;
  }
  if (n_pos == 0 || n_pos == data.n) throw SingleClass();

  LinearModel model;
  model.l2 = options.l2;
  if (options.class_weights) {
    model.weight_positive = options.class_weights->first;
    model.weight_negative = options.class_weights->second;
  } else {
    model.weight_positive =
        static_cast<double>(data.n) / (2.0 * static_cast<double>(n_pos));
    model.weight_negative =
        static_cast<double>(data.n) / (2.0 * static_cast<double>(data.n - n_pos));
  }
  data.example_weight.resize(data.n);
  for (std::size_t i = 0; i < data.n; ++i)
    data.example_weight[i] = data.y[i] ? model.weight_positive : model.weight_negative;

  model.weights.assign(data.dim, 0.0);
  model.bias = 0;

  std::vector<double> grad(data.dim), trial_w(data.dim), trial_grad(data.dim);
  double grad_b = 0, trial_b = 0;
  double loss = logistic_loss_grad(data, model.weights, model.bias, model.l2, grad, grad_b);
  double step = 1.0;
  for (int iter = 0; iter < options.max_iters; ++iter) {
    double grad_sq = grad_b * grad_b;
    for (double g : grad) grad_sq += g * g;
    if (std::sqrt(grad_sq) < options.grad_tol) break;

    // Backtracking with Armijo sufficient decrease; the accepted step seeds
    // the next iteration (doubled) so well-conditioned problems take long
    // steps.
    step = std::min(step * 2.0, 1e6);
    bool moved = false;
    while (step > 1e-18) {
      for (std::size_t j = 0; j < data.dim; ++j)
        trial_w[j] = model.weights[j] - step * grad[j];
      trial_b = model.bias - step * grad_b;
      double trial_gb = 0;
      const double trial_loss =
          logistic_loss_grad(data, trial_w, trial_b, model.l2, trial_grad, trial_gb);
      if (trial_loss <= loss - 1e-4 * step * grad_sq) {
        model.weights.swap(trial_w);
        model.bias = trial_b;
        grad.swap(trial_grad);
        grad_b = trial_gb;
        loss = trial_loss;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;  // no descent direction at double precision
  }
  return model;
}

Prediction predict_linear(const LinearModel& model, std::span<const double> x) {
  if (x.size() != model.weights.size())
    throw DimensionMismatch("input", model.weights.size(), x.size());
  double margin = model.bias;
  for (std::size_t j = 0; j < x.size(); ++j) margin += model.weights[j] * x[j];
  Prediction p;
  p.score = sigmoid(margin);
  p.label = p.score >= model.threshold;
  return p;
}

double tune_threshold(std::span<const double> scores, std::span<const char> labels) {
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::vector<double> candidates{0.5};
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
    candidates.push_back(sorted[i] + (sorted[i + 1] - sorted[i]) / 2);
  std::sort(candidates.begin(), candidates.end());

  double best_threshold = 0.5, best_f1 = -1;
  for (double t : candidates) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const bool predicted = scores[i] >= t;
      if (predicted && labels[i]) ++tp;
      else if (predicted && !labels[i]) ++fp;
      else if (!predicted && labels[i]) ++fn;
    }
    const double f1 = class_metrics(tp, fp, fn).f1;
    if (f1 > best_f1) {
      best_f1 = f1;
      best_threshold = t;
    }
  }
  return best_threshold;
}

}  // namespace fieldscope
