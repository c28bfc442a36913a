#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fieldscope/error.hpp"
#include "fieldscope/hash.hpp"
#include "fieldscope/metrics.hpp"

namespace fieldscope {

// Hyperparameter grid; the objective is fixed to positive-class F1 (the
// reporting metric).
struct GridSpec {
  std::map<std::string, std::vector<double>> axes;
  int folds = 5;
};

struct GridCell {
  std::map<std::string, double> values;

  double at(const std::string& name, double fallback) const {
    auto it = values.find(name);
    return it == values.end() ? fallback : it->second;
  }
};

struct CellResult {
  GridCell cell;
  std::vector<double> fold_f1;
  double mean_f1 = 0;
  bool failed = false;
  std::string error;
};

struct GridResult {
  GridCell best;
  double best_mean_f1 = 0;
  std::vector<CellResult> table;  // one row per cell, in enumeration order
};

// Cartesian product of the axes: axes iterate in name order, values in listed
// order, odometer over the last axis fastest.
std::vector<GridCell> enumerate_cells(const GridSpec& spec);

// Stratified fold ids in [0, folds): examples are grouped by
// (stratum, label), ordered within each group by a seeded hash, and dealt
// round-robin. `strata` may be empty (label-only stratification).
std::vector<int> stratified_folds(std::span<const char> labels,
                                  std::span<const std::string> strata, int folds,
                                  std::uint64_t seed);

// Smaller-model tie-break: fewer n_trees, then shallower max_depth (0 means
// unlimited and counts as deepest), then earlier enumeration order.
bool cell_prefers(const GridCell& a, const GridCell& b);

// Stratified k-fold CV over every grid cell; the best cell maximizes mean
// positive-class F1. Trainer errors mark the cell failed and the search
// continues. `train(train_indices, cell, cell_seed) -> model`,
// `predict(model, index) -> bool`.
template <class TrainFn, class PredictFn>
GridResult grid_search(std::span<const char> labels, std::span<const std::string> strata,
                       const GridSpec& spec, std::uint64_t seed, TrainFn&& train,
                       PredictFn&& predict) {
  const std::size_t n = labels.size();
  if (spec.folds < 2) throw InputError("grid search needs at least 2 folds");
  if (static_cast<std::size_t>(spec.folds) > n)
    throw InputError("more folds than training examples");
  for (const auto& [name, values] : spec.axes)
    if (values.empty()) throw InputError("empty grid axis '" + name + "'");

  const std::vector<int> fold_of = stratified_folds(labels, strata, spec.folds, seed);
  GridResult result;
  result.table.reserve(enumerate_cells(spec).size());

  std::size_t cell_index = 0;
  bool have_best = false;
  for (const GridCell& cell : enumerate_cells(spec)) {
    CellResult row;
    row.cell = cell;
    try {
      for (int k = 0; k < spec.folds; ++k) {
        std::vector<std::size_t> train_idx, eval_idx;
        for (std::size_t i = 0; i < n; ++i)
          (fold_of[i] == k ? eval_idx : train_idx).push_back(i);
        const std::uint64_t cell_seed =
            fnv1a64(static_cast<std::uint64_t>(k), fnv1a64(cell_index, fnv1a64(seed)));
        auto model = train(std::span<const std::size_t>(train_idx), cell, cell_seed);
        std::size_t tp = 0, fp = 0, fn = 0;
        for (std::size_t i : eval_idx) {
          const bool predicted = predict(model, i);
          if (predicted && labels[i]) ++tp;
          else if (predicted && !labels[i]) ++fp;
          else if (!predicted && labels[i]) ++fn;
        }
        row.fold_f1.push_back(class_metrics(tp, fp, fn).f1);
      }
      for (double f1 : row.fold_f1) row.mean_f1 += f1;
      row.mean_f1 /= static_cast<double>(spec.folds);
    } catch (const Error& e) {
      row.failed = true;
      row.error = e.name();
      row.fold_f1.clear();
      row.mean_f1 = 0;
    }
    if (!row.failed) {
      const bool better =
          !have_best || row.mean_f1 > result.best_mean_f1 + 1e-12 ||
          (row.mean_f1 >= result.best_mean_f1 - 1e-12 && cell_prefers(cell, result.best));
      if (better) {
        result.best = cell;
        result.best_mean_f1 = row.mean_f1;
        have_best = true;
      }
    }
    result.table.push_back(std::move(row));
    ++cell_index;
  }
  if (!have_best) {
    std::string first = result.table.empty() ? "" : result.table.front().error;
    throw Error("GridSearchFailed", ErrorKind::data,
                "every grid cell failed (first cell: " + first + ")");
  }
  return result;
}

void write_cv_table_csv(std::ostream& out, const GridResult& result);

}  // namespace fieldscope
