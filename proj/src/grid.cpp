#include "fieldscope/grid.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <sstream>

namespace fieldscope {

std::vector<GridCell> enumerate_cells(const GridSpec& spec) {
  std::vector<GridCell> cells;
  std::vector<std::pair<std::string, const std::vector<double>*>> axes;
  for (const auto& [name, values] : spec.axes) axes.emplace_back(name, &values);
  if (axes.empty()) {
    cells.emplace_back();
    return cells;
  }
  std::vector<std::size_t> pos(axes.size(), 0);
  while (true) {
    GridCell cell;
    for (std::size_t a = 0; a < axes.size(); ++a)
      cell.values[axes[a].first] = (*axes[a].second)[pos[a]];
    cells.push_back(std::move(cell));
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++pos[a] < axes[a].second->size()) break;
      pos[a] = 0;
      if (a == 0) return cells;
    }
  }
}

std::vector<int> stratified_folds(std::span<const char> labels,
                                  std::span<const std::string> strata, int folds,
                                  std::uint64_t seed) {
  const std::size_t n = labels.size();
  struct Member {
    std::size_t index;
    std::uint64_t order;
  };
  std::map<std::pair<std::string, char>, std::vector<Member>> groups;
  for (std::size_t i = 0; i < n; ++i) {
    std::string key = strata.empty() ? std::string() : strata[i];
    groups[{std::move(key), labels[i]}].push_back(
        {i, fnv1a64(static_cast<std::uint64_t>(i), fnv1a64(seed))});
  }
  std::vector<int> fold_of(n, 0);
  for (auto& [_, members] : groups) {
    std::sort(members.begin(), members.end(), [](const Member& a, const Member& b) {
      if (a.order != b.order) return a.order < b.order;
      return a.index < b.index;
    });
    for (std::size_t i = 0; i < members.size(); ++i)
      fold_of[members[i].index] = static_cast<int>(i % static_cast<std::size_t>(folds));
  }
  return fold_of;
}

bool cell_prefers(const GridCell& a, const GridCell& b) {
  const double inf = std::numeric_limits<double>::infinity();
  const double a_trees = a.at("n_trees", 0), b_trees = b.at("n_trees", 0);
  if (a_trees != b_trees) return a_trees < b_trees;
  double a_depth = a.at("max_depth", 0), b_depth = b.at("max_depth", 0);
  if (a_depth == 0) a_depth = inf;  // 0 = unlimited
  if (b_depth == 0) b_depth = inf;
  return a_depth < b_depth;
}

void write_cv_table_csv(std::ostream& out, const GridResult& result) {
  std::ostringstream buf;
  buf.precision(17);
  std::vector<std::string> axis_names;
  if (!result.table.empty())
    for (const auto& [name, _] : result.table.front().cell.values)
      axis_names.push_back(name);
  for (const auto& name : axis_names) buf << name << ',';
  buf << "mean_f1,failed,error";
  std::size_t max_folds = 0;
  for (const auto& row : result.table) max_folds = std::max(max_folds, row.fold_f1.size());
  for (std::size_t k = 0; k < max_folds; ++k) buf << ",fold_" << k;
  buf << '\n';
  for (const auto& row : result.table) {
    for (const auto& name : axis_names) buf << row.cell.at(name, 0) << ',';
    buf << row.mean_f1 << ',' << (row.failed ? "true" : "false") << ',' << row.error;
    for (double f1 : row.fold_f1) buf << ',' << f1;
    buf << '\n';
  }
  out << buf.str();
}

}  // namespace fieldscope
