#include "fieldscope/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "fieldscope/error.hpp"
#include "fieldscope/hash.hpp"

namespace fieldscope {

std::string_view split_part_name(SplitPart p) {
  switch (p) {
    case SplitPart::train: return "train";
    case SplitPart::dev: return "dev";
    case SplitPart::test: return "test";
  }
  return "train";
}

SplitPart split_part_from_name(std::string_view name) {
  if (name == "train") return SplitPart::train;
  if (name == "dev") return SplitPart::dev;
  if (name == "test") return SplitPart::test;
  throw InputError("unknown split part '" + std::string(name) + "'");
}

void SplitAssignment::save(std::ostream& out) const {
  out << "id,part\n";
  for (const auto& [id, part] : parts) out << id << ',' << split_part_name(part) << '\n';
}

SplitAssignment SplitAssignment::load(std::istream& in) {
  SplitAssignment split;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || (line_no == 1 && line.rfind("id,", 0) == 0)) continue;
    const std::size_t comma = line.rfind(',');
    if (comma == std::string::npos) throw ParseError(line_no, "expected id,part");
    split.parts[line.substr(0, comma)] = split_part_from_name(line.substr(comma + 1));
  }
  return split;
}

SplitAssignment stratified_split(std::span<const PublicationRecord> records,
                                 const SubjectConfig& config, double dev_fraction,
                                 double test_fraction, std::uint64_t seed,
                                 std::size_t min_stratum_size) {
  if (dev_fraction < 0 || test_fraction < 0 || dev_fraction + test_fraction > 1.0)
    throw InputError("split fractions must be nonnegative and sum to at most 1");

  struct Item {
    const PublicationRecord* record;
    std::uint64_t order;
  };
  std::map<std::pair<int, std::string>, std::vector<Item>> strata;
  for (const auto& r : records) {
    if (!r.year) throw MissingYear(r.id);
    if (r.subjects.empty()) throw MissingSubjects(r.id);
    std::string flags;
    for (const auto& f : config.relevant_flags(r.subjects)) {
      flags += f;
      flags += '|';
    }
    strata[{*r.year, std::move(flags)}].push_back({&r, seeded_hash(seed, r.id)});
  }

  // Degenerate strata pool into a year-only stratum so test cells stay
  // non-empty.
  std::map<std::pair<int, std::string>, std::vector<Item>> merged;
  for (auto& [key, items] : strata) {
    if (items.size() < min_stratum_size) {
      auto& pool = merged[{key.first, std::string()}];
      pool.insert(pool.end(), items.begin(), items.end());
    } else {
      merged[key] = std::move(items);
    }
  }

  SplitAssignment split;
  split.seed = seed;
  split.dev_fraction = dev_fraction;
  split.test_fraction = test_fraction;
  for (auto& [key, items] : merged) {
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
      if (a.order != b.order) return a.order < b.order;
      return a.record->id < b.record->id;
    });
    const auto n = items.size();
    std::size_t n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
    std::size_t n_dev = static_cast<std::size_t>(std::llround(dev_fraction * static_cast<double>(n)));
    n_test = std::min(n_test, n);
    n_dev = std::min(n_dev, n - n_test);
    for (std::size_t i = 0; i < n; ++i) {
      SplitPart part = i < n_test              ? SplitPart::test
                       : i < n_test + n_dev    ? SplitPart::dev
                                               : SplitPart::train;
      if (!split.parts.emplace(items[i].record->id, part).second)
        throw DuplicateId(items[i].record->id);
    }
  }
  return split;
}

ClassMetrics class_metrics(std::size_t tp, std::size_t fp, std::size_t fn) {
  ClassMetrics m;
  m.support = tp + fn;
  m.precision = (tp + fp) == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  m.recall = (tp + fn) == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  m.f1 = (m.precision + m.recall) == 0 ? 0.0
                                       : 2 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

namespace {

MetricsRow row_from_counts(std::optional<int> year, const ConfusionCounts& c) {
  MetricsRow row;
  row.year = year;
  row.counts = c;
  row.positive = class_metrics(c.tp, c.fp, c.fn);
  // Negative class mirrors the confusion matrix: TN are its true positives.
  row.negative = class_metrics(c.tn, c.fn, c.fp);
  row.total = row.positive.support + row.negative.support;
  row.weighted_f1 =
      row.total == 0
          ? 0.0
          : (row.positive.f1 * static_cast<double>(row.positive.support) +
             row.negative.f1 * static_cast<double>(row.negative.support)) /
                static_cast<double>(row.total);
  return row;
}

}  // namespace

EvalReport compute_metrics(const std::map<std::string, bool>& predictions,
                           const std::map<std::string, bool>& labels,
                           const std::map<std::string, int>& years) {
  if (predictions.size() != labels.size())
    throw KeyMismatch("predictions and labels differ in size (" +
                      std::to_string(predictions.size()) + " vs " +
                      std::to_string(labels.size()) + ")");
  std::map<std::optional<int>, ConfusionCounts> by_year;
  ConfusionCounts all;
  for (const auto& [id, label] : labels) {
    auto p = predictions.find(id);
    if (p == predictions.end()) throw KeyMismatch("no prediction for id '" + id + "'");
    const bool predicted = p->second;
    std::optional<int> year;
    if (auto y = years.find(id); y != years.end()) year = y->second;
    ConfusionCounts& c = by_year[year];
    if (predicted && label) ++c.tp, ++all.tp;
    else if (predicted && !label) ++c.fp, ++all.fp;
    else if (!predicted && label) ++c.fn, ++all.fn;
    else ++c.tn, ++all.tn;
  }
  EvalReport report;
  for (const auto& [year, counts] : by_year)
    report.per_year.push_back(row_from_counts(year, counts));
  // Known years ascending, unknown-year bucket last.
  std::stable_sort(report.per_year.begin(), report.per_year.end(),
                   [](const MetricsRow& a, const MetricsRow& b) {
                     if (a.year.has_value() != b.year.has_value()) return a.year.has_value();
                     return a.year < b.year;
                   });
  report.aggregate = row_from_counts(std::nullopt, all);
  return report;
}

namespace {

std::string year_label(const std::optional<int>& year, const char* fallback) {
  return year ? std::to_string(*year) : std::string(fallback);
}

void csv_row(std::ostream& out, const std::string& year, const MetricsRow& r) {
  out << year << ',' << r.positive.precision << ',' << r.positive.recall << ','
      << r.positive.f1 << ',' << r.positive.support << ',' << r.negative.precision << ','
      << r.negative.recall << ',' << r.negative.f1 << ',' << r.negative.support << ','
      << r.weighted_f1 << ',' << r.total << '\n';
}

}  // namespace

void write_report_csv(std::ostream& out, const EvalReport& report) {
  std::ostringstream buf;
  buf.precision(17);
  buf << "year,pos_precision,pos_recall,pos_f1,pos_support,"
         "neg_precision,neg_recall,neg_f1,neg_support,weighted_f1,total\n";
  for (const auto& row : report.per_year) csv_row(buf, year_label(row.year, "unknown"), row);
  csv_row(buf, "All", report.aggregate);
  out << buf.str();
}

void write_report_table(std::ostream& out, const EvalReport& report) {
  auto print_row = [&](const std::string& year, const MetricsRow& r) {
    char line[160];
    std::snprintf(line, sizeof(line),
                  "%-8s %9.2f %7.2f %6.2f %9zu %11.2f %7.2f %6.2f %9zu %8.2f %9zu\n",
                  year.c_str(), r.positive.precision, r.positive.recall, r.positive.f1,
                  r.positive.support, r.negative.precision, r.negative.recall,
                  r.negative.f1, r.negative.support, r.weighted_f1, r.total);
    out << line;
  };
  out << "                 Positive Class                       Negative Class"
         "                  Wtd. Avg.\n";
  out << "Year     Precision  Recall     F1   Support   Precision  Recall     F1"
         "   Support       F1     Total\n";
  for (const auto& row : report.per_year) print_row(year_label(row.year, "unknown"), row);
  print_row("All", report.aggregate);
}

void write_f1_by_year_csv(std::ostream& out, const EvalReport& report) {
  std::ostringstream buf;
  buf.precision(17);
  buf << "year,f1\n";
  for (const auto& row : report.per_year)
    if (row.year) buf << *row.year << ',' << row.positive.f1 << '\n';
  out << buf.str();
}

Crosstab field_crosstab(
    std::span<const PublicationRecord> records,
    const std::vector<std::pair<std::string, std::map<std::string, bool>>>& predictions) {
  Crosstab table;
  for (const auto& [name, _] : predictions) table.methods.push_back(name);

  struct Tally {
    std::size_t members = 0;
    std::vector<std::size_t> relevant;
  };
  std::map<std::string, Tally> tallies;
  for (const auto& r : records) {
    for (const auto& [field, score] : r.field_scores) {
      auto [it_tally, inserted] = tallies.try_emplace(field);
      Tally& t = it_tally->second;
      if (inserted) t.relevant.assign(predictions.size(), 0);
      if (!(score > 0)) continue;  // membership iff positive score
      t.members += 1;
      for (std::size_t m = 0; m < predictions.size(); ++m) {
        auto it = predictions[m].second.find(r.id);
        if (it != predictions[m].second.end() && it->second) t.relevant[m] += 1;
      }
    }
  }
  for (const auto& [field, tally] : tallies) {
    CrosstabRow row;
    row.field = field;
    row.count = tally.members;
    for (std::size_t m = 0; m < predictions.size(); ++m) {
      if (tally.members == 0) {
        row.percent.emplace_back(std::nullopt);
      } else {
        row.percent.emplace_back(100.0 * static_cast<double>(tally.relevant[m]) /
                                 static_cast<double>(tally.members));
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_crosstab_csv(std::ostream& out, const Crosstab& table) {
  std::ostringstream buf;
  buf.precision(17);
  buf << "field,count";
  for (const auto& m : table.methods) buf << ',' << m;
  buf << '\n';
  for (const auto& row : table.rows) {
    buf << row.field << ',' << row.count;
    for (const auto& p : row.percent) {
      buf << ',';
      if (p) buf << *p;
    }
    buf << '\n';
  }
  out << buf.str();
}

void write_crosstab_table(std::ostream& out, const Crosstab& table) {
  std::size_t width = 24;
  for (const auto& row : table.rows) width = std::max(width, row.field.size() + 2);
  out << std::string(width, ' ') << "     Count";
  for (const auto& m : table.methods) {
    char cell[64];
    std::snprintf(cell, sizeof(cell), " %12s", m.c_str());
    out << cell;
  }
  out << '\n';
  for (const auto& row : table.rows) {
    out << row.field << std::string(width - row.field.size(), ' ');
    char cell[64];
    std::snprintf(cell, sizeof(cell), " %9zu", row.count);
    out << cell;
    for (const auto& p : row.percent) {
      if (p)
        std::snprintf(cell, sizeof(cell), " %12ld", std::lround(*p));
      else
        std::snprintf(cell, sizeof(cell), " %12s", "-");
      out << cell;
    }
    out << '\n';
  }
}

}  // namespace fieldscope
