#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fieldscope/record.hpp"

namespace fieldscope {

enum class SplitPart { train, dev, test };

std::string_view split_part_name(SplitPart p);
SplitPart split_part_from_name(std::string_view name);

// Total, disjoint partition of a labeled corpus, reproducible from the seed.
struct SplitAssignment {
  std::map<std::string, SplitPart> parts;
  std::uint64_t seed = 0;
  double dev_fraction = 0.10;
  double test_fraction = 0.10;

  // CSV: header "id,part", one row per record.
  void save(std::ostream& out) const;
  static SplitAssignment load(std::istream& in);
};

// Stratified sampling per the dev/test protocol: stratum key is
// (year, sorted relevant-subject flags); strata smaller than
// `min_stratum_size` fall back to year-only strata. Within each stratum,
// records are ordered by a seeded hash of id and the first test-fraction then
// dev-fraction quantiles are assigned. Throws MissingYear / MissingSubjects.
SplitAssignment stratified_split(std::span<const PublicationRecord> records,
                                 const SubjectConfig& config, double dev_fraction,
                                 double test_fraction, std::uint64_t seed,
                                 std::size_t min_stratum_size = 10);

struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

struct ClassMetrics {
  double precision = 0, recall = 0, f1 = 0;
  std::size_t support = 0;
};

// Zero-denominator convention: precision, recall and f1 are 0 when their
// denominators are 0.
ClassMetrics class_metrics(std::size_t tp, std::size_t fp, std::size_t fn);

struct MetricsRow {
  std::optional<int> year;  // nullopt = aggregate ("All") or unknown year
  ConfusionCounts counts;
  ClassMetrics positive;
  ClassMetrics negative;
  double weighted_f1 = 0;
  std::size_t total = 0;
};

struct EvalReport {
  std::vector<MetricsRow> per_year;  // ascending year, unknown-year row last
  MetricsRow aggregate;
};

// Per-year and aggregate precision/recall/F1/support for both classes, plus
// the support-weighted F1. `years` may omit ids; those land in an
// unknown-year row so aggregate counts stay the sum of per-year counts.
// Throws KeyMismatch when predictions and labels key sets differ.
EvalReport compute_metrics(const std::map<std::string, bool>& predictions,
                           const std::map<std::string, bool>& labels,
                           const std::map<std::string, int>& years);

// Full-precision machine output.
void write_report_csv(std::ostream& out, const EvalReport& report);
// Aligned text table in the appendix layout (two-decimal metrics).
void write_report_table(std::ostream& out, const EvalReport& report);
// Plot-ready per-year positive-class F1: "year,f1".
void write_f1_by_year_csv(std::ostream& out, const EvalReport& report);

// MAG-style field cross-tabulation. A record belongs to a field iff its score
// for that field is positive (non-exclusive).
struct CrosstabRow {
  std::string field;
  std::size_t count = 0;                            // field members
  std::vector<std::optional<double>> percent;       // per method; null when count == 0
};

struct Crosstab {
  std::vector<std::string> methods;
  std::vector<CrosstabRow> rows;  // sorted by field name
};

Crosstab field_crosstab(
    std::span<const PublicationRecord> records,
    const std::vector<std::pair<std::string, std::map<std::string, bool>>>& predictions);

void write_crosstab_csv(std::ostream& out, const Crosstab& table);
// Integer-rounded percentages, like the paper's display convention.
void write_crosstab_table(std::ostream& out, const Crosstab& table);

}  // namespace fieldscope
