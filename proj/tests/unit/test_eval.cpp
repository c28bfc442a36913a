#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fieldscope/error.hpp"
#include "fieldscope/metrics.hpp"
#include "fieldscope/rng.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace fieldscope;

TEST_CASE("class metrics match the worked confusion example") {
  const ClassMetrics m = class_metrics(3, 1, 2);
  CHECK(m.precision == doctest::Approx(0.75));
  CHECK(m.recall == doctest::Approx(0.60));
  CHECK(m.f1 == doctest::Approx(2.0 / 3.0));
  CHECK(m.support == 5);
}

TEST_CASE("zero denominators give zero metrics") {
  const ClassMetrics m = class_metrics(0, 0, 0);
  CHECK(m.precision == 0);
  CHECK(m.recall == 0);
  CHECK(m.f1 == 0);
}

TEST_CASE("compute_metrics equals the brute-force oracle on random confusions") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::map<std::string, bool> predictions, labels;
    std::map<std::string, int> years;
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    const std::size_t n = 1 + rng.below(60);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string id = "r" + std::to_string(i);
      const bool label = rng.below(2) == 0;
      const bool predicted = rng.below(2) == 0;
      predictions[id] = predicted;
      labels[id] = label;
      years[id] = 2010 + static_cast<int>(rng.below(3));
      if (predicted && label) ++tp;
      else if (predicted && !label) ++fp;
      else if (!predicted && label) ++fn;
      else ++tn;
    }
    const EvalReport report = compute_metrics(predictions, labels, years);
    const auto expected_pos = testing::ref_metrics(tp, fp, fn);
    const auto expected_neg = testing::ref_metrics(tn, fn, fp);
    CHECK(report.aggregate.positive.precision == expected_pos.precision);
    CHECK(report.aggregate.positive.recall == expected_pos.recall);
    CHECK(report.aggregate.positive.f1 == expected_pos.f1);
    CHECK(report.aggregate.negative.f1 == expected_neg.f1);
    CHECK(report.aggregate.counts.tp == tp);
    CHECK(report.aggregate.counts.tn == tn);

    // Aggregate confusion counts equal the per-year sums.
    ConfusionCounts sum;
    for (const auto& row : report.per_year) {
      sum.tp += row.counts.tp;
      sum.fp += row.counts.fp;
      sum.fn += row.counts.fn;
      sum.tn += row.counts.tn;
    }
    CHECK(sum.tp == tp);
    CHECK(sum.fp == fp);
    CHECK(sum.fn == fn);
    CHECK(sum.tn == tn);
  }
}

TEST_CASE("weighted average reproduces the reported All row") {
  // Positive F1 .84 on support 10,737; negative .98 on 95,296 -> ~.97.
  const double weighted =
      (0.84 * 10737 + 0.98 * 95296) / static_cast<double>(10737 + 95296);
  CHECK(weighted == doctest::Approx(0.97).epsilon(0.006));
}

TEST_CASE("perfect predictions give all-ones metrics") {
  std::map<std::string, bool> labels{{"a", true}, {"b", false}, {"c", true}};
  const EvalReport report = compute_metrics(labels, labels, {});
  CHECK(report.aggregate.positive.f1 == 1.0);
  CHECK(report.aggregate.negative.f1 == 1.0);
  CHECK(report.aggregate.weighted_f1 == 1.0);
}

TEST_CASE("key mismatches are rejected") {
  std::map<std::string, bool> labels{{"a", true}, {"b", false}};
  std::map<std::string, bool> missing{{"a", true}};
  CHECK_THROWS_AS(compute_metrics(missing, labels, {}), KeyMismatch);
  std::map<std::string, bool> renamed{{"a", true}, {"c", false}};
  CHECK_THROWS_AS(compute_metrics(renamed, labels, {}), KeyMismatch);
}

TEST_CASE("stratified split: exact arithmetic on a 10-record stratum") {
  auto records = testing::labeled_corpus(9, 10, 2015, 2015);
  for (auto& r : records) {  // one stratum: same year, same flag set
    r.subjects = {"cs.AI"};
    r.primary_subject = "cs.AI";
  }
  const auto split = stratified_split(records, SubjectConfig::default_ai(), 0.1, 0.1, 42);
  std::size_t n_train = 0, n_dev = 0, n_test = 0;
  for (const auto& [_, part] : split.parts) {
    n_train += part == SplitPart::train;
    n_dev += part == SplitPart::dev;
    n_test += part == SplitPart::test;
  }
  CHECK(n_test == 1);
  CHECK(n_dev == 1);
  CHECK(n_train == 8);
}

TEST_CASE("stratified split is deterministic and seed-sensitive") {
  const auto records = testing::labeled_corpus(13, 300, 2010, 2019);
  const SubjectConfig config = SubjectConfig::default_ai();
  const auto a = stratified_split(records, config, 0.1, 0.1, 7);
  const auto b = stratified_split(records, config, 0.1, 0.1, 7);
  CHECK(a.parts == b.parts);
  const auto c = stratified_split(records, config, 0.1, 0.1, 8);
  CHECK(a.parts != c.parts);
}

TEST_CASE("stratified split partitions with per-stratum sizes within one") {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const auto records =
        testing::labeled_corpus(1000 + trial, 50 + rng.below(400), 2014, 2019);
    const SubjectConfig config = SubjectConfig::default_ai();
    const auto split = stratified_split(records, config, 0.1, 0.1, trial);
    REQUIRE(split.parts.size() == records.size());

    // Rebuild the stratum keys the same way the contract states (with the
    // same <10 fallback) and check each stratum's dev/test sizes.
    std::map<std::string, std::vector<const PublicationRecord*>> strata;
    for (const auto& r : records) {
      std::string key = std::to_string(*r.year) + "#";
      for (const auto& f : config.relevant_flags(r.subjects)) key += f + "|";
      strata[key].push_back(&r);
    }
    std::map<std::string, std::vector<const PublicationRecord*>> merged;
    for (auto& [key, members] : strata) {
      if (members.size() < 10) {
        const std::string year_key = key.substr(0, key.find('#')) + "#";
        auto& pool = merged[year_key];
        pool.insert(pool.end(), members.begin(), members.end());
      } else {
        merged[key] = std::move(members);
      }
    }
    for (const auto& [key, members] : merged) {
      std::size_t n_dev = 0, n_test = 0;
      for (const auto* r : members) {
        const SplitPart part = split.parts.at(r->id);
        n_dev += part == SplitPart::dev;
        n_test += part == SplitPart::test;
      }
      const double want = 0.1 * static_cast<double>(members.size());
      CHECK(std::abs(static_cast<double>(n_dev) - want) <= 1.0);
      CHECK(std::abs(static_cast<double>(n_test) - want) <= 1.0);
    }
  }
}

TEST_CASE("stratified split requires year and subjects") {
  auto records = testing::labeled_corpus(3, 20, 2010, 2012);
  records[4].year.reset();
  CHECK_THROWS_AS(
      stratified_split(records, SubjectConfig::default_ai(), 0.1, 0.1, 1),
      MissingYear);
  records[4].year = 2011;
  records[7].subjects.clear();
  CHECK_THROWS_AS(
      stratified_split(records, SubjectConfig::default_ai(), 0.1, 0.1, 1),
      MissingSubjects);
}

TEST_CASE("split assignment saves and loads as CSV") {
  const auto records = testing::labeled_corpus(21, 40, 2010, 2012);
  const auto split = stratified_split(records, SubjectConfig::default_ai(), 0.1, 0.1, 5);
  std::ostringstream out;
  split.save(out);
  std::istringstream in(out.str());
  const auto loaded = SplitAssignment::load(in);
  CHECK(loaded.parts == split.parts);
}

TEST_CASE("field crosstab worked examples") {
  std::vector<PublicationRecord> records(5);
  for (std::size_t i = 0; i < records.size(); ++i)
    records[i].id = std::string(1, static_cast<char>('a' + i));
  records[0].field_scores = {{"vision", 0.4}};
  records[1].field_scores = {{"vision", 0.2}, {"nlp", 0.9}};
  records[2].field_scores = {{"vision", 0.1}};
  records[3].field_scores = {{"vision", 0.8}, {"nlp", 0.0}};  // zero: not a member
  records[4].field_scores = {{"dead", 0.0}};                  // zero-member field

  std::map<std::string, bool> predictions{
      {"a", true}, {"b", true}, {"c", false}, {"d", false}, {"e", true}};
  const Crosstab table = field_crosstab(records, {{"keywords", predictions}});
  REQUIRE(table.rows.size() == 3);

  CHECK(table.rows[0].field == "dead");
  CHECK(table.rows[0].count == 0);
  CHECK(!table.rows[0].percent[0].has_value());

  CHECK(table.rows[1].field == "nlp");  // member: b only (d scored 0)
  CHECK(table.rows[1].count == 1);
  CHECK(*table.rows[1].percent[0] == doctest::Approx(100.0));

  CHECK(table.rows[2].field == "vision");  // members a,b,c,d; relevant a,b
  CHECK(table.rows[2].count == 4);
  CHECK(*table.rows[2].percent[0] == doctest::Approx(50.0));
}

TEST_CASE("crosstab is invariant to record order and bounded") {
  auto records = testing::labeled_corpus(57, 80, 2010, 2015);
  Rng rng(5);
  std::map<std::string, bool> predictions;
  for (auto& r : records) {
    r.field_scores["f" + std::to_string(rng.below(4))] = rng.next_double() - 0.3;
    predictions[r.id] = rng.below(2) == 0;
  }
  const Crosstab forward = field_crosstab(records, {{"m", predictions}});
  std::reverse(records.begin(), records.end());
  const Crosstab backward = field_crosstab(records, {{"m", predictions}});
  REQUIRE(forward.rows.size() == backward.rows.size());
  for (std::size_t i = 0; i < forward.rows.size(); ++i) {
    CHECK(forward.rows[i].field == backward.rows[i].field);
    CHECK(forward.rows[i].count == backward.rows[i].count);
    if (forward.rows[i].percent[0]) {
      CHECK(*forward.rows[i].percent[0] == *backward.rows[i].percent[0]);
      CHECK(*forward.rows[i].percent[0] >= 0.0);
      CHECK(*forward.rows[i].percent[0] <= 100.0);
    }
  }
}

TEST_CASE("report writers emit csv and aligned table") {
  std::map<std::string, bool> labels{{"a", true}, {"b", false}, {"c", true}, {"d", false}};
  std::map<std::string, bool> predictions{{"a", true}, {"b", true}, {"c", false}, {"d", false}};
  std::map<std::string, int> years{{"a", 2010}, {"b", 2010}, {"c", 2011}, {"d", 2011}};
  const EvalReport report = compute_metrics(predictions, labels, years);

  std::ostringstream csv;
  write_report_csv(csv, report);
  CHECK(csv.str().find("year,pos_precision") == 0);
  CHECK(csv.str().find("\nAll,") != std::string::npos);

  std::ostringstream table;
  write_report_table(table, report);
  CHECK(table.str().find("Positive Class") != std::string::npos);
  CHECK(table.str().find("Wtd. Avg.") != std::string::npos);

  std::ostringstream f1csv;
  write_f1_by_year_csv(f1csv, report);
  CHECK(f1csv.str().find("year,f1\n2010,") != std::string::npos);
}
