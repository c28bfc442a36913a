#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <sstream>

#include "fieldscope/error.hpp"
#include "fieldscope/ingest.hpp"
#include "support/generators.hpp"

using namespace fieldscope;

TEST_CASE("labeled corpus parsing splits categories") {
  std::istringstream in(
      R"({"id": "1901.00001", "title": "T", "abstract": "A", "categories": "cs.CV cs.LG", "year": 2019, "authors": ["Jane Doe"]})"
      "\n");
  const auto records = read_labeled_corpus(in, ParseMode::abort);
  REQUIRE(records.size() == 1);
  CHECK(records[0].subjects == std::set<std::string>{"cs.CV", "cs.LG"});
  CHECK(records[0].primary_subject == "cs.CV");
  CHECK(records[0].source == Source::arxiv);
  CHECK(records[0].year == 2019);
}

TEST_CASE("malformed lines: skip mode counts, abort mode names the line") {
  const std::string data =
      R"({"id": "a", "categories": "cs.AI"})" "\n"
      "not json at all\n"
      R"({"id": "b", "categories": "cs.LG"})" "\n";
  std::istringstream skip_in(data);
  IngestStats stats;
  const auto records = read_labeled_corpus(skip_in, ParseMode::skip, &stats);
  CHECK(records.size() == 2);
  CHECK(stats.skipped == 1);
  CHECK(stats.lines == 3);

  std::istringstream abort_in(data);
  try {
    read_labeled_corpus(abort_in, ParseMode::abort);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("year extraction prefers explicit fields over the id prefix") {
  std::istringstream in(
      R"({"id": "1901.00001", "categories": "cs.AI", "update_date": "2020-03-14"})" "\n"
      R"({"id": "1712.01234", "categories": "cs.AI"})" "\n"
      R"({"id": "cs/9901234", "categories": "cs.AI"})" "\n"
      R"({"id": "hep-th/0201999", "categories": "cs.AI"})" "\n");
  const auto records = read_labeled_corpus(in, ParseMode::abort);
  CHECK(records[0].year == 2020);  // date field wins
  CHECK(records[1].year == 2017);  // new-style id
  CHECK(records[2].year == 1999);  // old-style id, 19xx
  CHECK(records[3].year == 2002);  // old-style id, 20xx
}

TEST_CASE("authors parse from arrays and ' and '-separated strings") {
  std::istringstream in(
      R"({"id": "a", "categories": "cs.AI", "authors": "Jane Doe and J. Smith"})" "\n");
  const auto records = read_labeled_corpus(in, ParseMode::abort);
  CHECK(records[0].authors == std::vector<std::string>{"Jane Doe", "J. Smith"});
}

TEST_CASE("unlabeled corpus keeps optional fields and the source tag") {
  std::istringstream in(
      R"({"id": "w1", "title": "T", "abstract": "A", "year": 2015, "field_scores": {"computer vision": 0.31}})" "\n"
      R"({"id": "w2", "title": "T2", "abstract": "A2", "year": 2016})" "\n"
      R"({"id": "w3", "title": "T3", "abstract": "A3", "year": 2017, "doi": "10.1/x", "citations": ["c1", "c2"]})" "\n");
  const auto records = read_unlabeled_corpus(in, Source::wos, ParseMode::abort);
  REQUIRE(records.size() == 3);
  CHECK(records[0].field_scores.at("computer vision") == doctest::Approx(0.31));
  CHECK(!records[1].doi.has_value());
  CHECK(records[2].citation_ids->size() == 2);
  for (const auto& r : records) {
    CHECK(r.source == Source::wos);
    CHECK(r.subjects.empty());
  }
  CHECK(records[0].id == "w1");
  CHECK(records[1].id == "w2");
  CHECK(records[2].id == "w3");
}

TEST_CASE("embedding table reads, validates, and infers dim") {
  std::istringstream ok(
      R"({"manifest": {"text": "title+abstract", "encoder": "external"}})" "\n"
      R"({"id": "a", "vector": [1.0, 2.0, 3.0, 4.0]})" "\n"
      R"({"id": "b", "vector": [0.5, 0.25, 0.125, 0.0625]})" "\n");
  const EmbeddingTable table = read_embeddings(ok);
  CHECK(table.dim == 4);
  CHECK(table.rows.size() == 2);
  CHECK(table.manifest.at("text") == "title+abstract");

  std::istringstream mismatch(
      R"({"id": "a", "vector": [1, 2, 3, 4]})" "\n"
      R"({"id": "b", "vector": [1, 2, 3]})" "\n");
  try {
    read_embeddings(mismatch);
    FAIL("expected DimensionMismatch");
  } catch (const DimensionMismatch& e) {
    CHECK(std::string(e.what()).find("'b'") != std::string::npos);
  }

  std::istringstream dup(
      R"({"id": "a", "vector": [1]})" "\n" R"({"id": "a", "vector": [2]})" "\n");
  CHECK_THROWS_AS(read_embeddings(dup), DuplicateId);

  std::istringstream nonfinite(R"({"id": "a", "vector": [1, null]})" "\n");
  CHECK_THROWS_AS(read_embeddings(nonfinite), NonFiniteValue);
}

TEST_CASE("write then read round-trips records field-identically") {
  auto records = testing::labeled_corpus(31, 60, 2010, 2019);
  records[3].doi = "10.1234/abc";
  records[4].citation_ids = std::set<std::string>{"x", "y"};
  records[5].language = "en";
  records[6].field_scores = {{"machine learning", 0.7}, {"biology", -0.1}};
  std::ostringstream out;
  write_corpus(out, records);
  std::istringstream in(out.str());
  const auto round = read_labeled_corpus(in, ParseMode::abort);
  REQUIRE(round.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].source = Source::arxiv;  // reader tags labeled corpora as arXiv
    CHECK(round[i] == records[i]);
  }
}

TEST_CASE("unlabeled round-trip keeps per-record sources") {
  const auto planted = testing::planted_duplicates(5, 40, 8);
  std::ostringstream out;
  write_corpus(out, planted.records);
  std::istringstream in(out.str());
  const auto round = read_unlabeled_corpus(in, Source::other, ParseMode::abort);
  REQUIRE(round.size() == planted.records.size());
  for (std::size_t i = 0; i < round.size(); ++i) CHECK(round[i] == planted.records[i]);
}

TEST_CASE("subject counts match an independent line scan") {
  const auto records = testing::labeled_corpus(47, 500, 2010, 2019);
  const SubjectConfig config = SubjectConfig::default_ai();
  const auto rows = subject_counts(records, config);

  // Independent tally straight off the record fields.
  std::map<std::string, std::size_t> primary, cross;
  std::size_t any_primary = 0, any_cross = 0;
  const std::map<std::string, std::string> canon{
      {"cs.AI", "cs.AI"}, {"cs.CL", "cs.CL"}, {"cs.CV", "cs.CV"},
      {"cs.LG", "cs.LG"}, {"stat.ML", "cs.LG"}, {"cs.MA", "cs.MA"},
      {"cs.RO", "cs.RO"}};
  for (const auto& r : records) {
    std::set<std::string> hit;
    for (const auto& code : r.subjects)
      if (auto it = canon.find(code); it != canon.end()) hit.insert(it->second);
    for (const auto& c : hit) cross[c] += 1;
    if (!hit.empty()) any_cross += 1;
    if (r.primary_subject) {
      if (auto it = canon.find(*r.primary_subject); it != canon.end()) {
        primary[it->second] += 1;
        any_primary += 1;
      }
    }
  }
  for (const auto& row : rows) {
    if (row.subject == "any") {
      CHECK(row.primary == any_primary);
      CHECK(row.with_crossposts == any_cross);
    } else {
      CHECK(row.primary == primary[row.subject]);
      CHECK(row.with_crossposts == cross[row.subject]);
    }
  }
}
