#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "fieldscope/error.hpp"
#include "fieldscope/record.hpp"
#include "fieldscope/rng.hpp"
#include "fieldscope/text.hpp"
#include "support/generators.hpp"

using namespace fieldscope;

TEST_CASE("normalize_text basic forms") {
  CHECK(normalize_text("Back-Propagation  Methods").tokens ==
        std::vector<std::string>{"back", "propagation", "methods"});
  CHECK(normalize_text("").tokens.empty());
  CHECK(normalize_text("Deep Learning (2019)!").tokens ==
        std::vector<std::string>{"deep", "learning", "2019"});
}

TEST_CASE("normalize_text preserves asterisks and splits punctuation") {
  CHECK(normalize_text("fac* recognition").tokens ==
        std::vector<std::string>{"fac*", "recognition"});
  CHECK(normalize_text("state-of-the-art").tokens ==
        std::vector<std::string>{"state", "of", "the", "art"});
  CHECK(normalize_text("a b").tokens == std::vector<std::string>{"a", "b"});
  // Curly quotes and en dashes are boundaries; Latin-1 letters lowercase.
  CHECK(normalize_text("Schrödinger’s CAT–scan").tokens ==
        std::vector<std::string>{"schrödinger", "s", "cat", "scan"});
  CHECK(normalize_text("NAÏVE").tokens == std::vector<std::string>{"naïve"});
}

TEST_CASE("normalize_text is idempotent on random byte soup") {
  Rng rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    std::string raw;
    const std::size_t len = rng.below(60);
    for (std::size_t i = 0; i < len; ++i)
      raw += static_cast<char>(rng.below(256));
    NormalizedText once = normalize_text(raw);
    NormalizedText twice = normalize_text(once.joined());
    CHECK(once.tokens == twice.tokens);
    for (const auto& token : once.tokens) {
      CHECK(!token.empty());
      CHECK(token.find(' ') == std::string::npos);
    }
  }
}

TEST_CASE("derive_relevance_label on the default subject set") {
  const SubjectConfig config = SubjectConfig::default_ai();
  PublicationRecord r;
  r.id = "a";
  r.subjects = {"cs.CV", "math.OC"};
  CHECK(derive_relevance_label(r, config));
  r.subjects = {"stat.ML"};
  CHECK(derive_relevance_label(r, config));  // alias with cs.LG
  r.subjects = {"cs.CR"};
  CHECK(!derive_relevance_label(r, config));
  r.subjects = {};
  CHECK_THROWS_AS(derive_relevance_label(r, config), MissingSubjects);
}

TEST_CASE("derive_relevance_label is monotone and matches set intersection") {
  const SubjectConfig config = SubjectConfig::default_ai();
  auto records = testing::labeled_corpus(11, 400, 2010, 2019);
  const std::set<std::string> relevant{"cs.AI", "cs.CL", "cs.CV", "cs.LG",
                                       "stat.ML", "cs.MA", "cs.RO"};
  for (auto& r : records) {
    bool expected = false;  // brute-force oracle over the raw code set
    for (const auto& code : r.subjects) expected |= relevant.count(code) > 0;
    CHECK(derive_relevance_label(r, config) == expected);

    const bool before = derive_relevance_label(r, config);
    r.subjects.insert("cs.NE");  // adding a subject never flips true -> false
    CHECK((!before || derive_relevance_label(r, config)));
  }
}

TEST_CASE("subject config aliases are symmetric") {
  SubjectConfig config({"stat.ML"}, {{"cs.LG", "stat.ML"}});
  CHECK(config.canonical("cs.LG") == config.canonical("stat.ML"));
  CHECK(config.is_relevant_subject("cs.LG"));
  CHECK(config.is_relevant_subject("stat.ML"));
}

TEST_CASE("subject config loads from JSON") {
  std::istringstream in(R"({"relevant_subjects": ["cs.AI", "cs.LG"],
                            "alias_pairs": [["cs.LG", "stat.ML"]]})");
  const SubjectConfig config = SubjectConfig::load(in);
  CHECK(config.is_relevant_subject("stat.ML"));
  CHECK(!config.is_relevant_subject("cs.CV"));

  std::istringstream empty(R"({"relevant_subjects": []})");
  CHECK_THROWS_AS(SubjectConfig::load(empty), InputError);
}

TEST_CASE("admit_record reports the first failing condition") {
  PublicationRecord r;
  r.id = "x";
  r.title = "t";
  r.abstract = "a";
  r.year = 2015;
  r.language = "en";
  const auto gate = declared_language_gate({"en"});

  CHECK(admit_record(r, 2010, gate).admitted);

  PublicationRecord no_abstract = r;
  no_abstract.abstract.reset();
  auto res = admit_record(no_abstract, 2010, gate);
  CHECK(!res.admitted);
  CHECK(res.reason == RejectReason::no_abstract);

  PublicationRecord old = r;
  old.year = 2008;
  res = admit_record(old, 2010, gate);
  CHECK(!res.admitted);
  CHECK(res.reason == RejectReason::too_old);

  PublicationRecord no_year = r;
  no_year.year.reset();
  CHECK(admit_record(no_year, 2010, gate).reason == RejectReason::too_old);

  PublicationRecord german = r;
  german.language = "de";
  res = admit_record(german, 2010, gate);
  CHECK(!res.admitted);
  CHECK(res.reason == RejectReason::language);
  CHECK(admit_record(german, 2010, pass_through_gate()).admitted);
}

TEST_CASE("admit_record agrees with independently checked conditions") {
  Rng rng(23);
  const auto gate = declared_language_gate({"en"});
  for (int trial = 0; trial < 500; ++trial) {
    PublicationRecord r;
    r.id = "t" + std::to_string(trial);
    if (rng.below(4) > 0) r.title = "title";
    if (rng.below(4) > 0) r.abstract = "abstract";
    if (rng.below(4) > 0) r.year = 2005 + static_cast<int>(rng.below(15));
    if (rng.below(3) > 0) r.language = rng.below(2) ? "en" : "fr";
    const bool expected = r.title.has_value() && r.abstract.has_value() &&
                          r.year.has_value() && *r.year >= 2010 &&
                          r.language.has_value() && *r.language == "en";
    CHECK(admit_record(r, 2010, gate).admitted == expected);
  }
}
