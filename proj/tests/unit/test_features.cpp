#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "fieldscope/error.hpp"
#include "fieldscope/features.hpp"
#include "fieldscope/rng.hpp"
#include "support/oracles.hpp"

using namespace fieldscope;

namespace {

ScoredLexicon tiny_lexicon() {
  return ScoredLexicon::from_terms({{"deep learning", 3},
                                    {"neural network*", 2},
                                    {"gradient", 1}});
}

}  // namespace

TEST_CASE("feature layout matches the hand-enumerated example") {
  const ScoredLexicon lexicon = ScoredLexicon::from_terms({{"deep learning", 3}});
  PublicationRecord r;
  r.id = "a";
  r.title = "deep learning for deep learning";
  const FeatureVector fv = extract_features(r, lexicon);
  REQUIRE(fv.values.size() == kLexiconFeatureCount);
  // Title block: counts s1..s3, distinct s1..s3, proportions s1..s3, weighted.
  CHECK(fv.values[2] == 2);          // two windows of "deep learning"
  CHECK(fv.values[5] == 1);          // one distinct term
  CHECK(fv.values[8] == doctest::Approx(4.0 / 5.0));  // 4 of 5 tokens covered
  CHECK(fv.values[9] == 6);          // 3 * 2
  for (std::size_t i = 10; i < 20; ++i) CHECK(fv.values[i] == 0);  // empty abstract
}

TEST_CASE("no matches anywhere gives the zero vector") {
  PublicationRecord r;
  r.id = "a";
  r.title = "sediment transport";
  r.abstract = "rivers and deltas";
  const FeatureVector fv = extract_features(r, tiny_lexicon());
  for (double v : fv.values) CHECK(v == 0);
}

TEST_CASE("both fields null raises NoText") {
  PublicationRecord r;
  r.id = "a";
  CHECK_THROWS_AS(extract_features(r, tiny_lexicon()), NoText);
}

TEST_CASE("overlapping matches count windows but union coverage") {
  const ScoredLexicon lexicon = ScoredLexicon::from_terms({{"deep deep", 1}});
  PublicationRecord r;
  r.id = "a";
  r.title = "deep deep deep";
  const FeatureVector fv = extract_features(r, lexicon);
  CHECK(fv.values[0] == 2);                      // overlapping windows both count
  CHECK(fv.values[6] == doctest::Approx(1.0));   // but coverage stays <= 1
}

TEST_CASE("duplicating the abstract doubles counts, keeps proportions") {
  PublicationRecord r;
  r.id = "a";
  r.title = "";
  r.abstract = "deep learning with a neural network and a gradient step";
  const FeatureVector once = extract_features(r, tiny_lexicon());
  PublicationRecord doubled = r;
  doubled.abstract = *r.abstract + " " + *r.abstract;
  const FeatureVector twice = extract_features(doubled, tiny_lexicon());
  for (int s = 0; s < 3; ++s) {
    CHECK(twice.values[10 + s] == 2 * once.values[10 + s]);                  // counts
    CHECK(twice.values[16 + s] == doctest::Approx(once.values[16 + s]));     // proportions
  }
  CHECK(twice.values[19] == 2 * once.values[19]);  // weighted total
}

TEST_CASE("counts equal the brute-force window oracle on random text") {
  Rng rng(17);
  const std::vector<std::string> words{"deep", "learning", "neural", "network",
                                       "networks", "gradient", "rock", "jazz"};
  const ScoredLexicon lexicon = tiny_lexicon();
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    const std::size_t len = rng.below(20);
    for (std::size_t i = 0; i < len; ++i) {
      if (i) text += ' ';
      text += words[rng.below(words.size())];
    }
    PublicationRecord r;
    r.id = "t";
    r.title = text;
    const FeatureVector fv = extract_features(r, lexicon);

    const NormalizedText norm = normalize_text(text);
    double expected_counts[3] = {0, 0, 0};
    for (const auto& entry : lexicon.entries()) {
      const auto windows = testing::ref_term_windows(
          normalize_text(entry.pattern.source()).tokens, norm.tokens);
      expected_counts[entry.score - 1] += double(windows.size());
    }
    for (int s = 0; s < 3; ++s) CHECK(fv.values[s] == expected_counts[s]);
  }
}

TEST_CASE("features are invariant to re-punctuation of the input") {
  PublicationRecord plain, noisy;
  plain.id = noisy.id = "a";
  plain.title = "deep learning and neural networks";
  noisy.title = "Deep-Learning; (and) NEURAL networks!!";
  const ScoredLexicon lexicon = tiny_lexicon();
  CHECK(extract_features(plain, lexicon).values ==
        extract_features(noisy, lexicon).values);
}

TEST_CASE("scored lexicon rejects bad scores and duplicate terms") {
  std::istringstream bad_score("deep learning\t5\n");
  CHECK_THROWS_AS(ScoredLexicon::load(bad_score), ParseError);
  std::istringstream duplicate("deep learning\t3\nDeep  Learning!\t1\n");
  CHECK_THROWS_AS(ScoredLexicon::load(duplicate), ParseError);
  std::istringstream ok("# comment\ndeep learning\t3\n\nneural net*\t1\n");
  CHECK(ScoredLexicon::load(ok).size() == 2);
}

TEST_CASE("shipped scored placeholder parses with 100 entries") {
  const ScoredLexicon lexicon = ScoredLexicon::load_file(
      std::string(FIELDSCOPE_SOURCE_DIR) + "/lexicons/cset_keywords_2019_scored.tsv");
  CHECK(lexicon.size() == 100);
  for (const auto& entry : lexicon.entries()) CHECK(entry.score == 3);
}
