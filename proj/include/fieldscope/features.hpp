#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "fieldscope/keywords.hpp"
#include "fieldscope/record.hpp"

namespace fieldscope {

// Terms scored on a three-point scale; patterns pairwise distinct after
// normalization.
class ScoredLexicon {
 public:
  struct Entry {
    TermPattern pattern;
    int score;  // 1, 2 or 3
  };

  static ScoredLexicon from_terms(const std::vector<std::pair<std::string, int>>& terms);
  // File format: term<TAB>score per line, '#' comments, blank lines ignored.
  static ScoredLexicon load(std::istream& in);
  static ScoredLexicon load_file(const std::string& path);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<Entry> entries_;
};

inline constexpr std::size_t kLexiconFeatureCount = 20;

// Fixed feature order, ten per field (title first, then abstract):
//   count_s1..s3       occurrence count of score-s matches (windows, overlaps counted)
//   distinct_s1..s3    number of score-s terms with at least one match
//   prop_s1..s3        tokens covered by score-s matches / field tokens (union, <= 1)
//   weighted           1*count_s1 + 2*count_s2 + 3*count_s3
const std::array<std::string, kLexiconFeatureCount>& lexicon_feature_names();

struct FeatureVector {
  std::string record_id;
  std::vector<double> values;
};

// Missing title/abstract is treated as empty text; proportions over an empty
// field are 0. Throws NoText when both fields are null.
FeatureVector extract_features(const PublicationRecord& record, const ScoredLexicon& lexicon);

}  // namespace fieldscope
