#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fieldscope/record.hpp"
#include "fieldscope/text.hpp"

namespace fieldscope {

// Anchored glob over one token: '*' matches zero or more non-whitespace
// characters (tokens never contain whitespace). Linear time, no backtracking
// blowup.
bool glob_token_match(std::string_view glob, std::string_view token);

// One compiled term: a sequence of per-token matchers. Matchers without '*'
// compare literally; matchers with '*' glob within the token.
class TermPattern {
 public:
  // Normalizes the term and compiles one matcher per token.
  // Throws EmptyTerm when normalization yields no tokens.
  static TermPattern compile(std::string_view term);

  // True iff some contiguous token window matches matcher-by-matcher.
  bool matches(const NormalizedText& text) const;

  // Windows [i, i+size) that match; used for feature counts and coverage.
  void find_windows(const NormalizedText& text, std::vector<std::size_t>& starts) const;

  std::size_t size() const { return matchers_.size(); }
  const std::string& source() const { return source_; }
  bool has_wildcard() const;

  bool operator==(const TermPattern& other) const { return matchers_ == other.matchers_; }

 private:
  struct Matcher {
    std::string glob;
    bool wildcard = false;
    bool operator==(const Matcher&) const = default;
  };
  bool match_at(const NormalizedText& text, std::size_t start) const;

  std::vector<Matcher> matchers_;
  std::string source_;
};

// Lexicon file: one term or pattern per line, '#' starts a comment, blank
// lines ignored. The repo ships lexicons/cset_keywords_2019.txt (100 entries).
std::vector<TermPattern> load_lexicon(std::istream& in);
std::vector<TermPattern> load_lexicon_file(const std::string& path);

struct KeywordResult {
  bool relevant = false;
  std::vector<std::size_t> hits;  // indices of every matching pattern, ascending
};

// Relevant iff any pattern matches the normalized title or abstract (OR over
// both fields). Throws NoText when both fields are null.
KeywordResult classify_by_keywords(const PublicationRecord& record,
                                   std::span<const TermPattern> patterns);
KeywordResult classify_by_keywords(const NormalizedText& title,
                                   const NormalizedText& abstract,
                                   std::span<const TermPattern> patterns);

}  // namespace fieldscope
