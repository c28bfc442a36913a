#include "fieldscope/keywords.hpp"

#include <fstream>

#include "fieldscope/error.hpp"

namespace fieldscope {

// Iterative two-pointer glob (star-resumption): on mismatch, back up to one
// past the last '*' anchor. Runs in O(|glob| * |token|) worst case, linear in
// practice for the single-star patterns the lexicon uses.
bool glob_token_match(std::string_view glob, std::string_view token) {
  std::size_t g = 0, t = 0;
  std::size_t star = std::string_view::npos, resume = 0;
  while (t < token.size()) {
    if (g < glob.size() && glob[g] == '*') {
      star = g++;
      resume = t;
    } else if (g < glob.size() && glob[g] == token[t]) {
      ++g;
      ++t;
    } else if (star != std::string_view::npos) {
      g = star + 1;
      t = ++resume;
    } else {
      return false;
    }
  }
  while (g < glob.size() && glob[g] == '*') ++g;
  return g == glob.size();
}

TermPattern TermPattern::compile(std::string_view term) {
  TermPattern p;
  p.source_ = std::string(term);
  NormalizedText norm = normalize_text(term);
  if (norm.empty()) throw EmptyTerm(p.source_);
  p.matchers_.reserve(norm.size());
  for (auto& token : norm.tokens) {
    const bool wildcard = token.find('*') != std::string::npos;
    p.matchers_.push_back({std::move(token), wildcard});
  }
  return p;
}

bool TermPattern::has_wildcard() const {
  for (const auto& m : matchers_)
    if (m.wildcard) return true;
  return false;
}

bool TermPattern::match_at(const NormalizedText& text, std::size_t start) const {
  for (std::size_t k = 0; k < matchers_.size(); ++k) {
    const Matcher& m = matchers_[k];
    const std::string& token = text.tokens[start + k];
    if (m.wildcard ? !glob_token_match(m.glob, token) : m.glob != token) return false;
  }
  return true;
}

bool TermPattern::matches(const NormalizedText& text) const {
  if (matchers_.size() > text.size()) return false;
  const std::size_t last = text.size() - matchers_.size();
  for (std::size_t i = 0; i <= last; ++i)
    if (match_at(text, i)) return true;
  return false;
}

void TermPattern::find_windows(const NormalizedText& text,
                               std::vector<std::size_t>& starts) const {
  starts.clear();
  if (matchers_.size() > text.size()) return;
  const std::size_t last = text.size() - matchers_.size();
  for (std::size_t i = 0; i <= last; ++i)
    if (match_at(text, i)) starts.push_back(i);
}

std::vector<TermPattern> load_lexicon(std::istream& in) {
  std::vector<TermPattern> patterns;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    NormalizedText probe = normalize_text(line);
    if (probe.empty()) continue;
    try {
      patterns.push_back(TermPattern::compile(line));
    } catch (const EmptyTerm&) {
      throw ParseError(line_no, "term normalizes to zero tokens");
    }
  }
  return patterns;
}

std::vector<TermPattern> load_lexicon_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open lexicon '" + path + "'");
  return load_lexicon(in);
}

KeywordResult classify_by_keywords(const NormalizedText& title,
                                   const NormalizedText& abstract,
                                   std::span<const TermPattern> patterns) {
  KeywordResult result;
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    if (patterns[i].matches(title) || patterns[i].matches(abstract)) {
      result.relevant = true;
      result.hits.push_back(i);
    }
  }
  return result;
}

KeywordResult classify_by_keywords(const PublicationRecord& record,
                                   std::span<const TermPattern> patterns) {
  if (!record.title && !record.abstract) throw NoText(record.id);
  const NormalizedText title = normalize_text(record.title.value_or(""));
  const NormalizedText abstract = normalize_text(record.abstract.value_or(""));
  return classify_by_keywords(title, abstract, patterns);
}

}  // namespace fieldscope
