#include "fieldscope/features.hpp"

#include <fstream>
#include <set>

#include "fieldscope/error.hpp"

namespace fieldscope {

namespace {

void add_entry(std::vector<ScoredLexicon::Entry>& entries, std::set<std::string>& seen,
               const std::string& term, int score, std::size_t line_no) {
  if (score < 1 || score > 3)
    throw ParseError(line_no, "score must be 1, 2 or 3, got " + std::to_string(score));
  TermPattern pattern = TermPattern::compile(term);
  std::string key = normalize_text(term).joined();
  if (!seen.insert(key).second)
    throw ParseError(line_no, "duplicate term after normalization: '" + key + "'");
  entries.push_back({std::move(pattern), score});
}

}  // namespace

ScoredLexicon ScoredLexicon::from_terms(
    const std::vector<std::pair<std::string, int>>& terms) {
  ScoredLexicon lex;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  for (const auto& [term, score] : terms)
    add_entry(lex.entries_, seen, term, score, ++line_no);
  return lex;
}

ScoredLexicon ScoredLexicon::load(std::istream& in) {
  ScoredLexicon lex;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (normalize_text(line).empty()) continue;
    const std::size_t tab = line.rfind('\t');
    if (tab == std::string::npos)
      throw ParseError(line_no, "expected term<TAB>score");
    int score = 0;
    try {
      score = std::stoi(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw ParseError(line_no, "score is not an integer");
    }
    add_entry(lex.entries_, seen, line.substr(0, tab), score, line_no);
  }
  return lex;
}

ScoredLexicon ScoredLexicon::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scored lexicon '" + path + "'");
  return load(in);
}

const std::array<std::string, kLexiconFeatureCount>& lexicon_feature_names() {
  static const std::array<std::string, kLexiconFeatureCount> names = [] {
    std::array<std::string, kLexiconFeatureCount> out;
    std::size_t i = 0;
    for (const char* field : {"title", "abstract"}) {
      for (int s = 1; s <= 3; ++s) out[i++] = std::string(field) + "_count_s" + std::to_string(s);
      for (int s = 1; s <= 3; ++s) out[i++] = std::string(field) + "_distinct_s" + std::to_string(s);
      for (int s = 1; s <= 3; ++s) out[i++] = std::string(field) + "_prop_s" + std::to_string(s);
      out[i++] = std::string(field) + "_weighted";
    }
    return out;
  }();
  return names;
}

namespace {

// Ten features for one field. Occurrence counts include overlapping windows;
// coverage is a union of token indices so proportions stay <= 1.
void field_features(const NormalizedText& text, const ScoredLexicon& lexicon,
                    double* out) {
  double count[3] = {0, 0, 0};
  double distinct[3] = {0, 0, 0};
  std::vector<char> covered[3];
  for (auto& c : covered) c.assign(text.size(), 0);

  std::vector<std::size_t> starts;
  for (const auto& entry : lexicon.entries()) {
    entry.pattern.find_windows(text, starts);
    if (starts.empty()) continue;
    const int s = entry.score - 1;
    count[s] += static_cast<double>(starts.size());
    distinct[s] += 1;
    for (std::size_t start : starts)
      for (std::size_t k = 0; k < entry.pattern.size(); ++k) covered[s][start + k] = 1;
  }

  const double n_tokens = static_cast<double>(text.size());
  for (int s = 0; s < 3; ++s) out[s] = count[s];
  for (int s = 0; s < 3; ++s) out[3 + s] = distinct[s];
  for (int s = 0; s < 3; ++s) {
    double cov = 0;
    for (char c : covered[s]) cov += c;
    out[6 + s] = n_tokens == 0 ? 0.0 : cov / n_tokens;
  }
  out[9] = count[0] + 2 * count[1] + 3 * count[2];
}

}  // namespace

FeatureVector extract_features(const PublicationRecord& record,
                               const ScoredLexicon& lexicon) {
  if (!record.title && !record.abstract) throw NoText(record.id);
  FeatureVector fv;
  fv.record_id = record.id;
  fv.values.assign(kLexiconFeatureCount, 0.0);
  const NormalizedText title = normalize_text(record.title.value_or(""));
  const NormalizedText abstract = normalize_text(record.abstract.value_or(""));
  field_features(title, lexicon, fv.values.data());
  field_features(abstract, lexicon, fv.values.data() + 10);
  return fv;
}

}  // namespace fieldscope
