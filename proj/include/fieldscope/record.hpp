#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fieldscope/text.hpp"

namespace fieldscope {

enum class Source { arxiv, wos, dimensions, mag, other };

std::string_view source_name(Source s);
Source source_from_name(std::string_view name);  // throws InputError on unknown names

// One publication's metadata. Nullable fields are optional<>; `subjects` is
// non-empty only for labeled (arXiv-style) records.
struct PublicationRecord {
  std::string id;
  Source source = Source::other;
  std::optional<std::string> title;
  std::optional<std::string> abstract;
  std::optional<int> year;
  std::vector<std::string> authors;  // ordered raw author names
  std::optional<std::string> doi;
  std::optional<std::set<std::string>> citation_ids;
  std::optional<std::string> language;  // declared ISO-639-1 code
  std::set<std::string> subjects;
  std::optional<std::string> primary_subject;  // first-listed; count reporting only
  std::map<std::string, double> field_scores;

  bool operator==(const PublicationRecord&) const = default;
};

// Which subject codes count as relevant, with alias pairs treated as one
// subject (membership of either code implies the merged subject).
class SubjectConfig {
 public:
  SubjectConfig(std::set<std::string> relevant_subjects,
                std::vector<std::pair<std::string, std::string>> alias_pairs);

  // The paper's default: cs.AI, cs.CL, cs.CV, cs.LG/stat.ML, cs.MA, cs.RO.
  static SubjectConfig default_ai();

  // JSON schema: {"relevant_subjects": [...], "alias_pairs": [[a, b], ...]}.
  static SubjectConfig load(std::istream& in);
  static SubjectConfig load_file(const std::string& path);

  // Alias-merged representative of a code (identity for un-aliased codes).
  const std::string& canonical(const std::string& code) const;
  bool is_relevant_subject(const std::string& code) const;

  const std::set<std::string>& relevant_subjects() const { return relevant_; }
  const std::vector<std::pair<std::string, std::string>>& alias_pairs() const {
    return aliases_;
  }

  // Canonical codes of the relevant subjects a record carries, sorted.
  std::vector<std::string> relevant_flags(const std::set<std::string>& subjects) const;

 private:
  std::set<std::string> relevant_;  // canonicalized
  std::vector<std::pair<std::string, std::string>> aliases_;
  std::map<std::string, std::string> canon_;  // code -> representative
};

// True iff the record's alias-merged subjects intersect the configured
// relevant set. Cross-posted subjects count equally with primary ones.
// Throws MissingSubjects for records with no subjects.
bool derive_relevance_label(const PublicationRecord& record, const SubjectConfig& config);

enum class RejectReason { none, no_title, no_abstract, too_old, language };

std::string_view reject_reason_name(RejectReason r);

struct AdmitResult {
  bool admitted = false;
  RejectReason reason = RejectReason::none;
};

// Pluggable language gate; the paper used an off-the-shelf detector (CLD2),
// which stays external. The artifact ships the two gates below.
using LanguageGate = std::function<bool(const PublicationRecord&)>;

LanguageGate pass_through_gate();
// Accepts only records whose declared language is in the allowlist.
LanguageGate declared_language_gate(std::set<std::string> allowed);

// Admission filter: non-null title, non-null abstract, year >= min_year (a
// missing year fails the year test), and the language gate accepts. The first
// failing condition, in that order, is reported.
AdmitResult admit_record(const PublicationRecord& record, int min_year,
                         const LanguageGate& gate);

}  // namespace fieldscope
