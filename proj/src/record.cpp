#include "fieldscope/record.hpp"

#include <fstream>
#include <json.hpp>

#include "fieldscope/error.hpp"

namespace fieldscope {

std::string_view source_name(Source s) {
  switch (s) {
    case Source::arxiv: return "arxiv";
    case Source::wos: return "wos";
    case Source::dimensions: return "dimensions";
    case Source::mag: return "mag";
    case Source::other: return "other";
  }
  return "other";
}

Source source_from_name(std::string_view name) {
  if (name == "arxiv") return Source::arxiv;
  if (name == "wos") return Source::wos;
  if (name == "dimensions") return Source::dimensions;
  if (name == "mag") return Source::mag;
  if (name == "other") return Source::other;
  throw InputError("unknown source '" + std::string(name) + "'");
}

SubjectConfig::SubjectConfig(std::set<std::string> relevant_subjects,
                             std::vector<std::pair<std::string, std::string>> alias_pairs)
    : aliases_(std::move(alias_pairs)) {
  if (relevant_subjects.empty())
    throw InputError("subject config needs at least one relevant subject");
  // Union-find over alias pairs; representative = smallest code in the group.
  std::map<std::string, std::string> parent;
  auto find = [&](std::string code) {
    while (true) {
      auto it = parent.find(code);
      if (it == parent.end() || it->second == code) return code;
      code = it->second;
    }
  };
  for (const auto& [a, b] : aliases_) {
    std::string ra = find(a), rb = find(b);
    if (ra != rb) {
      if (rb < ra) std::swap(ra, rb);
      parent[rb] = ra;
      parent.try_emplace(ra, ra);
    }
  }
  for (const auto& [code, _] : parent) canon_[code] = find(code);
  for (const auto& code : relevant_subjects) relevant_.insert(canonical(code));
}

SubjectConfig SubjectConfig::default_ai() {
  return SubjectConfig({"cs.AI", "cs.CL", "cs.CV", "cs.LG", "cs.MA", "cs.RO"},
                       {{"cs.LG", "stat.ML"}});
}

SubjectConfig SubjectConfig::load(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("subject config: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("relevant_subjects"))
    throw InputError("subject config: missing 'relevant_subjects'");
  std::set<std::string> relevant;
  for (const auto& v : doc["relevant_subjects"]) relevant.insert(v.get<std::string>());
  std::vector<std::pair<std::string, std::string>> aliases;
  if (doc.contains("alias_pairs")) {
    for (const auto& pair : doc["alias_pairs"]) {
      if (!pair.is_array() || pair.size() != 2)
        throw InputError("subject config: alias_pairs entries must be [a, b]");
      aliases.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
    }
  }
  return SubjectConfig(std::move(relevant), std::move(aliases));
}

SubjectConfig SubjectConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open subject config '" + path + "'");
  return load(in);
}

const std::string& SubjectConfig::canonical(const std::string& code) const {
  auto it = canon_.find(code);
  return it == canon_.end() ? code : it->second;
}

bool SubjectConfig::is_relevant_subject(const std::string& code) const {
  return relevant_.count(canonical(code)) > 0;
}

std::vector<std::string> SubjectConfig::relevant_flags(
    const std::set<std::string>& subjects) const {
  std::set<std::string> flags;
  for (const auto& code : subjects) {
    const std::string& c = canonical(code);
    if (relevant_.count(c)) flags.insert(c);
  }
  return {flags.begin(), flags.end()};
}

bool derive_relevance_label(const PublicationRecord& record, const SubjectConfig& config) {
  if (record.subjects.empty()) throw MissingSubjects(record.id);
  for (const auto& code : record.subjects)
    if (config.is_relevant_subject(code)) return true;
  return false;
}

std::string_view reject_reason_name(RejectReason r) {
  switch (r) {
    case RejectReason::none: return "none";
    case RejectReason::no_title: return "no_title";
    case RejectReason::no_abstract: return "no_abstract";
    case RejectReason::too_old: return "too_old";
    case RejectReason::language: return "language";
  }
  return "none";
}

LanguageGate pass_through_gate() {
  return [](const PublicationRecord&) { return true; };
}

LanguageGate declared_language_gate(std::set<std::string> allowed) {
  return [allowed = std::move(allowed)](const PublicationRecord& r) {
    return r.language.has_value() && allowed.count(*r.language) > 0;
  };
}

AdmitResult admit_record(const PublicationRecord& record, int min_year,
                         const LanguageGate& gate) {
  if (!record.title) return {false, RejectReason::no_title};
  if (!record.abstract) return {false, RejectReason::no_abstract};
  if (!record.year || *record.year < min_year) return {false, RejectReason::too_old};
  if (!gate(record)) return {false, RejectReason::language};
  return {true, RejectReason::none};
}

}  // namespace fieldscope
