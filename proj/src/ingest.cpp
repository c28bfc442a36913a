#include "fieldscope/ingest.hpp"

#include <cctype>
#include <cmath>
#include <istream>
#include <ostream>

#include "fieldscope/error.hpp"

namespace fieldscope {

namespace {

using nlohmann::json;

std::optional<std::string> opt_string(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw std::runtime_error(std::string("field '") + key + "' is not a string");
  return it->get<std::string>();
}

// arXiv identifier prefixes encode the submission year: new-style
// "YYMM.NNNNN" means 20YY; old-style "archive/YYMMnnn" means 19YY for
// YY >= 91, else 20YY.
std::optional<int> year_from_arxiv_id(const std::string& id) {
  auto two_digits = [](char a, char b) { return (a - '0') * 10 + (b - '0'); };
  const std::size_t dot = id.find('.');
  if (dot == 4 && id.size() >= 9 && std::isdigit(static_cast<unsigned char>(id[0])) &&
      std::isdigit(static_cast<unsigned char>(id[1])) &&
      std::isdigit(static_cast<unsigned char>(id[2])) &&
      std::isdigit(static_cast<unsigned char>(id[3])))
    return 2000 + two_digits(id[0], id[1]);
  const std::size_t slash = id.find('/');
  if (slash != std::string::npos && id.size() >= slash + 3 &&
      std::isdigit(static_cast<unsigned char>(id[slash + 1])) &&
      std::isdigit(static_cast<unsigned char>(id[slash + 2]))) {
    const int yy = two_digits(id[slash + 1], id[slash + 2]);
    return yy >= 91 ? 1900 + yy : 2000 + yy;
  }
  return std::nullopt;
}

std::optional<int> leading_year(const std::string& date) {
  if (date.size() < 4) return std::nullopt;
  int y = 0;
  for (int i = 0; i < 4; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(date[i]))) return std::nullopt;
    y = y * 10 + (date[i] - '0');
  }
  return y;
}

// Explicit year wins; then a date-like field; then the arXiv id prefix.
std::optional<int> extract_year(const json& obj, const std::string& id) {
  auto it = obj.find("year");
  if (it != obj.end() && !it->is_null()) {
    if (it->is_number_integer()) return it->get<int>();
    if (it->is_string()) {
      if (auto y = leading_year(it->get<std::string>())) return y;
    }
    throw std::runtime_error("field 'year' is not an integer");
  }
  for (const char* key : {"date", "update_date", "created"}) {
    auto d = obj.find(key);
    if (d != obj.end() && d->is_string())
      if (auto y = leading_year(d->get<std::string>())) return y;
  }
  return year_from_arxiv_id(id);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

// "authors" is either an array of names or one string with " and " separators
// (the raw arXiv convention).
std::vector<std::string> extract_authors(const json& obj) {
  std::vector<std::string> out;
  auto it = obj.find("authors");
  if (it == obj.end() || it->is_null()) return out;
  if (it->is_array()) {
    for (const auto& a : *it) {
      if (!a.is_string()) throw std::runtime_error("authors entries must be strings");
      out.push_back(a.get<std::string>());
    }
    return out;
  }
  if (!it->is_string()) throw std::runtime_error("field 'authors' is not a string or array");
  const std::string s = it->get<std::string>();
  std::size_t start = 0;
  while (true) {
    const std::size_t sep = s.find(" and ", start);
    if (sep == std::string::npos) break;
    if (sep > start) out.push_back(s.substr(start, sep - start));
    start = sep + 5;
  }
  if (start < s.size()) out.push_back(s.substr(start));
  return out;
}

void parse_common(const json& obj, PublicationRecord& r) {
  auto id = opt_string(obj, "id");
  if (!id || id->empty()) throw std::runtime_error("missing or empty 'id'");
  r.id = *id;
  r.title = opt_string(obj, "title");
  r.abstract = opt_string(obj, "abstract");
  r.year = extract_year(obj, r.id);
  r.authors = extract_authors(obj);
  r.doi = opt_string(obj, "doi");
  r.language = opt_string(obj, "language");
  if (auto it = obj.find("citations"); it != obj.end() && !it->is_null()) {
    if (!it->is_array()) throw std::runtime_error("field 'citations' is not an array");
    std::set<std::string> ids;
    for (const auto& c : *it) ids.insert(c.get<std::string>());
    r.citation_ids = std::move(ids);
  }
  if (auto it = obj.find("field_scores"); it != obj.end() && !it->is_null()) {
    if (!it->is_object()) throw std::runtime_error("field 'field_scores' is not an object");
    for (const auto& [name, score] : it->items()) {
      if (!score.is_number()) throw std::runtime_error("field score for '" + name + "' is not a number");
      r.field_scores[name] = score.get<double>();
    }
  }
  if (auto src = opt_string(obj, "source")) r.source = source_from_name(*src);
}

// categories: space-separated string or array; first entry is the primary.
void parse_categories(const json& obj, PublicationRecord& r) {
  auto it = obj.find("categories");
  if (it == obj.end() || it->is_null()) throw std::runtime_error("missing 'categories'");
  std::vector<std::string> codes;
  if (it->is_string()) {
    codes = split_ws(it->get<std::string>());
  } else if (it->is_array()) {
    for (const auto& c : *it) codes.push_back(c.get<std::string>());
  } else {
    throw std::runtime_error("field 'categories' is not a string or array");
  }
  if (codes.empty()) throw std::runtime_error("empty 'categories'");
  r.primary_subject = codes.front();
  r.subjects.insert(codes.begin(), codes.end());
}

template <class ParseLine>
void for_each_line(std::istream& in, ParseMode mode, IngestStats* stats,
                   const ParseLine& parse_line) {
  IngestStats local;
  IngestStats& st = stats ? *stats : local;
  std::string line;
  while (std::getline(in, line)) {
    ++st.lines;
    if (line.empty()) continue;
    try {
      parse_line(line);
      ++st.records;
    } catch (const std::exception& e) {
      if (mode == ParseMode::abort) throw ParseError(st.lines, e.what());
      ++st.skipped;
    }
  }
}

}  // namespace

void for_each_labeled(std::istream& in, ParseMode mode, const RecordSink& sink,
                      IngestStats* stats) {
  for_each_line(in, mode, stats, [&](const std::string& line) {
    const json obj = json::parse(line);
    PublicationRecord r;
    r.source = Source::arxiv;
    parse_common(obj, r);
    parse_categories(obj, r);
    sink(std::move(r));
  });
}

std::vector<PublicationRecord> read_labeled_corpus(std::istream& in, ParseMode mode,
                                                   IngestStats* stats) {
  std::vector<PublicationRecord> out;
  for_each_labeled(in, mode, [&](PublicationRecord&& r) { out.push_back(std::move(r)); },
                   stats);
  return out;
}

void for_each_unlabeled(std::istream& in, Source default_source, ParseMode mode,
                        const RecordSink& sink, IngestStats* stats) {
  for_each_line(in, mode, stats, [&](const std::string& line) {
    const json obj = json::parse(line);
    PublicationRecord r;
    r.source = default_source;
    parse_common(obj, r);
    sink(std::move(r));
  });
}

std::vector<PublicationRecord> read_unlabeled_corpus(std::istream& in, Source default_source,
                                                     ParseMode mode, IngestStats* stats) {
  std::vector<PublicationRecord> out;
  for_each_unlabeled(in, default_source, mode,
                     [&](PublicationRecord&& r) { out.push_back(std::move(r)); }, stats);
  return out;
}

EmbeddingTable read_embeddings(std::istream& in) {
  EmbeddingTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(line_no, e.what());
    }
    if (obj.contains("manifest") && !obj.contains("id")) {
      table.manifest = obj["manifest"];
      continue;
    }
    if (!obj.contains("id") || !obj["id"].is_string() || !obj.contains("vector") ||
        !obj["vector"].is_array())
      throw ParseError(line_no, "expected {\"id\": string, \"vector\": [...]}");
    const std::string id = obj["id"].get<std::string>();
    std::vector<double> vec;
    vec.reserve(obj["vector"].size());
    for (const auto& v : obj["vector"]) {
      if (!v.is_number()) throw NonFiniteValue(id);
      const double x = v.get<double>();
      if (!std::isfinite(x)) throw NonFiniteValue(id);
      vec.push_back(x);
    }
    if (table.rows.empty()) {
      table.dim = vec.size();
    } else if (vec.size() != table.dim) {
      throw DimensionMismatch(id, table.dim, vec.size());
    }
    if (!table.rows.emplace(id, std::move(vec)).second) throw DuplicateId(id);
  }
  return table;
}

void write_record(std::ostream& out, const PublicationRecord& record) {
  json obj;
  obj["id"] = record.id;
  obj["source"] = std::string(source_name(record.source));
  if (record.title) obj["title"] = *record.title;
  if (record.abstract) obj["abstract"] = *record.abstract;
  if (record.year) obj["year"] = *record.year;
  if (!record.authors.empty()) obj["authors"] = record.authors;
  if (record.doi) obj["doi"] = *record.doi;
  if (record.citation_ids) obj["citations"] = *record.citation_ids;
  if (record.language) obj["language"] = *record.language;
  if (!record.subjects.empty()) {
    std::vector<std::string> codes;
    if (record.primary_subject) codes.push_back(*record.primary_subject);
    for (const auto& s : record.subjects)
      if (!record.primary_subject || s != *record.primary_subject) codes.push_back(s);
    obj["categories"] = codes;
  }
  if (!record.field_scores.empty()) obj["field_scores"] = record.field_scores;
  out << obj.dump() << '\n';
}

void write_corpus(std::ostream& out, std::span<const PublicationRecord> records) {
  for (const auto& r : records) write_record(out, r);
}

std::vector<SubjectCountRow> subject_counts(std::span<const PublicationRecord> records,
                                            const SubjectConfig& config) {
  std::map<std::string, SubjectCountRow> rows;
  for (const auto& code : config.relevant_subjects()) rows[code].subject = code;
  SubjectCountRow any;
  any.subject = "any";
  for (const auto& r : records) {
    bool any_hit = false;
    std::set<std::string> seen;
    for (const auto& code : r.subjects) {
      const std::string& c = config.canonical(code);
      if (!config.is_relevant_subject(c) || !seen.insert(c).second) continue;
      rows[c].with_crossposts += 1;
      any_hit = true;
    }
    if (any_hit) any.with_crossposts += 1;
    if (r.primary_subject) {
      const std::string& c = config.canonical(*r.primary_subject);
      if (config.is_relevant_subject(c)) {
        rows[c].primary += 1;
        any.primary += 1;
      }
    }
  }
  std::vector<SubjectCountRow> out;
  for (auto& [_, row] : rows) out.push_back(std::move(row));
  out.push_back(std::move(any));
  return out;
}

}  // namespace fieldscope
