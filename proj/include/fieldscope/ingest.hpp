#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "fieldscope/record.hpp"

namespace fieldscope {

// Externally supplied document embeddings (the encoder itself is out of
// scope). Every row has exactly `dim` finite entries; ids are unique.
struct EmbeddingTable {
  std::size_t dim = 0;
  std::unordered_map<std::string, std::vector<double>> rows;
  // Optional supplier metadata, e.g. which text was embedded
  // ({"manifest": {"text": "title+abstract", ...}} as the first line).
  nlohmann::json manifest;
};

enum class ParseMode { abort, skip };

struct IngestStats {
  std::size_t lines = 0;
  std::size_t records = 0;
  std::size_t skipped = 0;
};

using RecordSink = std::function<void(PublicationRecord&&)>;

// Labeled (arXiv-style) corpus: JSONL with id, title, abstract, categories,
// year (or a date to derive it from), authors. Subject codes are split from
// `categories`; the first-listed subject is retained as the primary (used
// only for count reporting). In skip mode malformed lines increment
// stats.skipped; in abort mode they raise ParseError with the line number.
void for_each_labeled(std::istream& in, ParseMode mode, const RecordSink& sink,
                      IngestStats* stats = nullptr);
std::vector<PublicationRecord> read_labeled_corpus(std::istream& in, ParseMode mode,
                                                   IngestStats* stats = nullptr);

// Unlabeled corpus export: JSONL with id, title, abstract, year, authors and
// optional doi, citations, language, field_scores. Records carry
// `default_source` unless the line itself names a source; subjects stay empty.
void for_each_unlabeled(std::istream& in, Source default_source, ParseMode mode,
                        const RecordSink& sink, IngestStats* stats = nullptr);
std::vector<PublicationRecord> read_unlabeled_corpus(std::istream& in, Source default_source,
                                                     ParseMode mode,
                                                     IngestStats* stats = nullptr);

// Embeddings: JSONL of {"id": string, "vector": [number, ...]}; dim inferred
// from the first row. Throws DimensionMismatch, DuplicateId, NonFiniteValue.
EmbeddingTable read_embeddings(std::istream& in);

// JSONL writer matching the reader schema; round-trips every field.
void write_record(std::ostream& out, const PublicationRecord& record);
void write_corpus(std::ostream& out, std::span<const PublicationRecord> records);

// Per-subject paper counts (by primary subject and including cross-posts) for
// the configured relevant subjects, plus the any-of row.
struct SubjectCountRow {
  std::string subject;
  std::size_t primary = 0;
  std::size_t with_crossposts = 0;
};
std::vector<SubjectCountRow> subject_counts(std::span<const PublicationRecord> records,
                                            const SubjectConfig& config);

}  // namespace fieldscope
