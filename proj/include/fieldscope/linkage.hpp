#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fieldscope/record.hpp"

namespace fieldscope {

// Equality keys over normalized field values. A key is null iff the
// underlying field is null or empty after normalization; citation keys are
// comparable only within one source dataset.
struct LinkageKeySet {
  std::optional<std::uint64_t> title;
  std::optional<std::uint64_t> abstract;
  std::optional<std::uint64_t> year;
  std::optional<std::uint64_t> surnames;
  std::optional<std::uint64_t> doi;
  std::optional<std::uint64_t> citations;

  int non_null_count() const;

  bool operator==(const LinkageKeySet&) const = default;
};

// Normalized surname per author, one element each, order-insensitive
// downstream. Names with a comma take the part before it ("Doe, Jane" ->
// "doe"); otherwise the last whitespace token ("Jane Doe" -> "doe").
std::vector<std::string> extract_surnames(std::span<const std::string> authors);

LinkageKeySet derive_keys(const PublicationRecord& record);

// The pairwise rule: two records represent the same publication iff they
// share at least three non-null equal values across title, abstract, year,
// surnames, DOI, and (within one dataset only) citations.
bool pair_matches(const LinkageKeySet& a, const LinkageKeySet& b, bool same_source);

struct LinkageCluster {
  std::string canonical_id;
  std::vector<std::string> member_ids;  // sorted
  std::vector<Source> sources;          // parallel to member_ids
};

struct ClusterOptions {
  // Canonical member selection: earliest source in this order wins, then the
  // most non-null linkage fields, then the smallest id.
  std::vector<Source> source_priority{Source::wos, Source::dimensions, Source::mag};
  // Candidate-index budget; beyond it, sorted runs spill to disk and merge.
  std::size_t memory_budget_bytes = 512ull << 20;
  std::string spill_dir;  // default: $FIELDSCOPE_TMPDIR, $TMPDIR, or /tmp
  unsigned n_threads = 1;
};

struct KeyedRecord {
  std::string id;
  Source source = Source::other;
  LinkageKeySet keys;
};

// Transitive clustering of the pairwise rule. Candidates come from an
// inverted index over the non-year keys: a matching pair shares at least
// three fields, hence at least two non-year keys, so every matching pair is
// generated. Matched pairs merge through union-find; output clusters are
// sorted by canonical id and independent of input order.
std::vector<LinkageCluster> cluster(std::span<const PublicationRecord> records,
                                    const ClusterOptions& options = {});
std::vector<LinkageCluster> cluster_keyed(std::span<const KeyedRecord> records,
                                          const ClusterOptions& options = {});

// JSONL of {"canonical_id", "member_ids", "sources"}.
void write_clusters_jsonl(std::ostream& out, std::span<const LinkageCluster> clusters);
// CSV crosswalk "member_id,canonical_id" for downstream joins.
void write_crosswalk_csv(std::ostream& out, std::span<const LinkageCluster> clusters);

}  // namespace fieldscope
