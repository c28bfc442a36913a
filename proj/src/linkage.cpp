#include "fieldscope/linkage.hpp"

#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

#include <json.hpp>

#include "fieldscope/error.hpp"
#include "fieldscope/hash.hpp"
#include "fieldscope/parallel.hpp"

namespace fieldscope {

int LinkageKeySet::non_null_count() const {
  int n = 0;
  for (const auto& k : {title, abstract, year, surnames, doi, citations})
    n += k.has_value();
  return n;
}

std::vector<std::string> extract_surnames(std::span<const std::string> authors) {
  std::vector<std::string> out;
  for (const auto& name : authors) {
    const std::size_t comma = name.find(',');
    std::string surname;
    if (comma != std::string::npos) {
      surname = normalize_text(name.substr(0, comma)).joined();
    } else {
      NormalizedText tokens = normalize_text(name);
      if (!tokens.empty()) surname = tokens.tokens.back();
    }
    if (!surname.empty()) out.push_back(std::move(surname));
  }
  return out;
}

namespace {

std::optional<std::uint64_t> text_key(const std::optional<std::string>& text) {
  if (!text) return std::nullopt;
  NormalizedText tokens = normalize_text(*text);
  if (tokens.empty()) return std::nullopt;
  return fnv1a64(tokens.joined());
}

std::optional<std::uint64_t> joined_key(std::vector<std::string> parts) {
  if (parts.empty()) return std::nullopt;
  std::sort(parts.begin(), parts.end());
  std::uint64_t h = kFnvOffset;
  for (const auto& p : parts) {
    h = fnv1a64(p, h);
    h = fnv1a64("\x1f", h);
  }
  return h;
}

}  // namespace

LinkageKeySet derive_keys(const PublicationRecord& record) {
  LinkageKeySet keys;
  keys.title = text_key(record.title);
  keys.abstract = text_key(record.abstract);
  if (record.year) keys.year = fnv1a64(static_cast<std::uint64_t>(*record.year));
  keys.surnames = joined_key(extract_surnames(record.authors));
  if (record.doi) {
    std::string doi;
    for (char c : *record.doi)
      if (!std::isspace(static_cast<unsigned char>(c)))
        doi += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (!doi.empty()) keys.doi = fnv1a64(doi);
  }
  if (record.citation_ids && !record.citation_ids->empty())
    keys.citations = joined_key(
        {record.citation_ids->begin(), record.citation_ids->end()});
  return keys;
}

bool pair_matches(const LinkageKeySet& a, const LinkageKeySet& b, bool same_source) {
  int shared = 0;
  auto tally = [&shared](const std::optional<std::uint64_t>& x,
                         const std::optional<std::uint64_t>& y) {
    if (x && y && *x == *y) ++shared;
  };
  tally(a.title, b.title);
  tally(a.abstract, b.abstract);
  tally(a.year, b.year);
  tally(a.surnames, b.surnames);
  tally(a.doi, b.doi);
  if (same_source) tally(a.citations, b.citations);
  return shared >= 3;
}

namespace {

// One posting of the inverted index: which record has which key value.
// Year keys are excluded: a matching pair shares >= 3 fields, at most one of
// which is the year, so >= 2 of these postings collide anyway, and year
// blocks would be quadratically large.
struct KeyEntry {
  std::uint64_t hash;
  std::uint32_t index;
  std::uint8_t type;

  bool operator<(const KeyEntry& other) const {
    if (type != other.type) return type < other.type;
    if (hash != other.hash) return hash < other.hash;
    return index < other.index;
  }
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<std::uint32_t>(i);
  }
  std::uint32_t find(std::uint32_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];  // path halving
      i = parent_[i];
    }
    return i;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::uint32_t> parent_;
};

std::filesystem::path spill_directory(const ClusterOptions& options) {
  if (!options.spill_dir.empty()) return options.spill_dir;
  if (const char* dir = std::getenv("FIELDSCOPE_TMPDIR")) return dir;
  if (const char* dir = std::getenv("TMPDIR")) return dir;
  return "/tmp";
}

// Collects key postings, spilling sorted runs to disk past the memory
// budget, then streams groups of equal (type, hash) in sorted order.
class KeyIndex {
 public:
  KeyIndex(std::size_t budget_bytes, std::filesystem::path dir)
      : capacity_(std::max<std::size_t>(1024, budget_bytes / sizeof(KeyEntry))),
        dir_(std::move(dir)) {}

  ~KeyIndex() {
    for (const auto& path : runs_) {
      std::error_code ec;
      std::filesystem::remove(path, ec);
    }
  }

  void add(std::uint8_t type, std::uint64_t hash, std::uint32_t index) {
    entries_.push_back({hash, index, type});
    if (entries_.size() >= capacity_) flush_run();
  }

  // Calls fn(span of record indices) for every key shared by >= 2 records.
  template <class Fn>
  void for_each_group(Fn&& fn) {
    std::sort(entries_.begin(), entries_.end());
    if (runs_.empty()) {
      emit_groups(entries_, fn);
      return;
    }
    flush_run();
    merge_runs(fn);
  }

 private:
  template <class Fn>
  static void emit_groups(const std::vector<KeyEntry>& sorted, Fn&& fn) {
    std::vector<std::uint32_t> group;
    std::size_t i = 0;
    while (i < sorted.size()) {
      std::size_t j = i + 1;
      while (j < sorted.size() && sorted[j].type == sorted[i].type &&
             sorted[j].hash == sorted[i].hash)
        ++j;
      if (j - i >= 2) {
        group.assign(j - i, 0);
        for (std::size_t k = i; k < j; ++k) group[k - i] = sorted[k].index;
        fn(std::span<const std::uint32_t>(group));
      }
      i = j;
    }
  }

  void flush_run() {
    if (entries_.empty()) return;
    std::sort(entries_.begin(), entries_.end());
    std::filesystem::path path =
        dir_ / ("fieldscope-spill-" + std::to_string(::getpid()) + "-" +
                std::to_string(runs_.size()) + ".bin");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot create spill file '" + path.string() + "'");
    out.write(reinterpret_cast<const char*>(entries_.data()),
              static_cast<std::streamsize>(entries_.size() * sizeof(KeyEntry)));
    runs_.push_back(path);
    entries_.clear();
  }

  template <class Fn>
  void merge_runs(Fn&& fn) {
    struct Cursor {
      std::ifstream in;
      KeyEntry current;
      bool next() {
        return static_cast<bool>(
            in.read(reinterpret_cast<char*>(&current), sizeof(KeyEntry)));
      }
    };
    std::vector<Cursor> cursors(runs_.size());
    for (std::size_t r = 0; r < runs_.size(); ++r) {
      cursors[r].in.open(runs_[r], std::ios::binary);
      if (!cursors[r].in || !cursors[r].next())
        throw InputError("cannot read spill run '" + runs_[r].string() + "'");
    }
    auto heap_cmp = [&](std::size_t a, std::size_t b) {
      return cursors[b].current < cursors[a].current;  // min-heap
    };
    std::vector<std::size_t> heap;
    for (std::size_t r = 0; r < cursors.size(); ++r) heap.push_back(r);
    std::make_heap(heap.begin(), heap.end(), heap_cmp);

    std::vector<std::uint32_t> group;
    bool have_key = false;
    std::uint8_t key_type = 0;
    std::uint64_t key_hash = 0;
    auto close_group = [&] {
      if (group.size() >= 2) fn(std::span<const std::uint32_t>(group));
      group.clear();
    };
    while (!heap.empty()) {
      std::pop_heap(heap.begin(), heap.end(), heap_cmp);
      const std::size_t r = heap.back();
      const KeyEntry entry = cursors[r].current;
      if (!have_key || entry.type != key_type || entry.hash != key_hash) {
        close_group();
        have_key = true;
        key_type = entry.type;
        key_hash = entry.hash;
      }
      group.push_back(entry.index);
      if (cursors[r].next()) {
        std::push_heap(heap.begin(), heap.end(), heap_cmp);
      } else {
        heap.pop_back();
      }
    }
    close_group();
  }

  std::size_t capacity_;
  std::filesystem::path dir_;
  std::vector<KeyEntry> entries_;
  std::vector<std::filesystem::path> runs_;
};

int source_rank(Source s, const std::vector<Source>& priority) {
  for (std::size_t i = 0; i < priority.size(); ++i)
    if (priority[i] == s) return static_cast<int>(i);
  return static_cast<int>(priority.size());
}

}  // namespace

std::vector<LinkageCluster> cluster_keyed(std::span<const KeyedRecord> records,
                                          const ClusterOptions& options) {
  const std::size_t n = records.size();
  KeyIndex index(options.memory_budget_bytes, spill_directory(options));
  for (std::size_t i = 0; i < n; ++i) {
    const LinkageKeySet& k = records[i].keys;
    const std::uint32_t idx = static_cast<std::uint32_t>(i);
    if (k.title) index.add(0, *k.title, idx);
    if (k.abstract) index.add(1, *k.abstract, idx);
    if (k.surnames) index.add(2, *k.surnames, idx);
    if (k.doi) index.add(3, *k.doi, idx);
    if (k.citations) index.add(4, *k.citations, idx);
  }

  UnionFind uf(n);
  index.for_each_group([&](std::span<const std::uint32_t> group) {
    for (std::size_t a = 0; a < group.size(); ++a) {
      for (std::size_t b = a + 1; b < group.size(); ++b) {
        const std::uint32_t i = group[a], j = group[b];
        if (uf.find(i) == uf.find(j)) continue;
        if (pair_matches(records[i].keys, records[j].keys,
                         records[i].source == records[j].source))
          uf.unite(i, j);
      }
    }
  });

  std::map<std::uint32_t, std::vector<std::uint32_t>> components;
  for (std::size_t i = 0; i < n; ++i)
    components[uf.find(static_cast<std::uint32_t>(i))].push_back(
        static_cast<std::uint32_t>(i));

  std::vector<LinkageCluster> clusters;
  clusters.reserve(components.size());
  for (auto& [_, members] : components) {
    const std::uint32_t canonical = *std::min_element(
        members.begin(), members.end(), [&](std::uint32_t a, std::uint32_t b) {
          const int ra = source_rank(records[a].source, options.source_priority);
          const int rb = source_rank(records[b].source, options.source_priority);
          if (ra != rb) return ra < rb;
          const int ca = records[a].keys.non_null_count();
          const int cb = records[b].keys.non_null_count();
          if (ca != cb) return ca > cb;
          return records[a].id < records[b].id;
        });
    LinkageCluster cluster;
    cluster.canonical_id = records[canonical].id;
    std::sort(members.begin(), members.end(), [&](std::uint32_t a, std::uint32_t b) {
      return records[a].id < records[b].id;
    });
    for (std::uint32_t m : members) {
      cluster.member_ids.push_back(records[m].id);
      cluster.sources.push_back(records[m].source);
    }
    clusters.push_back(std::move(cluster));
  }
  std::sort(clusters.begin(), clusters.end(),
            [](const LinkageCluster& a, const LinkageCluster& b) {
              return a.canonical_id < b.canonical_id;
            });
  return clusters;
}

std::vector<LinkageCluster> cluster(std::span<const PublicationRecord> records,
                                    const ClusterOptions& options) {
  std::vector<KeyedRecord> keyed(records.size());
  parallel_chunks(records.size(), options.n_threads,
                  [&](std::size_t begin, std::size_t end) {
                    for (std::size_t i = begin; i < end; ++i)
                      keyed[i] = {records[i].id, records[i].source,
                                  derive_keys(records[i])};
                  });
  return cluster_keyed(keyed, options);
}

void write_clusters_jsonl(std::ostream& out, std::span<const LinkageCluster> clusters) {
  for (const auto& c : clusters) {
    nlohmann::json obj;
    obj["canonical_id"] = c.canonical_id;
    obj["member_ids"] = c.member_ids;
    std::vector<std::string> sources;
    sources.reserve(c.sources.size());
    for (Source s : c.sources) sources.emplace_back(source_name(s));
    obj["sources"] = sources;
    out << obj.dump() << '\n';
  }
}

void write_crosswalk_csv(std::ostream& out, std::span<const LinkageCluster> clusters) {
  out << "member_id,canonical_id\n";
  for (const auto& c : clusters)
    for (const auto& m : c.member_ids) out << m << ',' << c.canonical_id << '\n';
}

}  // namespace fieldscope
