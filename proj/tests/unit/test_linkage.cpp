#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "fieldscope/error.hpp"
#include "fieldscope/linkage.hpp"
#include "fieldscope/rng.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace fieldscope;

namespace {

std::vector<std::set<std::string>> as_partition(const std::vector<LinkageCluster>& clusters) {
  std::vector<std::set<std::string>> out;
  for (const auto& c : clusters)
    out.emplace_back(c.member_ids.begin(), c.member_ids.end());
  std::sort(out.begin(), out.end());
  return out;
}

PublicationRecord make_record(std::string id, Source source) {
  PublicationRecord r;
  r.id = std::move(id);
  r.source = source;
  return r;
}

}  // namespace

TEST_CASE("surname keys agree across author name conventions") {
  PublicationRecord a = make_record("a", Source::wos);
  a.authors = {"Smith, J.", "DOE, Jane"};
  PublicationRecord b = make_record("b", Source::mag);
  b.authors = {"jane doe", "j smith"};
  CHECK(extract_surnames(a.authors) == std::vector<std::string>{"smith", "doe"});
  CHECK(derive_keys(a).surnames == derive_keys(b).surnames);
}

TEST_CASE("keys are null iff the field is null or empty") {
  PublicationRecord r = make_record("a", Source::wos);
  const LinkageKeySet empty_keys = derive_keys(r);
  CHECK(!empty_keys.title.has_value());
  CHECK(!empty_keys.abstract.has_value());
  CHECK(!empty_keys.year.has_value());
  CHECK(!empty_keys.surnames.has_value());
  CHECK(!empty_keys.doi.has_value());
  CHECK(!empty_keys.citations.has_value());
  CHECK(empty_keys.non_null_count() == 0);

  r.title = "!!!";  // normalizes to nothing -> still null
  CHECK(!derive_keys(r).title.has_value());
  r.title = "A Title";
  r.year = 2015;
  r.doi = " 10.1234/ABC ";
  const LinkageKeySet keys = derive_keys(r);
  CHECK(keys.title.has_value());
  CHECK(keys.year.has_value());
  CHECK(keys.doi.has_value());
  PublicationRecord same = r;
  same.doi = "10.1234/abc";
  CHECK(derive_keys(same).doi == keys.doi);  // case/space-insensitive DOI
  CHECK(derive_keys(r) == keys);             // deterministic
}

TEST_CASE("pair rule needs three shared non-null fields") {
  PublicationRecord a = make_record("a", Source::wos);
  a.title = "Shared Title";
  a.year = 2016;
  a.doi = "10.1/x";
  PublicationRecord b = make_record("b", Source::mag);
  b.title = "shared title!";
  b.year = 2016;
  b.doi = "10.1/X";
  CHECK(pair_matches(derive_keys(a), derive_keys(b), false));  // 3 shared

  b.doi.reset();
  CHECK(!pair_matches(derive_keys(a), derive_keys(b), false));  // only 2

  // Citations count within one dataset only.
  a.doi.reset();
  a.citation_ids = std::set<std::string>{"c1", "c2"};
  b.citation_ids = std::set<std::string>{"c1", "c2"};
  CHECK(!pair_matches(derive_keys(a), derive_keys(b), false));
  CHECK(pair_matches(derive_keys(a), derive_keys(b), true));
}

TEST_CASE("clusters close transitively") {
  // A~B on title+abstract+year, B~C on year+doi+surnames, A and C share only
  // the year.
  PublicationRecord a = make_record("a", Source::wos);
  a.title = "One Title";
  a.abstract = "Common abstract text";
  a.year = 2015;
  PublicationRecord b = make_record("b", Source::mag);
  b.title = "One Title";
  b.abstract = "Common abstract text";
  b.year = 2015;
  b.doi = "10.9/z";
  b.authors = {"Ada King"};
  PublicationRecord c = make_record("c", Source::dimensions);
  c.title = "Another Title Entirely";
  c.year = 2015;
  c.doi = "10.9/z";
  c.authors = {"A King"};

  REQUIRE(pair_matches(derive_keys(a), derive_keys(b), false));
  REQUIRE(pair_matches(derive_keys(b), derive_keys(c), false));
  REQUIRE(!pair_matches(derive_keys(a), derive_keys(c), false));

  const std::vector<PublicationRecord> records{a, b, c};
  const auto clusters = cluster(records);
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0].member_ids == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("planted duplicate groups are recovered exactly") {
  const auto corpus = testing::planted_duplicates(1234, 1000, 200);
  const auto clusters = cluster(corpus.records);
  CHECK(as_partition(clusters) == corpus.groups);
}

TEST_CASE("clustering equals the quadratic oracle on random corpora") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    auto corpus = testing::planted_duplicates(seed, 300, 60);
    // Add light corruption so non-planted structure also gets exercised.
    Rng rng(seed + 99);
    for (auto& r : corpus.records) {
      if (rng.below(10) == 0) r.abstract.reset();
      if (rng.below(12) == 0) r.year.reset();
    }
    const auto got = as_partition(cluster(corpus.records));
    CHECK(got == testing::ref_clusters(corpus.records));
  }
}

TEST_CASE("clustering is invariant to input order") {
  auto corpus = testing::planted_duplicates(8, 200, 40);
  const auto forward = cluster(corpus.records);
  std::reverse(corpus.records.begin(), corpus.records.end());
  const auto backward = cluster(corpus.records);
  REQUIRE(forward.size() == backward.size());
  for (std::size_t i = 0; i < forward.size(); ++i) {
    CHECK(forward[i].canonical_id == backward[i].canonical_id);
    CHECK(forward[i].member_ids == backward[i].member_ids);
  }
}

TEST_CASE("canonical member follows source priority then field count then id") {
  PublicationRecord mag_full = make_record("m", Source::mag);
  mag_full.title = "Twin Title";
  mag_full.abstract = "Twin abstract";
  mag_full.year = 2018;
  mag_full.doi = "10.2/t";
  mag_full.authors = {"Lee Wong"};
  PublicationRecord dim_sparse = make_record("d", Source::dimensions);
  dim_sparse.title = "Twin Title";
  dim_sparse.abstract = "Twin abstract";
  dim_sparse.year = 2018;

  auto clusters = cluster(std::vector<PublicationRecord>{mag_full, dim_sparse});
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0].canonical_id == "d");  // dimensions outranks mag

  // Same source: the record with more non-null fields wins.
  PublicationRecord wos_full = mag_full;
  wos_full.id = "w1";
  wos_full.source = Source::wos;
  PublicationRecord wos_sparse = dim_sparse;
  wos_sparse.id = "w0";
  wos_sparse.source = Source::wos;
  clusters = cluster(std::vector<PublicationRecord>{wos_sparse, wos_full});
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0].canonical_id == "w1");

  // Full tie: lexicographically smallest id.
  PublicationRecord twin = wos_full;
  twin.id = "w2";
  clusters = cluster(std::vector<PublicationRecord>{twin, wos_full});
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0].canonical_id == "w1");
  CHECK(std::count(clusters[0].member_ids.begin(), clusters[0].member_ids.end(),
                   clusters[0].canonical_id) == 1);
}

TEST_CASE("blocking completeness: matching pairs always share a non-year key") {
  Rng rng(44);
  const auto corpus = testing::planted_duplicates(91, 150, 30);
  std::vector<LinkageKeySet> keys;
  for (const auto& r : corpus.records) keys.push_back(derive_keys(r));
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t i = rng.below(keys.size());
    const std::size_t j = rng.below(keys.size());
    if (i == j) continue;
    if (pair_matches(keys[i], keys[j],
                     corpus.records[i].source == corpus.records[j].source)) {
      const auto shares = [&](auto get) {
        const auto a = get(keys[i]);
        const auto b = get(keys[j]);
        return a && b && *a == *b;
      };
      const bool shares_non_year =
          shares([](const LinkageKeySet& k) { return k.title; }) ||
          shares([](const LinkageKeySet& k) { return k.abstract; }) ||
          shares([](const LinkageKeySet& k) { return k.surnames; }) ||
          shares([](const LinkageKeySet& k) { return k.doi; }) ||
          shares([](const LinkageKeySet& k) { return k.citations; });
      CHECK(shares_non_year);
    }
  }
}

TEST_CASE("spilled runs reproduce the in-memory clustering") {
  const auto corpus = testing::planted_duplicates(17, 400, 80);
  ClusterOptions tiny;
  tiny.memory_budget_bytes = 1;  // forces the smallest run size, many spills
  const auto spilled = cluster(corpus.records, tiny);
  const auto in_memory = cluster(corpus.records);
  CHECK(as_partition(spilled) == as_partition(in_memory));
  CHECK(as_partition(spilled) == corpus.groups);
}

TEST_CASE("cluster writers emit jsonl and crosswalk") {
  const auto corpus = testing::planted_duplicates(3, 30, 6);
  const auto clusters = cluster(corpus.records);
  std::ostringstream jsonl_stream;
  write_clusters_jsonl(jsonl_stream, clusters);
  const std::string jsonl = jsonl_stream.str();
  CHECK(std::count(jsonl.begin(), jsonl.end(), '\n') ==
        static_cast<std::ptrdiff_t>(clusters.size()));
  CHECK(jsonl.find("\"canonical_id\"") != std::string::npos);

  std::ostringstream csv_stream;
  write_crosswalk_csv(csv_stream, clusters);
  const std::string csv = csv_stream.str();
  CHECK(csv.rfind("member_id,canonical_id\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') ==
        static_cast<std::ptrdiff_t>(corpus.records.size() + 1));
}
