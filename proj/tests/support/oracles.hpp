#pragma once

// Independent reference implementations used to freeze expected values.
// Everything here is deliberately naive (recursion, O(n^2) scans, direct
// formula transcription) and stays independent of the library's
// implementation paths.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fieldscope/record.hpp"

namespace fieldscope::testing {

// Recursive glob matcher over one token ('*' = zero or more characters).
bool ref_glob_match(const std::string& pattern, const std::string& text);

// All window starts where the term's tokens match text tokens one-by-one.
std::vector<std::size_t> ref_term_windows(const std::vector<std::string>& term_tokens,
                                          const std::vector<std::string>& text_tokens);

struct RefMetrics {
  double precision, recall, f1;
};

// Direct transcription of the metric formulas.
RefMetrics ref_metrics(std::size_t tp, std::size_t fp, std::size_t fn);

// O(n^2) transitive closure of the >= 3-shared-field rule, comparing
// normalized field values directly (no hashing, no blocking). Returns the
// partition as sorted id sets.
std::vector<std::set<std::string>> ref_clusters(
    const std::vector<PublicationRecord>& records);

}  // namespace fieldscope::testing
