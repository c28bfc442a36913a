#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fieldscope {

// Lowercased, punctuation-free token sequence. Produced only by
// normalize_text, so every token is non-empty and whitespace-free, and
// normalizing the joined tokens reproduces the same list.
struct NormalizedText {
  std::vector<std::string> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  std::string joined() const;

  bool operator==(const NormalizedText&) const = default;
};

// Canonical text normalization, fixed bit-exactly:
//   1. decode UTF-8 (invalid bytes act as separators),
//   2. simple-lowercase ASCII, Latin-1 and Latin Extended-A letters,
//   3. map every code point that is not a letter, a digit, or '*' to a space
//      (ASCII punctuation, Latin-1 punctuation/symbols, and the general
//      punctuation block U+2000..U+206F split tokens; other non-Latin code
//      points pass through as word characters),
//   4. split on space runs, discarding empties.
// '*' survives so lexicon patterns normalize through the same path as text.
NormalizedText normalize_text(std::string_view raw);

}  // namespace fieldscope
