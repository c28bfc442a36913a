#include "fieldscope/text.hpp"

#include <cstdint>

namespace fieldscope {

std::string NormalizedText::joined() const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

namespace {

// Decodes one UTF-8 code point at pos; advances pos. Invalid sequences yield
// 0xFFFD and consume a single byte.
std::uint32_t decode_utf8(std::string_view s, std::size_t& pos) {
  const unsigned char b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  int extra;
  std::uint32_t cp;
  if ((b0 & 0xE0) == 0xC0) {
    extra = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    extra = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    extra = 3;
    cp = b0 & 0x07;
  } else {
    ++pos;
    return 0xFFFD;
  }
  if (pos + 1 + extra > s.size()) {
    ++pos;
    return 0xFFFD;
  }
  for (int i = 1; i <= extra; ++i) {
    const unsigned char b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  pos += 1 + extra;
  return cp;
}

// Simple lowercase for ASCII, Latin-1 and Latin Extended-A. Code points
// outside these ranges pass through unchanged; the mapping's image is a fixed
// point of the mapping, which gives normalize_text its idempotence.
std::uint32_t simple_lower(std::uint32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if (cp >= 0x100 && cp <= 0x17F) {
    if (cp == 0x130) return 'i';   // dotted capital I
    if (cp == 0x178) return 0xFF;  // capital Y with diaeresis
    if (cp <= 0x137 || (cp >= 0x14A && cp <= 0x177)) return (cp % 2 == 0) ? cp + 1 : cp;
    if (cp >= 0x139 && cp <= 0x148) return (cp % 2 == 1) ? cp + 1 : cp;
    if (cp >= 0x179 && cp <= 0x17E) return (cp % 2 == 1) ? cp + 1 : cp;
  }
  return cp;
}

// Word characters survive; everything else becomes a token boundary.
bool is_word_cp(std::uint32_t cp) {
  if (cp == '*') return true;
  if (cp < 0x80)
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') ||
           (cp >= '0' && cp <= '9');
  if (cp <= 0xBF) return false;                   // Latin-1 punctuation, NBSP, symbols
  if (cp == 0xD7 || cp == 0xF7) return false;     // multiplication / division signs
  if (cp >= 0x2000 && cp <= 0x206F) return false; // general punctuation (dashes, quotes)
  if (cp == 0xFFFD) return false;
  return true;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

}  // namespace

NormalizedText normalize_text(std::string_view raw) {
  NormalizedText out;
  std::string token;
  std::size_t pos = 0;
  while (pos < raw.size()) {
    const std::uint32_t cp = decode_utf8(raw, pos);
    if (is_word_cp(cp)) {
      append_utf8(token, simple_lower(cp));
    } else if (!token.empty()) {
      out.tokens.push_back(std::move(token));
      token.clear();
    }
  }
  if (!token.empty()) out.tokens.push_back(std::move(token));
  return out;
}

}  // namespace fieldscope
