#pragma once

// UTF-8 decoding and the character classes shared by ingestion, segmentation
// and matching. Only the Arabic and Latin ranges the pipeline cares about are
// classified; everything else is treated as punctuation.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace slcsas::utf8 {

struct CodePoint {
  char32_t value = 0;
  std::size_t offset = 0;  // byte offset of the first byte
  std::size_t length = 0;  // encoded length in bytes
};

// Decodes the code point starting at `offset`. Returns nullopt on a malformed
// or truncated sequence (overlongs and surrogates included).
inline std::optional<CodePoint> decode(std::string_view s, std::size_t offset) {
  if (offset >= s.size()) return std::nullopt;
  const auto b0 = static_cast<unsigned char>(s[offset]);
  char32_t cp;
  std::size_t len;
  if (b0 < 0x80) {
    return CodePoint{b0, offset, 1};
  } else if ((b0 & 0xE0) == 0xC0) {
    cp = b0 & 0x1F;
    len = 2;
  } else if ((b0 & 0xF0) == 0xE0) {
    cp = b0 & 0x0F;
    len = 3;
  } else if ((b0 & 0xF8) == 0xF0) {
    cp = b0 & 0x07;
    len = 4;
  } else {
    return std::nullopt;
  }
  if (offset + len > s.size()) return std::nullopt;
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[offset + i]);
    if ((b & 0xC0) != 0x80) return std::nullopt;
    cp = (cp << 6) | (b & 0x3F);
  }
  static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    return std::nullopt;
  }
  return CodePoint{cp, offset, len};
}

inline bool is_valid(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto cp = decode(s, i);
    if (!cp) return false;
    i += cp->length;
  }
  return true;
}

inline void append(std::string& out, char32_t cp) {
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

inline std::string encode(char32_t cp) {
  std::string out;
  append(out, cp);
  return out;
}

// Iterates code points of valid UTF-8; invalid bytes decode as U+FFFD of
// length 1 so callers never loop forever on bad input.
template <typename Fn>
void for_each(std::string_view s, Fn&& fn) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto cp = decode(s, i);
    CodePoint c = cp ? *cp : CodePoint{0xFFFD, i, 1};
    fn(c);
    i += c.length;
  }
}

inline std::size_t count_code_points(std::string_view s) {
  std::size_t n = 0;
  for_each(s, [&](const CodePoint&) { ++n; });
  return n;
}

constexpr char32_t kTatweel = 0x0640;
constexpr char32_t kArabicComma = 0x060C;
constexpr char32_t kArabicSemicolon = 0x061B;
constexpr char32_t kArabicQuestion = 0x061F;

constexpr bool is_space(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f' || c == 0x00A0;
}

// Harakat, shadda, sukun and the other combining marks of the Arabic block.
constexpr bool is_arabic_diacritic(char32_t c) {
  return (c >= 0x064B && c <= 0x065F) || c == 0x0670;
}

constexpr bool is_arabic_letter(char32_t c) {
  return (c >= 0x0621 && c <= 0x063A) || (c >= 0x0641 && c <= 0x064A) ||
         (c >= 0x066E && c <= 0x066F) || (c >= 0x0671 && c <= 0x06D3) ||
         c == 0x06D5 || (c >= 0x06EE && c <= 0x06EF) ||
         (c >= 0x06FA && c <= 0x06FC) || c == 0x06FF ||
         (c >= 0xFB50 && c <= 0xFDFB) || (c >= 0xFE70 && c <= 0xFEFC);
}

constexpr bool is_latin_letter(char32_t c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
         (c >= 0x00C0 && c <= 0x024F && c != 0x00D7 && c != 0x00F7);
}

constexpr bool is_letter(char32_t c) {
  return is_arabic_letter(c) || is_latin_letter(c);
}

// Characters that continue a word token: letters plus the marks that attach
// to them.
constexpr bool is_word_char(char32_t c) {
  return is_letter(c) || is_arabic_diacritic(c) || c == kTatweel;
}

constexpr bool is_digit(char32_t c) {
  return (c >= '0' && c <= '9') || (c >= 0x0660 && c <= 0x0669) ||
         (c >= 0x06F0 && c <= 0x06F9);
}

// Removes diacritics and tatweel. Used to build the matching shadow of a word.
inline std::string strip_marks(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for_each(s, [&](const CodePoint& c) {
    if (is_arabic_diacritic(c.value) || c.value == kTatweel) return;
    out.append(s.substr(c.offset, c.length));
  });
  return out;
}

inline std::string strip_tatweel(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for_each(s, [&](const CodePoint& c) {
    if (c.value == kTatweel) return;
    out.append(s.substr(c.offset, c.length));
  });
  return out;
}

// Byte offset of the first code point, and length of the first code point.
inline std::size_t first_length(std::string_view s) {
  auto cp = decode(s, 0);
  return cp ? cp->length : (s.empty() ? 0 : 1);
}

inline std::optional<char32_t> first(std::string_view s) {
  auto cp = decode(s, 0);
  if (!cp) return std::nullopt;
  return cp->value;
}

inline bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

inline bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

// Trims is_space() code points from both ends. Returns [begin, end) in bytes.
inline std::pair<std::size_t, std::size_t> trim_range(std::string_view s,
                                                      std::size_t begin,
                                                      std::size_t end) {
  std::size_t b = begin;
  while (b < end) {
    auto cp = decode(s, b);
    if (!cp || !is_space(cp->value)) break;
    b += cp->length;
  }
  std::size_t e = end;
  while (e > b) {
    std::size_t p = e - 1;
    while (p > b && (static_cast<unsigned char>(s[p]) & 0xC0) == 0x80) --p;
    auto cp = decode(s, p);
    if (!cp || !is_space(cp->value)) break;
    e = p;
  }
  return {b, e};
}

inline std::string_view trim(std::string_view s) {
  auto [b, e] = trim_range(s, 0, s.size());
  return s.substr(b, e - b);
}

}  // namespace slcsas::utf8
