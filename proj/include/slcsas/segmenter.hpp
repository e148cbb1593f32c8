#pragma once

// Sentence segmentation by typographic boundaries, and tokenization of a
// sentence into words, digit runs and punctuation marks.

#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "slcsas/error.hpp"
#include "slcsas/utf8.hpp"

namespace slcsas {

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const Span&) const = default;
};

struct Sentence {
  std::string doc_id;
  std::size_t index = 0;
  Span span;  // into the document body, already trimmed
  std::string text;
};

enum class TokenKind { Word, Punct, Digit };

struct Token {
  std::string surface;  // tatweel removed
  std::string shadow;   // surface without diacritics; what patterns match
  Span span;            // into Sentence::text
  TokenKind kind = TokenKind::Word;
};

// Which typographic triggers end a sentence. A period counts only when it is
// followed by whitespace or the end of the text.
struct Boundaries {
  bool dot_space = true;
  bool question = true;     // ؟
  bool exclamation = true;  // !
  bool newline = true;

  bool operator==(const Boundaries&) const = default;

  static Boundaries dot_space_only() { return {true, false, false, false}; }
};

// Comma-separated list of dot-space, question, exclamation, newline.
inline Boundaries parse_boundaries(std::string_view spec) {
  Boundaries b{false, false, false, false};
  std::stringstream ss{std::string(spec)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto t = utf8::trim(item);
    if (t == "dot-space") b.dot_space = true;
    else if (t == "question") b.question = true;
    else if (t == "exclamation") b.exclamation = true;
    else if (t == "newline") b.newline = true;
    else if (t == "all") b = Boundaries{};
    else if (!t.empty()) throw Error("unknown boundary trigger: " + std::string(t));
  }
  return b;
}

inline std::string format_boundaries(const Boundaries& b) {
  std::string out;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += ',';
    out += name;
  };
  add(b.dot_space, "dot-space");
  add(b.question, "question");
  add(b.exclamation, "exclamation");
  add(b.newline, "newline");
  return out;
}

inline std::vector<Sentence> segment(std::string_view body, const Boundaries& bounds = {},
                                     std::string_view doc_id = {}) {
  std::vector<Sentence> out;
  std::size_t start = 0;
  auto emit = [&](std::size_t end) {
    auto [b, e] = utf8::trim_range(body, start, end);
    if (b < e) {
      Sentence s;
      s.doc_id = std::string(doc_id);
      s.index = out.size();
      s.span = {b, e};
      s.text = std::string(body.substr(b, e - b));
      out.push_back(std::move(s));
    }
    start = end;
  };
  auto followed_by_space = [&](std::size_t pos) {
    auto next = utf8::decode(body, pos);
    return pos >= body.size() || (next && utf8::is_space(next->value));
  };

  std::size_t i = 0;
  while (i < body.size()) {
    auto cp = utf8::decode(body, i);
    utf8::CodePoint c = cp ? *cp : utf8::CodePoint{0xFFFD, i, 1};
    std::size_t next = i + c.length;
    if (c.value == '\n' && bounds.newline) {
      emit(i);
    } else if ((c.value == '.' && bounds.dot_space) ||
               (c.value == utf8::kArabicQuestion && bounds.question) ||
               (c.value == '!' && bounds.exclamation)) {
      if (followed_by_space(next)) emit(next);
    }
    i = next;
  }
  emit(body.size());
  return out;
}

inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    auto cp = utf8::decode(text, i);
    utf8::CodePoint c = cp ? *cp : utf8::CodePoint{0xFFFD, i, 1};
    if (utf8::is_space(c.value)) {
      i += c.length;
      continue;
    }
    std::size_t j = i + c.length;
    TokenKind kind;
    if (utf8::is_word_char(c.value)) {
      kind = TokenKind::Word;
      while (j < text.size()) {
        auto n = utf8::decode(text, j);
        if (!n || !utf8::is_word_char(n->value)) break;
        j += n->length;
      }
    } else if (utf8::is_digit(c.value)) {
      kind = TokenKind::Digit;
      while (j < text.size()) {
        auto n = utf8::decode(text, j);
        if (!n || !utf8::is_digit(n->value)) break;
        j += n->length;
      }
    } else {
      kind = TokenKind::Punct;
    }
    Token t;
    t.span = {i, j};
    auto raw = text.substr(i, j - i);
    if (kind == TokenKind::Word) {
      t.surface = utf8::strip_tatweel(raw);
      t.shadow = utf8::strip_marks(raw);
      // A run of bare marks carries no letters; keep it as punctuation.
      if (t.shadow.empty()) kind = TokenKind::Punct;
    }
    if (kind != TokenKind::Word) {
      t.surface = std::string(raw);
      t.shadow = t.surface;
    }
    t.kind = kind;
    out.push_back(std::move(t));
    i = j;
  }
  return out;
}

}  // namespace slcsas
