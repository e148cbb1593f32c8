#pragma once

// The rule language: marker patterns with alternation, optional groups,
// variables and clitic adjacency; the rule, variable and semantic-map files.
//
// Pattern grammar (whitespace between items means "next word", no whitespace
// means "same word"):
//
//   sequence := item (join item)* ['*']
//   item     := literal | '::' name | '(' sequence ('|' sequence)* ')' ['؟' | '?']
//
// A trailing '*' lets the last word continue with any non-empty tail; it is
// how open verb classes are handed to the morphological check.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "slcsas/error.hpp"
#include "slcsas/utf8.hpp"

namespace slcsas {

enum class Join { Glued, Spaced };

struct Sequence;

struct Literal {
  std::string text;
  bool operator==(const Literal&) const = default;
};

struct VariableRef {
  std::string name;  // without the leading "::"
  bool operator==(const VariableRef&) const = default;
};

// Alternation, optionally marked as a whole with ؟.
struct Group {
  std::vector<Sequence> alternatives;
  bool optional = false;
  bool operator==(const Group& other) const;
};

using Element = std::variant<Literal, VariableRef, Group>;

struct Sequence {
  std::vector<Element> elements;
  std::vector<Join> joins;  // joins[i] sits between elements[i] and elements[i+1]
  bool operator==(const Sequence&) const = default;
};

inline bool Group::operator==(const Group& other) const {
  return optional == other.optional && alternatives == other.alternatives;
}

struct MarkerPattern {
  Sequence seq;
  bool open_tail = false;
  bool operator==(const MarkerPattern&) const = default;
};

// Variable name -> variable-free pattern.
using VariableTable = std::map<std::string, MarkerPattern>;

struct SemanticCategory {
  std::string name;
  std::optional<std::string> parent;
  bool operator==(const SemanticCategory&) const = default;
};

enum class Polarity { Positive, Negative };

struct LinguisticForm {
  Polarity polarity = Polarity::Positive;
  MarkerPattern pattern;   // as written, may reference variables
  MarkerPattern expanded;  // variable-free
  std::size_t search_field_words = 0;  // 0 = rest of the sentence
  bool operator==(const LinguisticForm&) const = default;
};

enum class MorphCheck { None, Qad, Siin };
enum class ExtractMode { WholeSentence, FromMarkerToEnd };

struct LinguisticRule {
  std::string id;
  std::vector<LinguisticForm> forms;
  std::string category;
  std::string class_label;
  MorphCheck morph = MorphCheck::None;
  ExtractMode extract = ExtractMode::WholeSentence;
  bool operator==(const LinguisticRule&) const = default;
};

// ---------------------------------------------------------------------------
// Pattern parsing

namespace detail {

constexpr char32_t kArabicQuestionMark = 0x061F;

inline bool is_name_char(char32_t c) {
  return utf8::is_letter(c) || utf8::is_digit(c) || c == '_' || utf8::is_arabic_diacritic(c);
}

class PatternParser {
 public:
  PatternParser(std::string_view text, std::size_t line) : s_(text), line_(line) {}

  MarkerPattern parse() {
    MarkerPattern p;
    p.seq = sequence(/*top=*/true, &p.open_tail);
    skip_space();
    if (pos_ < s_.size()) {
      if (peek() == ')') fail("unbalanced parentheses");
      fail("unexpected character in pattern");
    }
    if (p.seq.elements.empty()) fail("empty pattern");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_); }

  char32_t peek() const {
    auto cp = utf8::decode(s_, pos_);
    return cp ? cp->value : 0xFFFD;
  }
  void bump() { pos_ += utf8::first_length(s_.substr(pos_)); }
  bool at_end() const { return pos_ >= s_.size(); }

  bool skip_space() {
    bool any = false;
    while (!at_end() && utf8::is_space(peek())) {
      bump();
      any = true;
    }
    return any;
  }

  bool is_special(char32_t c) const {
    return c == '(' || c == ')' || c == '|' || c == '?' || c == kArabicQuestionMark || c == '*';
  }

  bool at_var() const { return s_.substr(pos_, 2) == "::"; }

  Sequence sequence(bool top, bool* open_tail) {
    Sequence seq;
    skip_space();
    while (!at_end()) {
      char32_t c = peek();
      if (c == ')' || c == '|') break;
      if (c == '*') fail("'*' must follow a word");
      seq.elements.push_back(item());
      if (!at_end() && peek() == '*') {
        if (!top) fail("'*' is only allowed at the end of a pattern");
        bump();
        skip_space();
        if (!at_end()) fail("'*' is only allowed at the end of a pattern");
        *open_tail = true;
        break;
      }
      bool spaced = skip_space();
      if (at_end() || peek() == ')' || peek() == '|') break;
      if (peek() == '*') fail("'*' must follow a word");
      seq.joins.push_back(spaced ? Join::Spaced : Join::Glued);
    }
    return seq;
  }

  Element item() {
    char32_t c = peek();
    if (c == '(') {
      bump();
      Group g;
      while (true) {
        Sequence alt = sequence(false, nullptr);
        if (alt.elements.empty()) fail(at_end() ? "unbalanced parentheses" : "empty alternative");
        g.alternatives.push_back(std::move(alt));
        if (at_end()) fail("unbalanced parentheses");
        if (peek() == '|') {
          bump();
          continue;
        }
        if (peek() == ')') {
          bump();
          break;
        }
        fail("unbalanced parentheses");
      }
      if (!at_end() && (peek() == '?' || peek() == kArabicQuestionMark)) {
        bump();
        g.optional = true;
      }
      return g;
    }
    if (at_var()) {
      pos_ += 2;
      std::size_t b = pos_;
      while (!at_end() && is_name_char(peek())) bump();
      if (pos_ == b) fail("missing variable name after '::'");
      return VariableRef{std::string(s_.substr(b, pos_ - b))};
    }
    if (c == '?' || c == kArabicQuestionMark) fail("optional marker must follow a group");
    std::size_t b = pos_;
    while (!at_end() && !utf8::is_space(peek()) && !is_special(peek()) && !at_var()) bump();
    if (pos_ == b) fail("unexpected character in pattern");
    return Literal{std::string(s_.substr(b, pos_ - b))};
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

inline bool nullable(const Sequence& seq);

inline bool nullable(const Element& e) {
  if (const auto* g = std::get_if<Group>(&e)) {
    if (g->optional) return true;
    return std::any_of(g->alternatives.begin(), g->alternatives.end(),
                       [](const Sequence& s) { return nullable(s); });
  }
  return false;  // literals are non-empty; variables are checked after expansion
}

inline bool nullable(const Sequence& seq) {
  return std::all_of(seq.elements.begin(), seq.elements.end(),
                     [](const Element& e) { return nullable(e); });
}

inline void collect_refs(const Sequence& seq, std::vector<std::string>& out) {
  for (const auto& e : seq.elements) {
    if (const auto* v = std::get_if<VariableRef>(&e)) {
      out.push_back(v->name);
    } else if (const auto* g = std::get_if<Group>(&e)) {
      for (const auto& alt : g->alternatives) collect_refs(alt, out);
    }
  }
}

}  // namespace detail

inline MarkerPattern parse_pattern(std::string_view text, std::size_t line = 0) {
  return detail::PatternParser(text, line).parse();
}

// Replaces every variable reference with the variable's pattern. A variable
// with an open tail may only appear as the last element of the top level.
inline MarkerPattern expand(const MarkerPattern& p, const VariableTable& vars, std::size_t line = 0) {
  MarkerPattern out;
  out.open_tail = p.open_tail;
  auto expand_seq = [&](auto&& self, const Sequence& seq, bool top) -> Sequence {
    Sequence r;
    r.joins = seq.joins;
    for (std::size_t i = 0; i < seq.elements.size(); ++i) {
      const auto& e = seq.elements[i];
      if (const auto* v = std::get_if<VariableRef>(&e)) {
        auto it = vars.find(v->name);
        if (it == vars.end()) throw ParseError("unresolved variable " + v->name, line);
        if (it->second.open_tail) {
          if (!top || i + 1 != seq.elements.size() || p.open_tail) {
            throw ParseError("open-tailed variable " + v->name + " must end the pattern", line);
          }
          out.open_tail = true;
        }
        Group g;
        g.alternatives.push_back(it->second.seq);
        r.elements.emplace_back(std::move(g));
      } else if (const auto* g = std::get_if<Group>(&e)) {
        Group ng;
        ng.optional = g->optional;
        for (const auto& alt : g->alternatives) ng.alternatives.push_back(self(self, alt, false));
        r.elements.emplace_back(std::move(ng));
      } else {
        r.elements.push_back(e);
      }
    }
    return r;
  };
  out.seq = expand_seq(expand_seq, p.seq, true);
  if (detail::nullable(out.seq)) throw ParseError("pattern can match the empty string", line);
  if (out.open_tail && !out.seq.elements.empty() && detail::nullable(out.seq.elements.back())) {
    throw ParseError("'*' must follow a non-optional element", line);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Printing

inline void print_sequence(std::string& out, const Sequence& seq) {
  for (std::size_t i = 0; i < seq.elements.size(); ++i) {
    if (i > 0 && seq.joins[i - 1] == Join::Spaced) out += ' ';
    std::visit(
        [&](const auto& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, Literal>) {
            out += e.text;
          } else if constexpr (std::is_same_v<T, VariableRef>) {
            out += "::" + e.name;
          } else {
            out += '(';
            for (std::size_t k = 0; k < e.alternatives.size(); ++k) {
              if (k) out += '|';
              print_sequence(out, e.alternatives[k]);
            }
            out += ')';
            if (e.optional) out += "؟";
          }
        },
        seq.elements[i]);
  }
}

inline std::string to_string(const MarkerPattern& p) {
  std::string out;
  print_sequence(out, p.seq);
  if (p.open_tail) out += '*';
  return out;
}

inline const char* to_string(MorphCheck m) {
  switch (m) {
    case MorphCheck::Qad: return "qad";
    case MorphCheck::Siin: return "siin";
    default: return "none";
  }
}

inline std::string to_string(const LinguisticRule& rule) {
  std::string out;
  for (std::size_t i = 0; i < rule.forms.size(); ++i) {
    const auto& f = rule.forms[i];
    if (i) out += " > ";
    if (f.polarity == Polarity::Negative) out += '-';
    out += to_string(f.pattern);
    if (f.search_field_words) out += "@" + std::to_string(f.search_field_words);
  }
  out += " -> " + rule.category;
  out += " class:" + rule.class_label;
  out += " id:" + rule.id;
  if (rule.morph != MorphCheck::None) out += std::string(" morph:") + to_string(rule.morph);
  if (rule.extract == ExtractMode::FromMarkerToEnd) out += " extract:from-marker-to-end";
  return out;
}

// ---------------------------------------------------------------------------
// Files

namespace detail {

// Splits text into (1-based line number, content) pairs, skipping blank lines
// and `#` comments. Trailing CR is removed.
inline std::vector<std::pair<std::size_t, std::string>> content_lines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string>> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto t = utf8::trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.emplace_back(n, line);
  }
  return out;
}

}  // namespace detail

// `::name = expression` per line. Variables may use variables defined
// anywhere in the file as long as no cycle forms.
inline VariableTable parse_variable_defs(std::string_view text) {
  struct Raw {
    MarkerPattern pattern;
    std::size_t line;
  };
  std::map<std::string, Raw> raw;
  for (const auto& [lineno, line] : detail::content_lines(text)) {
    auto t = utf8::trim(line);
    if (t.substr(0, 2) != "::") throw ParseError("variable definition must start with '::'", lineno);
    auto eq = t.find('=');
    if (eq == std::string_view::npos) throw ParseError("missing '=' in variable definition", lineno);
    auto name = std::string(utf8::trim(t.substr(2, eq - 2)));
    if (name.empty()) throw ParseError("missing variable name", lineno);
    bool valid = true;
    utf8::for_each(name, [&](const utf8::CodePoint& c) { valid = valid && detail::is_name_char(c.value); });
    if (!valid) throw ParseError("invalid variable name " + name, lineno);
    if (raw.count(name)) throw ParseError("duplicate variable " + name, lineno);
    raw.emplace(name, Raw{parse_pattern(t.substr(eq + 1), lineno), lineno});
  }

  VariableTable table;
  std::set<std::string> visiting;
  auto resolve = [&](auto&& self, const std::string& name) -> void {
    if (table.count(name)) return;
    const auto& r = raw.at(name);
    if (!visiting.insert(name).second) throw ParseError("recursive reference to " + name, r.line);
    std::vector<std::string> refs;
    detail::collect_refs(r.pattern.seq, refs);
    for (const auto& ref : refs) {
      if (!raw.count(ref)) throw ParseError("unresolved variable " + ref, r.line);
      if (visiting.count(ref)) throw ParseError("recursive reference to " + ref, r.line);
      self(self, ref);
    }
    table.emplace(name, expand(r.pattern, table, r.line));
    visiting.erase(name);
  };
  for (const auto& [name, r] : raw) resolve(resolve, name);
  return table;
}

// Indentation outline, two spaces per level.
inline std::vector<SemanticCategory> parse_semantic_map(std::string_view text) {
  std::vector<SemanticCategory> out;
  std::vector<std::string> stack;  // ancestors by depth
  std::set<std::string> names;
  for (const auto& [lineno, line] : detail::content_lines(text)) {
    std::size_t indent = 0;
    while (indent < line.size() && (line[indent] == ' ' || line[indent] == '\t')) {
      if (line[indent] == '\t') throw ParseError("tabs are not allowed in indentation", lineno);
      ++indent;
    }
    if (indent % 2) throw ParseError("inconsistent indentation", lineno);
    std::size_t depth = indent / 2;
    if (depth > stack.size()) throw ParseError("inconsistent indentation", lineno);
    auto name = std::string(utf8::trim(line));
    if (!names.insert(name).second) throw ParseError("duplicate category " + name, lineno);
    stack.resize(depth);
    SemanticCategory c{name, depth ? std::optional<std::string>(stack.back()) : std::nullopt};
    stack.push_back(name);
    out.push_back(std::move(c));
  }
  return out;
}

namespace detail {

inline std::vector<std::string> split_on(std::string_view s, std::string_view sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    auto k = s.find(sep, pos);
    out.emplace_back(s.substr(pos, k == std::string_view::npos ? std::string_view::npos : k - pos));
    if (k == std::string_view::npos) break;
    pos = k + sep.size();
  }
  return out;
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  utf8::for_each(s, [&](const utf8::CodePoint& c) {
    if (utf8::is_space(c.value)) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.append(s.substr(c.offset, c.length));
    }
  });
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline LinguisticForm parse_form(std::string_view text, const VariableTable& vars,
                                 std::size_t lineno, std::size_t default_field) {
  auto t = utf8::trim(text);
  LinguisticForm f;
  f.search_field_words = default_field;
  if (!t.empty() && t.front() == '-') {
    f.polarity = Polarity::Negative;
    t = utf8::trim(t.substr(1));
  }
  auto at = t.rfind('@');
  if (at != std::string_view::npos) {
    auto num = t.substr(at + 1);
    if (num.empty() || !std::all_of(num.begin(), num.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw ParseError("invalid search field length", lineno);
    }
    f.search_field_words = std::stoul(std::string(num));
    t = utf8::trim(t.substr(0, at));
  }
  if (t.empty()) throw ParseError("empty linguistic form", lineno);
  f.pattern = parse_pattern(t, lineno);
  f.expanded = expand(f.pattern, vars, lineno);
  return f;
}

}  // namespace detail

struct RuleParseOptions {
  std::size_t default_search_field_words = 0;
};

// One rule per line:  LF (> LF)* -> CATEGORY [key:value ...]
// `<-` is accepted as an arrow spelling. With `<-` the category may also be
// written first (`CATEGORY <- LF < LF`), in which case the forms read right
// to left.
inline std::vector<LinguisticRule> parse_rules(std::string_view text, const VariableTable& vars,
                                               const std::vector<SemanticCategory>& categories,
                                               const RuleParseOptions& opts = {}) {
  auto known = [&](const std::string& name) {
    return std::any_of(categories.begin(), categories.end(),
                       [&](const SemanticCategory& c) { return c.name == name; });
  };
  std::vector<LinguisticRule> rules;
  std::set<std::string> ids;
  for (const auto& [lineno, line] : detail::content_lines(text)) {
    std::string forms_part, target_part;
    bool reversed = false;
    if (auto k = line.find("->"); k != std::string::npos) {
      forms_part = line.substr(0, k);
      target_part = line.substr(k + 2);
    } else if (auto k2 = line.find("<-"); k2 != std::string::npos) {
      auto left = line.substr(0, k2);
      auto right = line.substr(k2 + 2);
      auto right_words = detail::split_ws(right);
      auto left_words = detail::split_ws(left);
      if (!right_words.empty() && known(right_words.front())) {
        forms_part = left;
        target_part = right;
      } else if (!left_words.empty() && known(left_words.front())) {
        forms_part = right;
        target_part = left;
        reversed = true;
      } else {
        throw ParseError("category not in semantic map", lineno);
      }
    } else {
      throw ParseError("missing '->' before the category", lineno);
    }

    auto target = detail::split_ws(target_part);
    if (target.empty()) throw ParseError("missing category", lineno);
    LinguisticRule rule;
    bool explicit_class = false;
    rule.category = target.front();
    if (!known(rule.category)) throw ParseError("category not in semantic map", lineno);
    for (std::size_t i = 1; i < target.size(); ++i) {
      const auto& d = target[i];
      auto colon = d.find(':');
      if (colon == std::string::npos) throw ParseError("invalid directive " + d, lineno);
      auto key = d.substr(0, colon);
      auto value = d.substr(colon + 1);
      if (key == "class") {
        rule.class_label = value;
        explicit_class = true;
      } else if (key == "id") {
        rule.id = value;
      } else if (key == "morph" && value == "qad") {
        rule.morph = MorphCheck::Qad;
      } else if (key == "morph" && value == "siin") {
        rule.morph = MorphCheck::Siin;
      } else if (key == "extract" && value == "from-marker-to-end") {
        rule.extract = ExtractMode::FromMarkerToEnd;
      } else if (key == "extract" && value == "sentence") {
        rule.extract = ExtractMode::WholeSentence;
      } else {
        throw ParseError("invalid directive " + d, lineno);
      }
    }

    auto pieces = detail::split_on(forms_part, reversed ? "<" : ">");
    if (reversed) std::reverse(pieces.begin(), pieces.end());
    for (const auto& piece : pieces) {
      rule.forms.push_back(detail::parse_form(piece, vars, lineno, opts.default_search_field_words));
    }
    if (std::none_of(rule.forms.begin(), rule.forms.end(),
                     [](const LinguisticForm& f) { return f.polarity == Polarity::Positive; })) {
      throw ParseError("rule has no positive marker", lineno);
    }
    if (rule.class_label.empty()) rule.class_label = rule.category;
    if (rule.id.empty()) {
      rule.id = explicit_class && !ids.count(rule.class_label)
                    ? rule.class_label
                    : "rule" + std::to_string(rules.size() + 1);
    }
    if (!ids.insert(rule.id).second) throw ParseError("duplicate rule id " + rule.id, lineno);
    rules.push_back(std::move(rule));
  }
  return rules;
}

}  // namespace slcsas
