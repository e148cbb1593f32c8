#pragma once

// Lightweight verb recognizer used to verify the قد and س rules: a lexicon
// lookup first, then an imperfective-prefix heuristic for words the lexicons
// do not list.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>

#include "slcsas/error.hpp"
#include "slcsas/utf8.hpp"

namespace slcsas {

enum class Verdict { PresentVerb, PastVerb, ProperNoun, Other };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::PresentVerb: return "PresentVerb";
    case Verdict::PastVerb: return "PastVerb";
    case Verdict::ProperNoun: return "ProperNoun";
    default: return "Other";
  }
}

struct MorphVerdict {
  std::string token;
  Verdict verdict = Verdict::Other;
  std::string stripped_clitics;
  std::string stem;
};

struct MorphOptions {
  // Letters required after the imperfective prefix for the fallback to fire.
  std::size_t min_stem_letters = 3;
  // Reject fallback candidates ending in ة, ات or يا (nouns and nisba
  // adverbs such as سنويا).
  bool noun_suffix_guard = true;
};

struct Lexicons {
  std::unordered_set<std::string> present_verbs;
  std::unordered_set<std::string> past_verbs;
  std::unordered_set<std::string> proper_nouns;
  std::unordered_set<std::string> qad_exclusions;  // verbs never accepted after قد
  MorphOptions options;

  // Throws when a stem is listed both as a present verb and a proper noun.
  void validate() const {
    for (const auto& s : present_verbs) {
      if (proper_nouns.count(s)) throw Error("lexicon conflict: " + s + " is both a verb and a proper noun");
    }
  }
};

namespace morpho_detail {

inline const std::string kWaw = "و";
inline const std::string kFa = "ف";
inline const std::string kSiin = "س";
inline const std::string kTa = "ت";
inline const std::string kTaMarbuta = "ة";
inline const std::string kAlifTa = "ات";
inline const std::string kYaAlif = "يا";

inline bool imperfective_prefix(char32_t c) {
  return c == 0x064A /* ي */ || c == 0x062A /* ت */ || c == 0x0646 /* ن */ || c == 0x0623 /* أ */;
}

inline std::unordered_set<std::string> read_list(std::string_view text) {
  std::unordered_set<std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto t = utf8::trim(line);
    if (!t.empty()) out.insert(utf8::strip_marks(t));
  }
  return out;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace morpho_detail

// Parses one lexicon file: one entry per line, `#` comments.
inline std::unordered_set<std::string> parse_lexicon(std::string_view text) {
  return morpho_detail::read_list(text);
}

// Loads present_verbs.txt, past_verbs.txt, proper_nouns.txt and, if present,
// qad_exclusions.txt from a directory.
inline Lexicons load_lexicons(const std::filesystem::path& dir, MorphOptions opts = {}) {
  using morpho_detail::read_file;
  Lexicons lex;
  lex.present_verbs = parse_lexicon(read_file(dir / "present_verbs.txt"));
  lex.past_verbs = parse_lexicon(read_file(dir / "past_verbs.txt"));
  lex.proper_nouns = parse_lexicon(read_file(dir / "proper_nouns.txt"));
  if (std::filesystem::exists(dir / "qad_exclusions.txt")) {
    lex.qad_exclusions = parse_lexicon(read_file(dir / "qad_exclusions.txt"));
  }
  lex.options = opts;
  lex.validate();
  return lex;
}

// Adds the entries of another lexicon directory; missing files are skipped.
inline void extend_lexicons(Lexicons& lex, const std::filesystem::path& dir) {
  using morpho_detail::read_file;
  auto merge = [&](std::unordered_set<std::string>& into, const char* name) {
    if (!std::filesystem::exists(dir / name)) return;
    auto more = parse_lexicon(read_file(dir / name));
    into.insert(more.begin(), more.end());
  };
  merge(lex.present_verbs, "present_verbs.txt");
  merge(lex.past_verbs, "past_verbs.txt");
  merge(lex.proper_nouns, "proper_nouns.txt");
  merge(lex.qad_exclusions, "qad_exclusions.txt");
  lex.validate();
}

// Removes at most one leading و or ف. A token that is only the conjunction
// is left alone.
inline std::pair<std::string, std::string> strip_clitics(std::string_view token) {
  for (const auto& c : {morpho_detail::kWaw, morpho_detail::kFa}) {
    if (utf8::starts_with(token, c) && token.size() > c.size()) {
      return {c, std::string(token.substr(c.size()))};
    }
  }
  return {"", std::string(token)};
}

// Verdict for a stem that has already lost its clitics.
inline Verdict analyze_stem(std::string_view stem, const Lexicons& lex) {
  std::string s(stem);
  if (lex.proper_nouns.count(s)) return Verdict::ProperNoun;
  if (lex.past_verbs.count(s)) return Verdict::PastVerb;
  if (utf8::ends_with(s, morpho_detail::kTa) &&
      lex.past_verbs.count(s.substr(0, s.size() - morpho_detail::kTa.size()))) {
    return Verdict::PastVerb;
  }
  if (lex.present_verbs.count(s)) return Verdict::PresentVerb;

  auto first = utf8::first(s);
  if (!first || !morpho_detail::imperfective_prefix(*first)) return Verdict::Other;
  auto rest = std::string_view(s).substr(utf8::first_length(s));
  if (utf8::count_code_points(rest) < lex.options.min_stem_letters) return Verdict::Other;
  if (lex.options.noun_suffix_guard &&
      (utf8::ends_with(s, morpho_detail::kTaMarbuta) || utf8::ends_with(s, morpho_detail::kAlifTa) ||
       utf8::ends_with(s, morpho_detail::kYaAlif))) {
    return Verdict::Other;
  }
  return Verdict::PresentVerb;
}

inline MorphVerdict analyze_token(std::string_view token, const Lexicons& lex) {
  MorphVerdict v;
  v.token = std::string(token);
  auto shadow = utf8::strip_marks(token);
  // A word that is itself listed keeps its leading و/ف (e.g. a verb whose
  // root starts with و).
  auto listed = [&](const std::string& w) {
    return lex.proper_nouns.count(w) || lex.past_verbs.count(w) || lex.present_verbs.count(w);
  };
  if (listed(shadow)) {
    v.stem = shadow;
  } else {
    auto [clitics, stem] = strip_clitics(shadow);
    v.stripped_clitics = std::move(clitics);
    v.stem = std::move(stem);
  }
  v.verdict = analyze_stem(v.stem, lex);
  return v;
}

// A س-prefixed imperfective verb, optionally behind a conjunction clitic.
inline bool is_future_verb_with_siin(std::string_view token, const Lexicons& lex) {
  auto shadow = utf8::strip_marks(token);
  if (lex.proper_nouns.count(shadow)) return false;
  auto [clitics, stem] = strip_clitics(shadow);
  if (lex.proper_nouns.count(stem)) return false;
  if (!utf8::starts_with(stem, morpho_detail::kSiin) || stem.size() == morpho_detail::kSiin.size()) {
    return false;
  }
  auto rest = stem.substr(morpho_detail::kSiin.size());
  return analyze_stem(rest, lex) == Verdict::PresentVerb;
}

}  // namespace slcsas
