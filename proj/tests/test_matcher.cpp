#include <gtest/gtest.h>

#include "oracle.hpp"
#include "slcsas/matcher.hpp"
#include "support.hpp"

using namespace slcsas;

namespace {

VariableTable bundled_vars() { return parse_variable_defs(support::read(support::data() / "variables_ar.txt")); }

MarkerPattern compiled(const std::string& text) { return expand(parse_pattern(text), bundled_vars()); }

struct Probe {
  std::vector<Token> tokens;
  TokenStream ts;
  Probe(const std::string& text, bool strict = false) : tokens(tokenize(text)), ts(tokens, strict) {}
};

std::optional<std::string> matched_text(const std::string& pattern, const std::string& text,
                                        bool strict = false) {
  Probe p(text, strict);
  auto m = Matcher(compiled(pattern)).find(p.ts, 0, p.ts.size());
  if (!m) return std::nullopt;
  auto sp = p.ts.span_of(m->first, m->last);
  return text.substr(sp.begin, sp.size());
}

// Largest end item of any expansion laid on the stream at `start`, or none.
std::optional<std::size_t> oracle_match_at(const std::set<std::string>& exps, bool open_tail,
                                           const std::vector<const Token*>& items, std::size_t start) {
  std::optional<std::size_t> best;
  for (const auto& e : exps) {
    auto words = oracle::split_words(e);
    if (words.empty() || !oracle::words_at(words, items, start, open_tail)) continue;
    std::size_t end = start + words.size() - 1;
    if (!best || end > *best) best = end;
  }
  return best;
}

void expect_agrees(const MarkerPattern& pattern, const std::set<std::string>& exps, const std::string& text) {
  auto tokens = tokenize(text);
  TokenStream ts(tokens, false);
  std::vector<const Token*> items;
  for (auto i : ts.items) items.push_back(&tokens[i]);
  Matcher m(pattern);
  for (std::size_t start = 0; start < ts.size(); ++start) {
    auto got = m.match_at(ts, start, ts.size());
    auto want = oracle_match_at(exps, pattern.open_tail, items, start);
    ASSERT_EQ(got.has_value(), want.has_value()) << to_string(pattern) << " on " << text << " @" << start;
    if (got) {
      EXPECT_EQ(got->last, *want) << to_string(pattern) << " on " << text;
    }
  }
}

// Small alphabet: random strings often hit random patterns.
const std::vector<std::string> kLetters = {"ا", "ب", "ت"};

std::string random_literal(support::Rng& rng) {
  std::string s = support::pick(rng, kLetters);
  if (support::coin(rng)) s += support::pick(rng, kLetters);
  return s;
}

std::string random_sequence(support::Rng& rng, int depth);

std::string random_element(support::Rng& rng, int depth) {
  if (depth <= 0 || support::coin(rng, 0.55)) return random_literal(rng);
  std::string g = "(";
  int alts = 1 + static_cast<int>(rng() % 3);
  for (int a = 0; a < alts; ++a) g += (a ? "|" : "") + random_sequence(rng, depth - 1);
  g += ")";
  if (support::coin(rng, 0.4)) g += "؟";
  return g;
}

std::string random_sequence(support::Rng& rng, int depth) {
  int n = 1 + static_cast<int>(rng() % 3);
  std::string s;
  for (int i = 0; i < n; ++i) {
    if (i) s += support::coin(rng, 0.35) ? " " : "";
    s += random_element(rng, depth);
  }
  return s;
}

std::string random_words(support::Rng& rng) {
  int n = 1 + static_cast<int>(rng() % 4);
  std::string s;
  for (int i = 0; i < n; ++i) {
    if (i) s += ' ';
    int len = 1 + static_cast<int>(rng() % 4);
    for (int k = 0; k < len; ++k) s += support::pick(rng, kLetters);
  }
  return s;
}

}  // namespace

TEST(Matcher, SawfaWithClitic) {
  EXPECT_EQ(matched_text("(و|ف)؟سوف", "وسوف يكون"), "وسوف");
  EXPECT_EQ(matched_text("(و|ف)؟سوف", "سوف يكون"), "سوف");
  EXPECT_EQ(matched_text("(و|ف)؟سوف", "فسوف"), "فسوف");
  EXPECT_EQ(matched_text("(و|ف)؟سوف", "بسوف"), std::nullopt);
  EXPECT_EQ(matched_text("(و|ف)؟سوف", "سوفت"), std::nullopt);
}

TEST(Matcher, ParticipleSpansTwoTokens) {
  EXPECT_EQ(matched_text("::اسم_مفعول", "ومن المتوقع أن"), "ومن المتوقع");
  EXPECT_EQ(matched_text("::اسم_مفعول", "من المرجح أن"), "من المرجح");
  EXPECT_EQ(matched_text("::اسم_مفعول", "ممكنا"), "ممكنا");
  EXPECT_EQ(matched_text("::اسم_مفعول", "المتوقع"), std::nullopt);
}

TEST(Matcher, GreedyLongestAtTheLeftmostStart) {
  Probe p("من المتوقع");
  Matcher m(compiled("(من)؟ (من ال)؟متوقع"));
  auto r = m.find(p.ts, 0, p.ts.size());
  ASSERT_TRUE(r);
  EXPECT_EQ(r->first, 0u);
  EXPECT_EQ(r->last, 1u);
  EXPECT_EQ(matched_text("(ا|اب)", "اب"), "اب");
}

TEST(Matcher, DiacriticsAreIgnored) {
  EXPECT_EQ(matched_text("::اسم_مفعول", "متوقعاً"), "متوقعاً");
  EXPECT_EQ(matched_text("قد", "قَدْ يكون"), "قَدْ");
}

TEST(Matcher, GluedPatternNeverCrossesWhitespace) {
  EXPECT_EQ(matched_text("وقد", "و قد"), std::nullopt);
  EXPECT_EQ(matched_text("(و|ف)؟سوف", "و سوف"), "سوف");
}

TEST(Matcher, OpenTailNeedsMoreLetters) {
  EXPECT_EQ(matched_text("::فعل_مضارع_س", "سيوفر"), "سيوفر");
  EXPECT_EQ(matched_text("::فعل_مضارع_س", "وسيوفر"), "وسيوفر");
  EXPECT_EQ(matched_text("::فعل_مضارع_س", "س"), std::nullopt);
}

TEST(Matcher, PunctuationIsTransparentUnlessStrict) {
  EXPECT_EQ(matched_text("::اسم_مفعول", "من، المتوقع"), "من، المتوقع");
  EXPECT_EQ(matched_text("::اسم_مفعول", "من، المتوقع", true), std::nullopt);
  EXPECT_EQ(matched_text("::اسم_مفعول", "من المتوقع", true), "من المتوقع");
}

TEST(Matcher, LimitBoundsTheMatch) {
  Probe p("من المتوقع");
  Matcher m(compiled("::اسم_مفعول"));
  EXPECT_FALSE(m.match_at(p.ts, 0, 1));
  EXPECT_TRUE(m.match_at(p.ts, 0, 2));
  EXPECT_FALSE(m.find(p.ts, 2, 2));
}

TEST(Matcher, IsDeterministic) {
  support::Rng rng(3);
  auto pattern = compiled("::اسم_مفعول");
  for (int n = 0; n < 50; ++n) {
    auto text = support::random_marker_sentence(rng);
    Probe p(text);
    Matcher a(pattern), b(pattern);
    EXPECT_EQ(a.find(p.ts, 0, p.ts.size()), b.find(p.ts, 0, p.ts.size()));
  }
}

TEST(TokenStream, FieldEndCountsWords) {
  Probe p("ا 12 ب ج د");
  EXPECT_EQ(p.ts.field_end(0, 0), 5u);
  EXPECT_EQ(p.ts.field_end(0, 2), 3u);
  EXPECT_EQ(p.ts.field_end(1, 1), 3u);
  EXPECT_EQ(p.ts.field_end(2, 10), 5u);
}

// Every bundled pattern against its own expansions and near misses.
TEST(ExpansionSoundness, BundledPatterns) {
  support::Rng rng(42);
  std::size_t checked = 0;
  for (const auto& cr : support::bundled_rules().rules) {
    for (const auto& form : cr.rule.forms) {
      auto exps = oracle::expansions(form.expanded);
      ASSERT_LT(exps.size(), 10000u);
      std::set<std::string> candidates;
      for (const auto& e : exps) {
        candidates.insert(e);
        candidates.insert("ذلك " + e + " جدا");
        candidates.insert("ب" + e);
        candidates.insert(e + "ه");
        std::size_t cut = e.size();
        while (cut > 0 && (static_cast<unsigned char>(e[--cut]) & 0xC0) == 0x80) {
        }
        if (cut > 0) candidates.insert(e.substr(0, cut));
        candidates.insert(e + " " + support::random_arabic_word(rng));
      }
      for (const auto& c : candidates) {
        expect_agrees(form.expanded, exps, c);
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 100u);
}

TEST(ExpansionSoundness, RandomPatterns) {
  support::Rng rng(2017);
  int patterns = 0;
  while (patterns < 300) {
    auto text = random_sequence(rng, 2);
    if (support::coin(rng, 0.2)) text += "*";
    MarkerPattern p;
    try {
      p = expand(parse_pattern(text), {});
    } catch (const Error&) {
      continue;
    }
    ++patterns;
    EXPECT_EQ(parse_pattern(to_string(p)), p) << text;
    auto exps = oracle::expansions(p);
    for (const auto& e : exps) {
      expect_agrees(p, exps, e);
      expect_agrees(p, exps, e + "ا");
    }
    for (int k = 0; k < 30; ++k) expect_agrees(p, exps, random_words(rng));
  }
}
