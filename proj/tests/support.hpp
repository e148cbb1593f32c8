#pragma once

// Shared fixtures and random generators for the test programs.

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "slcsas/config.hpp"
#include "slcsas/engine.hpp"
#include "slcsas/morpho.hpp"

namespace support {

inline std::filesystem::path data() { return SLCSAS_DEFAULT_DATA_DIR; }
inline std::filesystem::path fixtures() { return SLCSAS_TEST_FIXTURES; }

inline std::string read(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const slcsas::RuleSet& bundled_rules() {
  static const auto rs = slcsas::load_rule_set(data() / "rules_future_ar.txt", data() / "variables_ar.txt",
                                               data() / "semantic_map.txt");
  return rs;
}

inline const slcsas::Lexicons& bundled_lexicons() {
  static const auto lex = slcsas::load_lexicons(data() / "lexicon");
  return lex;
}

// The eight worked example sentences, in order, with the classes each one
// is expected to carry.
struct Example {
  std::string text;
  std::vector<std::string> classes;
};

inline std::vector<Example> worked_examples() {
  auto doc = slcsas::load_corpus_file(data() / "mini_gold/corpus/f550d036fa76a06b.corpus.txt");
  std::vector<std::string> lines;
  std::istringstream in(doc.body);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  std::vector<std::vector<std::string>> classes = {
      {"qad", "lan"}, {"sin"}, {"lan"}, {"sawfa", "sin"}, {"participle"}, {"participle"}, {"past_verb"},
      {"present_verb", "sin"}};
  std::vector<Example> out;
  for (std::size_t i = 0; i < lines.size(); ++i) out.push_back({lines[i], classes.at(i)});
  return out;
}

// ---------------------------------------------------------------------------
// Generators

using Rng = std::mt19937_64;

inline const std::string& pick(Rng& rng, const std::vector<std::string>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline std::string random_arabic_word(Rng& rng, std::size_t min_len = 1, std::size_t max_len = 7) {
  static const std::vector<std::string> letters = {
      "ا", "ب", "ت", "ث", "ج", "ح", "خ", "د", "ذ", "ر", "ز", "س", "ش", "ص", "ض", "ط", "ظ",
      "ع", "غ", "ف", "ق", "ك", "ل", "م", "ن", "ه", "و", "ي", "ة", "أ", "إ", "ى", "ئ", "ؤ"};
  std::size_t n = std::uniform_int_distribution<std::size_t>(min_len, max_len)(rng);
  std::string w;
  for (std::size_t i = 0; i < n; ++i) w += pick(rng, letters);
  return w;
}

// Text exercising every segmentation trigger, decimals, spaces of several
// kinds and punctuation next to boundaries.
inline std::string random_text(Rng& rng) {
  static const std::vector<std::string> seps = {" ", " ", " ", "  ", "\t", "\n", "\n\n", "\xC2\xA0", " \n "};
  static const std::vector<std::string> marks = {".", "؟", "!", "،", ":", "\"", "(", ")", "..", ".\"", "?"};
  std::string out;
  if (coin(rng, 0.2)) out += pick(rng, seps);
  std::size_t n = std::uniform_int_distribution<std::size_t>(0, 40)(rng);
  for (std::size_t i = 0; i < n; ++i) {
    switch (std::uniform_int_distribution<int>(0, 9)(rng)) {
      case 0: out += std::to_string(rng() % 100) + "." + std::to_string(rng() % 10); break;
      case 1: out += pick(rng, marks); break;
      case 2: out += "1.5 في المائة"; break;
      default: out += random_arabic_word(rng);
    }
    if (coin(rng, 0.85)) out += pick(rng, seps);
  }
  if (coin(rng, 0.3)) out += pick(rng, marks);
  return out;
}

// Sentences built from templates around the bundled markers, with clitics,
// distractor nouns, names that look like verbs, and punctuation.
inline std::string random_marker_sentence(Rng& rng) {
  static const std::vector<std::string> clitic = {"", "", "و", "ف"};
  static const std::vector<std::string> particles = {"قد", "لن", "سوف", "قد", "لن"};
  static const std::vector<std::string> present = {
      "يترتب", "تؤدي", "يتعرض", "تتزايد", "يواجهه", "تستخدم", "نلحظ", "يكون", "يعود", "تجد"};
  static const std::vector<std::string> past = {"درس", "قلصت", "كان", "توقع", "توقعت", "استبعد", "ارتقبت"};
  static const std::vector<std::string> siin = {
      "سيوفر", "ستجلب", "سيؤثر", "ستنطلق", "سيجري", "سنمنح", "ستتضمن", "سيمون", "سويسرا", "سيشيل",
      "سافر", "سندات", "سنوية", "سنويا", "سوريا", "سلبا", "سيد"};
  static const std::vector<std::string> participles = {
      "ممكن", "متوقع", "مرجح", "مرتقب", "مرجو", "مستبعد", "محتمل", "متوقعا", "مستبعدا", "متوقف"};
  static const std::vector<std::string> present_pred = {
      "يتوقع", "نتوقع", "أتوقع", "اتوقع", "يستبعد", "يرجح", "يرجو", "ترجح", "يتوقعون"};
  static const std::vector<std::string> nouns = {
      "لبنان", "الاقتصاد", "المصرف", "الحكومة", "الموازنة", "طاولة", "النمو", "الليرة", "الدين", "من",
      "ال", "المرجح", "الممكن", "سوق", "قدرة", "لنا", "سوفت", "قدم"};
  static const std::vector<std::string> punct = {"،", ":", "\"", "(", ")", "؛", "-"};

  std::string out;
  std::size_t n = std::uniform_int_distribution<std::size_t>(1, 14)(rng);
  for (std::size_t i = 0; i < n; ++i) {
    if (!out.empty()) out += coin(rng, 0.9) ? " " : "  ";
    switch (std::uniform_int_distribution<int>(0, 11)(rng)) {
      case 0:
      case 1:
        out += pick(rng, clitic) + pick(rng, particles);
        if (coin(rng, 0.2)) out += " " + pick(rng, punct);
        out += " " + pick(rng, coin(rng, 0.7) ? present : past);
        break;
      case 2: out += pick(rng, clitic) + pick(rng, siin); break;
      case 3:
        if (coin(rng)) out += pick(rng, clitic) + "من" + (coin(rng, 0.2) ? " \" " : " ") + "ال";
        else out += pick(rng, clitic);
        out += pick(rng, participles);
        break;
      case 4: out += pick(rng, clitic) + pick(rng, past); break;
      case 5: out += pick(rng, clitic) + pick(rng, present_pred); break;
      case 6: out += pick(rng, punct); break;
      case 7: out += std::to_string(rng() % 2030); break;
      default: out += pick(rng, nouns);
    }
  }
  return out;
}

// A synthetic news document of about `sentences` sentences.
inline std::string random_document_body(Rng& rng, std::size_t sentences) {
  std::string body;
  for (std::size_t i = 0; i < sentences; ++i) {
    if (i) body += coin(rng, 0.8) ? " " : "\n";
    body += random_marker_sentence(rng);
    body += coin(rng, 0.85) ? "." : "؟";
  }
  return body;
}

}  // namespace support
