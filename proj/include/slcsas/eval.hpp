#pragma once

// Sentence-level scoring against gold (document, sentence, class) triples.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "slcsas/engine.hpp"
#include "slcsas/error.hpp"

namespace slcsas {

inline const std::vector<std::string>& evaluation_classes() {
  static const std::vector<std::string> kClasses = {
      "qad", "sin", "lan", "sawfa", "participle", "past_verb", "present_verb"};
  return kClasses;
}

inline std::string class_description(const std::string& label) {
  static const std::map<std::string, std::string> kNames = {
      {"qad", "Introduced with \"قد\""},
      {"sin", "Introduced with \"س\" prefixed to a verb"},
      {"lan", "Introduced with \"لن\""},
      {"sawfa", "Introduced with \"سوف\""},
      {"participle", "Introduced with passive participles"},
      {"past_verb", "Introduced with verbs in the past"},
      {"present_verb", "Introduced with verbs in the present"},
  };
  auto it = kNames.find(label);
  return it == kNames.end() ? label : it->second;
}

struct GoldAnnotation {
  std::string doc_id;
  std::size_t sentence_index = 0;
  std::string class_label;

  auto operator<=>(const GoldAnnotation&) const = default;
};

using Triple = GoldAnnotation;

// `doc_id<TAB>sentence_index<TAB>class_label` lines, `#` comments.
inline std::vector<GoldAnnotation> load_gold(std::string_view text) {
  const auto& classes = evaluation_classes();
  std::vector<GoldAnnotation> out;
  std::set<GoldAnnotation> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto t = utf8::trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss{std::string(t)};
    std::string col;
    while (std::getline(ss, col, '\t')) cols.push_back(col);
    if (cols.size() != 3) throw ParseError("expected 3 tab-separated columns", lineno);
    GoldAnnotation g;
    g.doc_id = std::string(utf8::trim(cols[0]));
    auto idx = utf8::trim(cols[1]);
    if (idx.empty() || !std::all_of(idx.begin(), idx.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw ParseError("invalid sentence index", lineno);
    }
    g.sentence_index = std::stoul(std::string(idx));
    g.class_label = std::string(utf8::trim(cols[2]));
    if (std::find(classes.begin(), classes.end(), g.class_label) == classes.end()) {
      throw ParseError("unknown class label " + g.class_label, lineno);
    }
    if (!seen.insert(g).second) throw ParseError("duplicate gold annotation", lineno);
    out.push_back(std::move(g));
  }
  return out;
}

inline std::string serialize_gold(const std::vector<GoldAnnotation>& gold) {
  std::string out;
  for (const auto& g : gold) {
    out += g.doc_id + '\t' + std::to_string(g.sentence_index) + '\t' + g.class_label + '\n';
  }
  return out;
}

// Distinct (document, sentence, class) triples of a set of annotations.
inline std::set<Triple> to_triples(const std::vector<Annotation>& annotations) {
  std::set<Triple> out;
  for (const auto& a : annotations) out.insert({a.doc_id, a.sentence_index, a.class_label});
  return out;
}

// Percentage with two decimals, truncated: 64/68 -> 94.11, 743/762 -> 97.50.
// Stored as hundredths of a percent so printing is exact.
struct Percent {
  std::int64_t hundredths = 0;

  static Percent of(std::uint64_t num, std::uint64_t den) {
    return Percent{static_cast<std::int64_t>(num * 10000 / den)};
  }
  double value() const { return static_cast<double>(hundredths) / 100.0; }
  std::string str() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld.%02lld", static_cast<long long>(hundredths / 100),
                  static_cast<long long>(hundredths % 100));
    return buf;
  }
  bool operator==(const Percent&) const = default;
};

struct Counts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  // Undefined (nullopt) when there were no predictions.
  std::optional<Percent> precision() const {
    if (tp + fp == 0) return std::nullopt;
    return Percent::of(tp, tp + fp);
  }
  // Undefined (nullopt) when there is no gold.
  std::optional<Percent> recall() const {
    if (tp + fn == 0) return std::nullopt;
    return Percent::of(tp, tp + fn);
  }
  bool operator==(const Counts&) const = default;
};

struct EvalReport {
  std::map<std::string, Counts> per_class;
  Counts overall;
  std::size_t sentences = 0;         // segmented sentences, when known
  std::size_t predicted_future = 0;  // predicted triples
  std::size_t gold_future = 0;       // gold triples
};

inline EvalReport score(const std::set<Triple>& predicted, const std::vector<GoldAnnotation>& gold_list) {
  std::set<Triple> gold(gold_list.begin(), gold_list.end());
  EvalReport r;
  for (const auto& c : evaluation_classes()) r.per_class[c];
  for (const auto& p : predicted) {
    auto& c = r.per_class[p.class_label];
    (gold.count(p) ? c.tp : c.fp) += 1;
  }
  for (const auto& g : gold) {
    if (!predicted.count(g)) r.per_class[g.class_label].fn += 1;
  }
  for (const auto& [label, c] : r.per_class) {
    r.overall.tp += c.tp;
    r.overall.fp += c.fp;
    r.overall.fn += c.fn;
  }
  r.predicted_future = predicted.size();
  r.gold_future = gold.size();
  return r;
}

inline EvalReport score(const std::vector<Annotation>& predicted, const std::vector<GoldAnnotation>& gold) {
  return score(to_triples(predicted), gold);
}

// Gold count per class, plus "total".
inline std::map<std::string, std::size_t> distribution(const std::vector<GoldAnnotation>& gold) {
  std::map<std::string, std::size_t> out;
  for (const auto& c : evaluation_classes()) out[c] = 0;
  std::size_t total = 0;
  for (const auto& g : gold) {
    ++out[g.class_label];
    ++total;
  }
  out["total"] = total;
  return out;
}

namespace eval_detail {

inline std::string pad(const std::string& s, std::size_t width) {
  auto n = utf8::count_code_points(s);
  return s + std::string(n < width ? width - n : 0, ' ');
}

inline std::string pct(const std::optional<Percent>& p) { return p ? p->str() : "n/a"; }

}  // namespace eval_detail

inline std::string format_distribution_table(const std::vector<GoldAnnotation>& gold) {
  using eval_detail::pad;
  auto dist = distribution(gold);
  std::string out = pad("Future sentence class", 44) + "Number\n";
  for (const auto& c : evaluation_classes()) {
    out += pad(class_description(c), 44) + std::to_string(dist[c]) + '\n';
  }
  out += pad("Total", 44) + std::to_string(dist["total"]) + '\n';
  return out;
}

inline std::string format_results_table(const EvalReport& r) {
  using eval_detail::pad;
  using eval_detail::pct;
  std::string out = pad("Future sentence class", 44) + pad("Precision", 11) + "Recall\n";
  for (const auto& c : evaluation_classes()) {
    const auto& k = r.per_class.at(c);
    out += pad(class_description(c), 44) + pad(pct(k.precision()), 11) + pct(k.recall()) + '\n';
  }
  out += pad("Overall", 44) + pad(pct(r.overall.precision()), 11) + pct(r.overall.recall()) + '\n';
  return out;
}

}  // namespace slcsas
