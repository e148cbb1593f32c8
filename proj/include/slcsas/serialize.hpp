#pragma once

// JSON forms of annotations (one object per line) and evaluation reports.

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "slcsas/engine.hpp"
#include "slcsas/eval.hpp"

namespace slcsas {

using ordered_json = nlohmann::ordered_json;

inline ordered_json to_json(const Span& s) { return ordered_json::array({s.begin, s.end}); }

inline ordered_json to_json(const Annotation& a) {
  ordered_json j;
  j["doc_id"] = a.doc_id;
  j["sentence_index"] = a.sentence_index;
  j["rule_id"] = a.rule_id;
  j["category"] = a.category;
  j["class_label"] = a.class_label;
  j["positive_marker_spans"] = ordered_json::array();
  for (const auto& s : a.positive_marker_spans) j["positive_marker_spans"].push_back(to_json(s));
  j["excerpt_span"] = a.excerpt_span ? to_json(*a.excerpt_span) : ordered_json(nullptr);
  return j;
}

inline std::string to_jsonl(const std::vector<Annotation>& annotations) {
  std::string out;
  for (const auto& a : annotations) out += to_json(a).dump() + '\n';
  return out;
}

inline Annotation annotation_from_json(const nlohmann::json& j) {
  auto span = [](const nlohmann::json& v) {
    if (!v.is_array() || v.size() != 2) throw Error("span must be a [start, end] pair");
    return Span{v[0].get<std::size_t>(), v[1].get<std::size_t>()};
  };
  Annotation a;
  a.doc_id = j.at("doc_id").get<std::string>();
  a.sentence_index = j.at("sentence_index").get<std::size_t>();
  a.rule_id = j.at("rule_id").get<std::string>();
  a.category = j.at("category").get<std::string>();
  a.class_label = j.at("class_label").get<std::string>();
  for (const auto& s : j.at("positive_marker_spans")) a.positive_marker_spans.push_back(span(s));
  if (j.contains("excerpt_span") && !j.at("excerpt_span").is_null()) a.excerpt_span = span(j.at("excerpt_span"));
  return a;
}

inline std::vector<Annotation> parse_jsonl(std::string_view text) {
  std::vector<Annotation> out;
  std::size_t pos = 0;
  std::size_t lineno = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++lineno;
    if (utf8::trim(line).empty()) continue;
    try {
      out.push_back(annotation_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("invalid annotation: ") + e.what(), lineno);
    }
  }
  return out;
}

inline ordered_json to_json(const Counts& c) {
  auto pct = [](const std::optional<Percent>& p) { return p ? ordered_json(p->value()) : ordered_json(nullptr); };
  ordered_json j;
  j["tp"] = c.tp;
  j["fp"] = c.fp;
  j["fn"] = c.fn;
  j["precision"] = pct(c.precision());
  j["recall"] = pct(c.recall());
  return j;
}

// Precision and recall are percentages with two decimals; null when
// undefined.
inline ordered_json to_json(const EvalReport& r) {
  ordered_json j;
  j["per_class"] = ordered_json::object();
  for (const auto& c : evaluation_classes()) j["per_class"][c] = to_json(r.per_class.at(c));
  for (const auto& [label, c] : r.per_class) {
    if (!j["per_class"].contains(label)) j["per_class"][label] = to_json(c);
  }
  j["overall"] = to_json(r.overall);
  j["totals"] = {{"sentences", r.sentences},
                 {"predicted_future", r.predicted_future},
                 {"gold_future", r.gold_future}};
  return j;
}

}  // namespace slcsas
