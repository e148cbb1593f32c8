#pragma once

// Applies linguistic rules to sentences.
//
// A rule's forms are tested in order. The first form searches the whole
// sentence; after each positive match the next form searches only what
// follows it, optionally capped to N words. A missing positive form or a
// present negative form rejects the rule. Every occurrence of the first
// positive form is tried, so one rule can annotate a sentence several times.

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "slcsas/corpus.hpp"
#include "slcsas/matcher.hpp"
#include "slcsas/morpho.hpp"
#include "slcsas/rule_language.hpp"
#include "slcsas/segmenter.hpp"

namespace slcsas {

struct Annotation {
  std::string doc_id;
  std::size_t sentence_index = 0;
  std::string rule_id;
  std::string category;
  std::string class_label;
  std::vector<Span> positive_marker_spans;  // bytes within Sentence::text
  std::optional<Span> excerpt_span;
  bool operator==(const Annotation&) const = default;
};

enum class RejectReason { PositiveNotFound, NegativeFound, MorphRejected };

inline const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::PositiveNotFound: return "PositiveNotFound";
    case RejectReason::NegativeFound: return "NegativeFound";
    default: return "MorphRejected";
  }
}

struct RejectionTrace {
  std::string doc_id;
  std::size_t sentence_index = 0;
  std::string rule_id;
  std::size_t failed_form_index = 0;
  RejectReason reason = RejectReason::PositiveNotFound;
  std::optional<Span> negative_field_span;  // set for NegativeFound
  std::string negative_marker;              // pattern text of the negative form
  bool operator==(const RejectionTrace&) const = default;
};

using MatchOutcome = std::variant<Annotation, RejectionTrace>;

// A rule set with its matchers compiled once.
struct CompiledRule {
  LinguisticRule rule;
  std::vector<Matcher> matchers;  // one per form

  explicit CompiledRule(LinguisticRule r) : rule(std::move(r)) {
    for (const auto& f : rule.forms) matchers.emplace_back(f.expanded);
  }
};

struct RuleSet {
  VariableTable variables;
  std::vector<SemanticCategory> categories;
  std::vector<CompiledRule> rules;

  static RuleSet from_text(std::string_view rules_text, std::string_view variables_text,
                           std::string_view semantic_map_text, const RuleParseOptions& opts = {}) {
    RuleSet rs;
    rs.variables = parse_variable_defs(variables_text);
    rs.categories = parse_semantic_map(semantic_map_text);
    for (auto& r : parse_rules(rules_text, rs.variables, rs.categories, opts)) {
      rs.rules.emplace_back(std::move(r));
    }
    return rs;
  }
};

struct EngineOptions {
  Boundaries boundaries;
  bool strict_adjacency = false;
};

struct SentenceResult {
  std::vector<Annotation> annotations;
  std::vector<RejectionTrace> traces;
};

struct DocumentResult {
  std::vector<Sentence> sentences;
  std::vector<Annotation> annotations;
  std::vector<RejectionTrace> traces;
};

namespace engine_detail {

struct Attempt {
  std::optional<Annotation> annotation;
  std::optional<RejectionTrace> trace;
};

inline RejectionTrace make_trace(const CompiledRule& cr, const Sentence& s, std::size_t form,
                                 RejectReason reason) {
  RejectionTrace t;
  t.doc_id = s.doc_id;
  t.sentence_index = s.index;
  t.rule_id = cr.rule.id;
  t.failed_form_index = form;
  t.reason = reason;
  return t;
}

// Runs the forms after the first positive one has been placed at `anchor`.
inline Attempt try_from(const CompiledRule& cr, std::size_t first_positive, const MatchResult& anchor,
                        const Sentence& sentence, const TokenStream& ts, const Lexicons& lex) {
  const auto& forms = cr.rule.forms;
  Attempt out;
  std::vector<Span> spans{ts.span_of(anchor.first, anchor.last)};
  MatchResult last_positive = anchor;
  std::size_t field_begin = anchor.last + 1;

  for (std::size_t i = first_positive + 1; i < forms.size(); ++i) {
    const auto& form = forms[i];
    std::size_t field_end = ts.field_end(field_begin, form.search_field_words);
    auto m = cr.matchers[i].find(ts, field_begin, field_end);
    if (form.polarity == Polarity::Negative) {
      if (m) {
        auto t = make_trace(cr, sentence, i, RejectReason::NegativeFound);
        t.negative_field_span = ts.span_of(field_begin, field_end - 1);
        t.negative_marker = to_string(form.pattern);
        out.trace = std::move(t);
        return out;
      }
      continue;
    }
    if (!m) {
      out.trace = make_trace(cr, sentence, i, RejectReason::PositiveNotFound);
      return out;
    }
    spans.push_back(ts.span_of(m->first, m->last));
    last_positive = *m;
    field_begin = m->last + 1;
  }

  if (cr.rule.morph == MorphCheck::Siin) {
    const auto& tok = ts.at(last_positive.last);
    if (last_positive.first != last_positive.last || !is_future_verb_with_siin(tok.shadow, lex)) {
      out.trace = make_trace(cr, sentence, forms.size() - 1, RejectReason::MorphRejected);
      return out;
    }
  } else if (cr.rule.morph == MorphCheck::Qad) {
    std::size_t next = last_positive.last + 1;
    bool ok = next < ts.size() && ts.at(next).kind == TokenKind::Word &&
              !lex.qad_exclusions.count(ts.at(next).shadow) &&
              analyze_token(ts.at(next).shadow, lex).verdict == Verdict::PresentVerb;
    if (!ok) {
      out.trace = make_trace(cr, sentence, forms.size() - 1, RejectReason::MorphRejected);
      return out;
    }
    spans.push_back(ts.at(next).span);
  }

  Annotation a;
  a.doc_id = sentence.doc_id;
  a.sentence_index = sentence.index;
  a.rule_id = cr.rule.id;
  a.category = cr.rule.category;
  a.class_label = cr.rule.class_label;
  a.positive_marker_spans = std::move(spans);
  if (cr.rule.extract == ExtractMode::FromMarkerToEnd) {
    a.excerpt_span = Span{a.positive_marker_spans.front().begin, sentence.text.size()};
  }
  out.annotation = std::move(a);
  return out;
}

}  // namespace engine_detail

// All annotations a rule produces on a sentence, plus the traces of the
// attempts that failed. When nothing matched, exactly one trace explains why.
inline SentenceResult match_rule_all(const CompiledRule& cr, const Sentence& sentence,
                                     std::span<const Token> tokens, const Lexicons& lex,
                                     const EngineOptions& opts = {}) {
  using namespace engine_detail;
  SentenceResult out;
  TokenStream ts(tokens, opts.strict_adjacency);
  const auto& forms = cr.rule.forms;

  std::size_t first_positive = 0;
  while (forms[first_positive].polarity == Polarity::Negative) ++first_positive;

  // Negative forms ahead of the first positive one search the whole sentence.
  for (std::size_t i = 0; i < first_positive; ++i) {
    std::size_t field_end = ts.field_end(0, forms[i].search_field_words);
    if (cr.matchers[i].find(ts, 0, field_end)) {
      auto t = make_trace(cr, sentence, i, RejectReason::NegativeFound);
      t.negative_field_span = ts.span_of(0, field_end - 1);
      t.negative_marker = to_string(forms[i].pattern);
      out.traces.push_back(std::move(t));
      return out;
    }
  }

  const auto& matcher = cr.matchers[first_positive];
  std::size_t field_end = ts.field_end(0, forms[first_positive].search_field_words);
  std::size_t pos = 0;
  bool any_candidate = false;
  while (auto m = matcher.find(ts, pos, field_end)) {
    any_candidate = true;
    auto attempt = try_from(cr, first_positive, *m, sentence, ts, lex);
    if (attempt.annotation) {
      out.annotations.push_back(std::move(*attempt.annotation));
      pos = m->last + 1;
    } else {
      out.traces.push_back(std::move(*attempt.trace));
      pos = m->first + 1;
    }
  }
  if (!any_candidate) {
    out.traces.push_back(make_trace(cr, sentence, first_positive, RejectReason::PositiveNotFound));
  }
  return out;
}

// The first annotation of the rule on the sentence, or the trace of the first
// failed attempt.
inline MatchOutcome match_rule(const CompiledRule& cr, const Sentence& sentence,
                               std::span<const Token> tokens, const Lexicons& lex,
                               const EngineOptions& opts = {}) {
  auto r = match_rule_all(cr, sentence, tokens, lex, opts);
  if (!r.annotations.empty()) return std::move(r.annotations.front());
  return std::move(r.traces.front());
}

inline SentenceResult classify_sentence(const Sentence& sentence, std::span<const Token> tokens,
                                        const RuleSet& rules, const Lexicons& lex,
                                        const EngineOptions& opts = {}) {
  SentenceResult out;
  for (const auto& cr : rules.rules) {
    auto r = match_rule_all(cr, sentence, tokens, lex, opts);
    for (auto& a : r.annotations) out.annotations.push_back(std::move(a));
    for (auto& t : r.traces) out.traces.push_back(std::move(t));
  }
  return out;
}

inline DocumentResult analyze_document(const Document& doc, const RuleSet& rules, const Lexicons& lex,
                                       const EngineOptions& opts = {}) {
  DocumentResult out;
  out.sentences = segment(doc.body, opts.boundaries, doc.id);
  for (const auto& s : out.sentences) {
    auto tokens = tokenize(s.text);
    auto r = classify_sentence(s, tokens, rules, lex, opts);
    for (auto& a : r.annotations) out.annotations.push_back(std::move(a));
    for (auto& t : r.traces) out.traces.push_back(std::move(t));
  }
  return out;
}

// Loads rules, variables and semantic map files.
inline RuleSet load_rule_set(const std::filesystem::path& rules_path,
                             const std::filesystem::path& variables_path,
                             const std::filesystem::path& semantic_map_path,
                             const RuleParseOptions& opts = {}) {
  auto read = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  return RuleSet::from_text(read(rules_path), read(variables_path), read(semantic_map_path), opts);
}

}  // namespace slcsas
