#pragma once

// Single-file HTML reports: extracted sentences grouped by category, with
// positive markers on a yellow background, negative-marker search fields in
// red (the marker is shown on hover), and excerpts underlined.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "slcsas/corpus.hpp"
#include "slcsas/engine.hpp"
#include "slcsas/error.hpp"
#include "slcsas/eval.hpp"

namespace slcsas {

class RenderError : public Error {
 public:
  using Error::Error;
};

struct ReportOptions {
  // Draw every negative-marker field, not only those of rules that also
  // matched the sentence elsewhere.
  bool show_all_negative_fields = false;
  std::string generated_at;
};

struct RenderedSentence {
  std::size_t index = 0;
  std::vector<std::string> classes;
  std::string html;  // inner markup of the sentence
};

struct ReportPage {
  std::string doc_id;
  std::string title;
  std::string url;
  std::vector<std::pair<std::string, std::vector<RenderedSentence>>> groups;  // by category
  std::map<std::string, std::size_t> class_counts;  // annotations per class
  std::size_t annotation_count = 0;
  std::string generated_at;
};

inline std::string html_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

namespace report_detail {

struct Styled {
  Span span;
  enum Kind { Positive, Excerpt, Negative } kind;
  std::string title;  // negative fields only
};

inline void check_span(const Span& s, std::string_view text) {
  auto on_boundary = [&](std::size_t p) {
    return p == text.size() || (static_cast<unsigned char>(text[p]) & 0xC0) != 0x80;
  };
  if (s.begin > s.end || s.end > text.size() || !on_boundary(s.begin) || !on_boundary(s.end)) {
    throw RenderError("span [" + std::to_string(s.begin) + ", " + std::to_string(s.end) +
                      ") outside sentence of " + std::to_string(text.size()) + " bytes");
  }
}

inline std::string render_sentence(std::string_view text, const std::vector<Styled>& styles) {
  std::set<std::size_t> cuts{0, text.size()};
  for (const auto& s : styles) {
    cuts.insert(s.span.begin);
    cuts.insert(s.span.end);
  }
  struct Piece {
    std::size_t begin, end;
    bool positive, excerpt;
    std::string negative;  // joined hover text; empty = not in a red field
  };
  std::vector<Piece> pieces;
  for (auto it = cuts.begin(); std::next(it) != cuts.end(); ++it) {
    std::size_t a = *it, b = *std::next(it);
    if (a == b) continue;
    Piece p{a, b, false, false, {}};
    std::vector<std::string> titles;
    for (const auto& s : styles) {
      if (s.span.begin > a || s.span.end < b) continue;
      if (s.kind == Styled::Positive) p.positive = true;
      if (s.kind == Styled::Excerpt) p.excerpt = true;
      if (s.kind == Styled::Negative && std::find(titles.begin(), titles.end(), s.title) == titles.end()) {
        titles.push_back(s.title);
      }
    }
    for (const auto& t : titles) p.negative += (p.negative.empty() ? "" : "; ") + t;
    if (!pieces.empty() && pieces.back().positive == p.positive && pieces.back().excerpt == p.excerpt &&
        pieces.back().negative == p.negative) {
      pieces.back().end = b;
    } else {
      pieces.push_back(std::move(p));
    }
  }
  std::string out;
  for (const auto& p : pieces) {
    std::string open, close;
    if (!p.negative.empty()) {
      open += "<span class=\"neg\" title=\"" + html_escape("negative marker: " + p.negative) + "\">";
      close = "</span>" + close;
    }
    if (p.excerpt) {
      open += "<span class=\"excerpt\">";
      close = "</span>" + close;
    }
    if (p.positive) {
      open += "<span class=\"pos\">";
      close = "</span>" + close;
    }
    out += open + html_escape(text.substr(p.begin, p.end - p.begin)) + close;
  }
  return out;
}

inline const char* kStyle =
    "body { font-family: 'Noto Naskh Arabic', 'Arial', sans-serif; line-height: 1.9; margin: 2em; }\n"
    "header { border-bottom: 1px solid #ccc; margin-bottom: 1em; }\n"
    ".source, .generated { direction: ltr; text-align: left; color: #555; font-size: 0.85em; }\n"
    ".pos { background-color: yellow; }\n"
    ".neg { background-color: #ffb3b3; }\n"
    ".excerpt { text-decoration: underline; }\n"
    ".no-matches { color: #777; }\n"
    "table { border-collapse: collapse; }\n"
    "td, th { border: 1px solid #ccc; padding: 0.2em 0.6em; }\n";

inline std::string page_head(std::string_view title) {
  return "<!DOCTYPE html>\n<html lang=\"ar\" dir=\"rtl\">\n<head>\n<meta charset=\"utf-8\">\n<title>" +
         html_escape(title) + "</title>\n<style>\n" + kStyle + "</style>\n</head>\n<body>\n";
}

}  // namespace report_detail

// Groups a document's annotations by category and renders each annotated
// sentence. Throws RenderError if a span falls outside its sentence.
inline ReportPage build_report_page(const Document& doc, const std::vector<Sentence>& sentences,
                                    const std::vector<Annotation>& annotations,
                                    const std::vector<RejectionTrace>& traces,
                                    const ReportOptions& opts = {}) {
  using report_detail::Styled;
  ReportPage page;
  page.doc_id = doc.id;
  page.title = doc.title;
  page.url = doc.url;
  page.generated_at = opts.generated_at;
  page.annotation_count = annotations.size();

  std::map<std::size_t, const Sentence*> by_index;
  for (const auto& s : sentences) by_index[s.index] = &s;

  std::vector<std::string> category_order;
  std::map<std::string, std::map<std::size_t, std::vector<const Annotation*>>> grouped;
  std::map<std::size_t, std::set<std::string>> rules_on_sentence;
  for (const auto& a : annotations) {
    if (!by_index.count(a.sentence_index)) {
      throw RenderError("annotation references missing sentence " + std::to_string(a.sentence_index));
    }
    const auto& text = by_index[a.sentence_index]->text;
    if (a.positive_marker_spans.empty()) throw RenderError("annotation without positive markers");
    for (const auto& s : a.positive_marker_spans) report_detail::check_span(s, text);
    if (a.excerpt_span) report_detail::check_span(*a.excerpt_span, text);
    if (!grouped.count(a.category)) category_order.push_back(a.category);
    grouped[a.category][a.sentence_index].push_back(&a);
    rules_on_sentence[a.sentence_index].insert(a.rule_id);
    ++page.class_counts[a.class_label];
  }

  for (const auto& category : category_order) {
    std::vector<RenderedSentence> rendered;
    for (const auto& [index, anns] : grouped[category]) {
      const auto& text = by_index[index]->text;
      std::vector<Styled> styles;
      RenderedSentence rs;
      rs.index = index;
      for (const auto* a : anns) {
        for (const auto& s : a->positive_marker_spans) styles.push_back({s, Styled::Positive, {}});
        if (a->excerpt_span) styles.push_back({*a->excerpt_span, Styled::Excerpt, {}});
        if (std::find(rs.classes.begin(), rs.classes.end(), a->class_label) == rs.classes.end()) {
          rs.classes.push_back(a->class_label);
        }
      }
      for (const auto& t : traces) {
        if (t.sentence_index != index || t.reason != RejectReason::NegativeFound || !t.negative_field_span) continue;
        if (!opts.show_all_negative_fields && !rules_on_sentence[index].count(t.rule_id)) continue;
        report_detail::check_span(*t.negative_field_span, text);
        styles.push_back({*t.negative_field_span, Styled::Negative, t.negative_marker});
      }
      rs.html = report_detail::render_sentence(text, styles);
      rendered.push_back(std::move(rs));
    }
    page.groups.emplace_back(category, std::move(rendered));
  }
  return page;
}

inline std::string render_html(const ReportPage& page) {
  std::string label = page.title.empty() ? page.url : page.title;
  std::string out = report_detail::page_head(label);
  out += "<header>\n<h1><a href=\"" + html_escape(page.url) + "\">" + html_escape(label) + "</a></h1>\n";
  out += "<p class=\"source\">" + html_escape(page.url) + "</p>\n";
  if (!page.generated_at.empty()) {
    out += "<p class=\"generated\">Generated " + html_escape(page.generated_at) + "</p>\n";
  }
  out += "</header>\n";
  if (page.groups.empty()) out += "<p class=\"no-matches\">No matches.</p>\n";
  for (const auto& [category, sentences] : page.groups) {
    out += "<section class=\"category\">\n<h2>" + html_escape(category) + "</h2>\n<ol>\n";
    for (const auto& s : sentences) {
      std::string classes;
      for (const auto& c : s.classes) classes += (classes.empty() ? "" : " ") + c;
      out += "<li value=\"" + std::to_string(s.index + 1) + "\" data-classes=\"" + html_escape(classes) +
             "\">" + s.html + "</li>\n";
    }
    out += "</ol>\n</section>\n";
  }
  out += "</body>\n</html>\n";
  return out;
}

inline std::string render_html(const Document& doc, const std::vector<Sentence>& sentences,
                               const std::vector<Annotation>& annotations,
                               const std::vector<RejectionTrace>& traces, const ReportOptions& opts = {}) {
  return render_html(build_report_page(doc, sentences, annotations, traces, opts));
}

// Index of all per-document reports, one row per document in id order with
// annotation counts per class. Links are relative to the index file.
inline std::string render_index(std::vector<const ReportPage*> pages, const std::string& generated_at = {}) {
  std::sort(pages.begin(), pages.end(), [](const ReportPage* a, const ReportPage* b) { return a->doc_id < b->doc_id; });
  std::vector<std::string> classes = evaluation_classes();
  for (const auto* p : pages) {
    for (const auto& [c, n] : p->class_counts) {
      if (std::find(classes.begin(), classes.end(), c) == classes.end()) classes.push_back(c);
    }
  }
  std::string out = report_detail::page_head("Results");
  out += "<header>\n<h1>Results</h1>\n";
  if (!generated_at.empty()) out += "<p class=\"generated\">Generated " + html_escape(generated_at) + "</p>\n";
  out += "</header>\n<table>\n<thead><tr><th>Document</th>";
  for (const auto& c : classes) out += "<th>" + html_escape(c) + "</th>";
  out += "<th>total</th></tr></thead>\n<tbody>\n";
  std::size_t total = 0;
  for (const auto* p : pages) {
    std::string label = p->title.empty() ? p->url : p->title;
    out += "<tr data-doc=\"" + html_escape(p->doc_id) + "\"><td><a href=\"" + html_escape(p->doc_id) +
           ".html\">" + html_escape(label) + "</a></td>";
    for (const auto& c : classes) {
      auto it = p->class_counts.find(c);
      out += "<td>" + std::to_string(it == p->class_counts.end() ? 0 : it->second) + "</td>";
    }
    out += "<td>" + std::to_string(p->annotation_count) + "</td></tr>\n";
    total += p->annotation_count;
  }
  out += "</tbody>\n<tfoot><tr><td>" + std::to_string(pages.size()) + " documents</td>";
  for (const auto& c : classes) {
    std::size_t n = 0;
    for (const auto* p : pages) {
      auto it = p->class_counts.find(c);
      if (it != p->class_counts.end()) n += it->second;
    }
    out += "<td>" + std::to_string(n) + "</td>";
  }
  out += "<td>" + std::to_string(total) + "</td></tr></tfoot>\n</table>\n</body>\n</html>\n";
  return out;
}

inline std::string render_index(const std::vector<ReportPage>& pages, const std::string& generated_at = {}) {
  std::vector<const ReportPage*> ptrs;
  for (const auto& p : pages) ptrs.push_back(&p);
  return render_index(std::move(ptrs), generated_at);
}

}  // namespace slcsas
