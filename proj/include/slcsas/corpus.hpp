#pragma once

// Corpus construction: query strings from the keyword matrix, main-article
// extraction from raw HTML, and the three-part corpus file format.

#include <iconv.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <cstdint>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "slcsas/error.hpp"
#include "slcsas/utf8.hpp"

namespace slcsas {

struct RawPage {
  std::string source_url;
  std::string html;  // UTF-8
};

struct Document {
  std::string id;
  std::string url;
  std::string title;
  std::string body;

  bool operator==(const Document&) const = default;
};

struct QuerySeed {
  std::string keyword_ar;
  std::string keyword_en;
  std::string anchor = "لبنان";
};

struct ExtractOptions {
  std::size_t min_run_chars = 130;
};

namespace detail {

inline std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

inline bool iequals_at(std::string_view s, std::size_t pos, std::string_view lit) {
  if (pos + lit.size() > s.size()) return false;
  for (std::size_t i = 0; i < lit.size(); ++i) {
    char a = s[pos + i];
    if (a >= 'A' && a <= 'Z') a = static_cast<char>(a - 'A' + 'a');
    if (a != lit[i]) return false;
  }
  return true;
}

inline std::size_t ifind(std::string_view s, std::string_view lit, std::size_t from = 0) {
  for (std::size_t i = from; i + lit.size() <= s.size(); ++i) {
    if (iequals_at(s, i, lit)) return i;
  }
  return std::string_view::npos;
}

// Collapses every whitespace run to a single space and trims.
inline std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool pending = false;
  utf8::for_each(s, [&](const utf8::CodePoint& c) {
    if (utf8::is_space(c.value)) {
      pending = !out.empty();
      return;
    }
    if (pending) out += ' ';
    pending = false;
    out.append(s.substr(c.offset, c.length));
  });
  return out;
}

}  // namespace detail

// FNV-1a over the URL, as 16 lowercase hex digits.
inline std::string document_id(std::string_view url) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : url) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline Document make_document(std::string url, std::string title, std::string body) {
  Document d;
  d.id = document_id(url);
  d.url = std::move(url);
  d.title = std::move(title);
  d.body = std::move(body);
  return d;
}

// ---------------------------------------------------------------------------
// Queries

inline std::vector<std::string> build_query_list(const std::vector<QuerySeed>& seeds) {
  if (seeds.empty()) throw Error("no seeds");
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  out.reserve(seeds.size());
  for (const auto& seed : seeds) {
    auto keyword = detail::collapse_whitespace(seed.keyword_ar);
    if (keyword.empty()) throw Error("empty seed keyword");
    std::string q = keyword.find(' ') != std::string::npos ? "\"" + keyword + "\"" : keyword;
    q += ' ';
    q += seed.anchor;
    if (!seen.insert(q).second) throw Error("duplicate seed: " + keyword);
    out.push_back(std::move(q));
  }
  return out;
}

// Reads `keyword_ar<TAB>keyword_en` lines. Blank lines and `#` comments are
// skipped.
inline std::vector<QuerySeed> parse_seed_file(std::string_view text) {
  std::vector<QuerySeed> seeds;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto t = utf8::trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("expected keyword_ar<TAB>keyword_en", lineno);
    QuerySeed seed;
    seed.keyword_ar = std::string(utf8::trim(std::string_view(line).substr(0, tab)));
    seed.keyword_en = std::string(utf8::trim(std::string_view(line).substr(tab + 1)));
    bool arabic = false;
    utf8::for_each(seed.keyword_ar, [&](const utf8::CodePoint& c) {
      arabic = arabic || utf8::is_arabic_letter(c.value);
    });
    if (!arabic) throw ParseError("keyword_ar must be Arabic text", lineno);
    seeds.push_back(std::move(seed));
  }
  return seeds;
}

// ---------------------------------------------------------------------------
// Encoding

namespace detail {

inline std::string sniff_charset(std::string_view html) {
  auto head = html.substr(0, std::min<std::size_t>(html.size(), 4096));
  std::size_t pos = 0;
  while ((pos = ifind(head, "<meta", pos)) != std::string_view::npos) {
    auto end = head.find('>', pos);
    if (end == std::string_view::npos) break;
    auto tag = head.substr(pos, end - pos);
    auto cs = ifind(tag, "charset=");
    if (cs != std::string_view::npos) {
      std::size_t b = cs + 8;
      while (b < tag.size() && (tag[b] == '"' || tag[b] == '\'' || tag[b] == ' ')) ++b;
      std::size_t e = b;
      while (e < tag.size() && tag[e] != '"' && tag[e] != '\'' && tag[e] != ' ' &&
             tag[e] != ';' && tag[e] != '/') {
        ++e;
      }
      return to_lower_ascii(tag.substr(b, e - b));
    }
    pos = end;
  }
  return {};
}

inline std::string iconv_to_utf8(std::string_view bytes, const std::string& charset) {
  iconv_t cd = iconv_open("UTF-8", charset.c_str());
  if (cd == reinterpret_cast<iconv_t>(-1)) throw Error("unsupported charset: " + charset);
  std::string out;
  std::string in(bytes);
  char* inp = in.data();
  std::size_t inleft = in.size();
  std::array<char, 4096> buf;
  while (inleft > 0) {
    char* outp = buf.data();
    std::size_t outleft = buf.size();
    std::size_t rc = iconv(cd, &inp, &inleft, &outp, &outleft);
    out.append(buf.data(), buf.size() - outleft);
    if (rc == static_cast<std::size_t>(-1) && errno != E2BIG) {
      iconv_close(cd);
      throw Error("cannot decode page as " + charset);
    }
  }
  iconv_close(cd);
  return out;
}

}  // namespace detail

// Decodes raw page bytes to UTF-8. `declared` is the charset from transport
// headers, if any; otherwise the page's own <meta> declaration is used.
inline std::string normalize_to_utf8(std::string_view bytes, std::string declared = {}) {
  if (bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes.remove_prefix(3);
  std::string charset = declared.empty() ? detail::sniff_charset(bytes)
                                         : detail::to_lower_ascii(declared);
  std::string out;
  if (charset.empty() || charset == "utf-8" || charset == "utf8") {
    out.assign(bytes);
  } else {
    out = detail::iconv_to_utf8(bytes, charset);
  }
  if (!utf8::is_valid(out)) throw Error("page is not valid UTF-8");
  return out;
}

inline RawPage load_raw_page(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return RawPage{path.string(), normalize_to_utf8(ss.str())};
}

// ---------------------------------------------------------------------------
// Main-article extraction

namespace detail {

inline void decode_entity(std::string_view s, std::size_t& i, std::string& out) {
  struct Named {
    std::string_view name;
    char32_t cp;
  };
  static constexpr Named kNamed[] = {
      {"amp", '&'},      {"lt", '<'},        {"gt", '>'},        {"quot", '"'},
      {"apos", '\''},    {"nbsp", ' '},      {"laquo", 0x00AB},  {"raquo", 0x00BB},
      {"hellip", 0x2026}, {"ndash", 0x2013}, {"mdash", 0x2014},  {"lsquo", 0x2018},
      {"rsquo", 0x2019}, {"ldquo", 0x201C},  {"rdquo", 0x201D},  {"copy", 0x00A9},
      {"reg", 0x00AE},   {"zwnj", 0x200C},   {"zwj", 0x200D},    {"rlm", 0x200F},
      {"lrm", 0x200E},
  };
  auto semi = s.find(';', i);
  if (semi != std::string_view::npos && semi - i <= 10) {
    auto name = s.substr(i + 1, semi - i - 1);
    if (!name.empty() && name[0] == '#') {
      char32_t cp = 0;
      bool ok = name.size() > 1;
      bool hex = ok && (name[1] == 'x' || name[1] == 'X');
      for (std::size_t k = hex ? 2 : 1; ok && k < name.size(); ++k) {
        char c = name[k];
        int d = (c >= '0' && c <= '9')               ? c - '0'
                : hex && (c >= 'a' && c <= 'f')      ? c - 'a' + 10
                : hex && (c >= 'A' && c <= 'F')      ? c - 'A' + 10
                                                     : -1;
        if (d < 0) ok = false;
        cp = cp * (hex ? 16 : 10) + static_cast<char32_t>(d);
        if (cp > 0x10FFFF) ok = false;
      }
      if (ok && name.size() > (hex ? 2u : 1u) && cp != 0 &&
          !(cp >= 0xD800 && cp <= 0xDFFF)) {
        utf8::append(out, cp == 0xA0 ? char32_t{' '} : cp);
        i = semi + 1;
        return;
      }
    } else {
      for (const auto& n : kNamed) {
        if (n.name == name) {
          utf8::append(out, n.cp);
          i = semi + 1;
          return;
        }
      }
    }
  }
  out += '&';
  ++i;
}

inline std::string decode_entities(std::string_view s) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '&') {
      decode_entity(s, i, out);
    } else {
      out += s[i++];
    }
  }
  return out;
}

inline bool is_inline_tag(std::string_view name) {
  static constexpr std::string_view kInline[] = {
      "a", "abbr", "b", "bdi", "bdo", "cite", "code", "em", "font", "i", "kbd",
      "mark", "q", "s", "samp", "small", "span", "strong", "sub", "sup", "time",
      "u", "var", "wbr"};
  return std::find(std::begin(kInline), std::end(kInline), name) != std::end(kInline);
}

// Characters that may appear inside a main-article run, besides letters,
// digits and whitespace.
inline bool is_run_punct(char32_t c) {
  switch (c) {
    case '.': case ',': case utf8::kArabicComma: case utf8::kArabicSemicolon:
    case utf8::kArabicQuestion: case '!': case '"': case '\'': case '(':
    case ')': case '%': case ':': case 0x2013: case '-':
      return true;
    default:
      return false;
  }
}

inline bool is_run_char(char32_t c) {
  return utf8::is_word_char(c) || utf8::is_digit(c) || utf8::is_space(c) ||
         is_run_punct(c);
}

// Splits one text block into maximal runs and keeps the long ones.
inline void collect_runs(std::string_view block, std::size_t min_chars,
                         std::vector<std::string>& out) {
  std::size_t run_start = 0;
  bool in_run = false;
  int newlines = 0;  // consecutive newlines, ignoring other whitespace
  auto flush = [&](std::size_t end) {
    if (!in_run) return;
    in_run = false;
    auto [b, e] = utf8::trim_range(block, run_start, end);
    if (b >= e) return;
    auto run = block.substr(b, e - b);
    if (utf8::count_code_points(run) >= min_chars) out.emplace_back(run);
  };
  utf8::for_each(block, [&](const utf8::CodePoint& c) {
    if (c.value == '\n') {
      if (++newlines >= 2) flush(c.offset);
    } else if (!utf8::is_space(c.value)) {
      newlines = 0;
    }
    if (is_run_char(c.value)) {
      if (!in_run) {
        in_run = true;
        run_start = c.offset;
      }
    } else {
      flush(c.offset);
    }
  });
  flush(block.size());
}

}  // namespace detail

struct ExtractedArticle {
  std::string title;
  std::string body;
};

inline std::string extract_title(std::string_view html) {
  auto open = detail::ifind(html, "<title");
  if (open == std::string_view::npos) return {};
  auto gt = html.find('>', open);
  if (gt == std::string_view::npos) return {};
  auto close = detail::ifind(html, "</title", gt);
  if (close == std::string_view::npos) return {};
  return detail::collapse_whitespace(detail::decode_entities(html.substr(gt + 1, close - gt - 1)));
}

// Text blocks of the page: block-level tags split blocks, inline tags are
// dropped, <br> becomes a newline, script and style contents are skipped.
inline std::vector<std::string> html_text_blocks(std::string_view html) {
  std::vector<std::string> blocks;
  std::string current;
  std::string pending_text;
  bool pending_space = false;
  auto flush_text = [&] {
    if (pending_text.empty()) return;
    auto decoded = detail::decode_entities(pending_text);
    pending_text.clear();
    utf8::for_each(decoded, [&](const utf8::CodePoint& c) {
      if (utf8::is_space(c.value)) {
        pending_space = true;
        return;
      }
      if (pending_space && !current.empty() && current.back() != '\n') current += ' ';
      pending_space = false;
      current.append(std::string_view(decoded).substr(c.offset, c.length));
    });
  };
  auto end_block = [&] {
    flush_text();
    if (!utf8::trim(current).empty()) blocks.push_back(current);
    current.clear();
    pending_space = false;
  };

  std::size_t i = 0;
  while (i < html.size()) {
    if (html[i] != '<') {
      auto next = html.find('<', i);
      if (next == std::string_view::npos) next = html.size();
      pending_text.append(html.substr(i, next - i));
      i = next;
      continue;
    }
    if (html.substr(i, 4) == "<!--") {
      auto end = html.find("-->", i + 4);
      i = end == std::string_view::npos ? html.size() : end + 3;
      continue;
    }
    std::size_t j = i + 1;
    bool closing = j < html.size() && html[j] == '/';
    if (closing) ++j;
    std::size_t name_start = j;
    while (j < html.size() && (std::isalnum(static_cast<unsigned char>(html[j])) || html[j] == '-')) ++j;
    if (j == name_start && !(j < html.size() && (html[j] == '!' || html[j] == '?'))) {
      // A bare '<' that does not open a tag; it is not a run character so it
      // still ends the current run.
      pending_text += html[i];
      ++i;
      continue;
    }
    auto name = detail::to_lower_ascii(html.substr(name_start, j - name_start));
    // Find the end of the tag, honouring quoted attribute values.
    char quote = 0;
    while (j < html.size()) {
      char c = html[j];
      if (quote) {
        if (c == quote) quote = 0;
      } else if (c == '"' || c == '\'') {
        quote = c;
      } else if (c == '>') {
        break;
      }
      ++j;
    }
    std::size_t tag_end = j < html.size() ? j + 1 : html.size();
    if (!closing && (name == "script" || name == "style")) {
      auto close = detail::ifind(html, "</" + name, tag_end);
      if (close == std::string_view::npos) {
        i = html.size();
      } else {
        auto gt = html.find('>', close);
        i = gt == std::string_view::npos ? html.size() : gt + 1;
      }
      end_block();
      continue;
    }
    if (name == "br") {
      flush_text();
      current += '\n';
      pending_space = false;
    } else if (!detail::is_inline_tag(name)) {
      end_block();
    } else {
      flush_text();
    }
    i = tag_end;
  }
  end_block();
  return blocks;
}

// Raises Error("no main content") when no run reaches the threshold.
inline ExtractedArticle extract_main_article(const RawPage& page, const ExtractOptions& opts = {}) {
  ExtractedArticle a;
  a.title = extract_title(page.html);
  std::vector<std::string> runs;
  for (const auto& block : html_text_blocks(page.html)) {
    detail::collect_runs(block, opts.min_run_chars, runs);
  }
  if (runs.empty()) throw Error("no main content");
  for (std::size_t k = 0; k < runs.size(); ++k) {
    if (k) a.body += '\n';
    a.body += runs[k];
  }
  return a;
}

inline Document page_to_document(const RawPage& page, const ExtractOptions& opts = {}) {
  auto article = extract_main_article(page, opts);
  return make_document(page.source_url, std::move(article.title), std::move(article.body));
}

// Keeps the first of each group of documents whose bodies are identical after
// whitespace normalization.
inline std::vector<Document> deduplicate(std::vector<Document> docs) {
  std::unordered_set<std::string> seen;
  std::vector<Document> out;
  for (auto& d : docs) {
    if (seen.insert(detail::collapse_whitespace(d.body)).second) out.push_back(std::move(d));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Corpus file format

namespace detail {

// A body line starting with optional spaces then "URL: " gets one extra
// leading space on write; parse removes it.
inline bool needs_escape(std::string_view line) {
  std::size_t k = 0;
  while (k < line.size() && line[k] == ' ') ++k;
  return line.substr(k, 5) == "URL: ";
}

}  // namespace detail

inline std::string compile_corpus_file(const Document& doc) {
  if (doc.url.find('\n') != std::string::npos || doc.title.find('\n') != std::string::npos) {
    throw Error("url and title must be single-line");
  }
  std::string out = "URL: " + doc.url + "\nTITLE: " + doc.title + "\n\n";
  std::size_t pos = 0;
  while (true) {
    auto nl = doc.body.find('\n', pos);
    auto line = std::string_view(doc.body).substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
    if (detail::needs_escape(line)) out += ' ';
    out.append(line);
    if (nl == std::string::npos) break;
    out += '\n';
    pos = nl + 1;
  }
  out += '\n';
  return out;
}

inline Document parse_corpus_file(std::string_view text) {
  auto take_line = [&](std::size_t& pos) -> std::optional<std::string_view> {
    if (pos > text.size()) return std::nullopt;
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) return std::nullopt;
    auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    return line;
  };
  std::size_t pos = 0;
  auto url_line = take_line(pos);
  auto title_line = take_line(pos);
  auto blank = take_line(pos);
  if (!url_line || url_line->substr(0, 5) != "URL: " || !title_line ||
      (title_line->substr(0, 7) != "TITLE: " && *title_line != "TITLE:") || !blank ||
      !blank->empty()) {
    throw Error("malformed corpus file");
  }
  auto rest = text.substr(pos);
  if (!rest.empty() && rest.back() == '\n') rest.remove_suffix(1);
  std::string body;
  std::size_t p = 0;
  while (true) {
    auto nl = rest.find('\n', p);
    auto line = rest.substr(p, nl == std::string_view::npos ? std::string_view::npos : nl - p);
    if (detail::needs_escape(line) && line.front() == ' ') line.remove_prefix(1);
    body.append(line);
    if (nl == std::string_view::npos) break;
    body += '\n';
    p = nl + 1;
  }
  auto title = title_line->size() > 7 ? title_line->substr(7) : std::string_view{};
  return make_document(std::string(url_line->substr(5)), std::string(title), std::move(body));
}

inline Document load_corpus_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_corpus_file(ss.str());
}

// All `*.corpus.txt` files of a directory, sorted by document id.
inline std::vector<Document> load_corpus_dir(const std::filesystem::path& dir) {
  std::vector<Document> docs;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    auto name = entry.path().filename().string();
    if (entry.is_regular_file() && utf8::ends_with(name, ".corpus.txt")) {
      docs.push_back(load_corpus_file(entry.path()));
    }
  }
  std::sort(docs.begin(), docs.end(), [](const Document& a, const Document& b) { return a.id < b.id; });
  return docs;
}

}  // namespace slcsas
