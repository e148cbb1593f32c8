#pragma once

// Executes a variable-free MarkerPattern against a sentence's tokens.
//
// Matching runs over a token stream: the sentence's Word and Digit tokens, and
// its Punct tokens as well when strict adjacency is on. A match state is a
// (stream item, byte offset into that item's shadow) pair. Glued joins keep
// the offset; a Spaced join moves from the end of one item to the start of the
// next. Every alternative is followed in parallel, and the longest match at a
// start position wins.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "slcsas/rule_language.hpp"
#include "slcsas/segmenter.hpp"
#include "slcsas/utf8.hpp"

namespace slcsas {

struct TokenStream {
  std::span<const Token> tokens;
  std::vector<std::size_t> items;  // indices into tokens

  TokenStream(std::span<const Token> toks, bool strict_adjacency) : tokens(toks) {
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (strict_adjacency || toks[i].kind != TokenKind::Punct) items.push_back(i);
    }
  }

  std::size_t size() const { return items.size(); }
  const Token& at(std::size_t item) const { return tokens[items[item]]; }

  // End (exclusive) of a field starting at `begin` that holds at most `words`
  // Word tokens; 0 means unbounded.
  std::size_t field_end(std::size_t begin, std::size_t words) const {
    if (words == 0) return size();
    std::size_t seen = 0;
    for (std::size_t k = begin; k < size(); ++k) {
      if (at(k).kind == TokenKind::Word && ++seen == words) return k + 1;
    }
    return size();
  }

  // Byte span covering stream items [first, last].
  Span span_of(std::size_t first, std::size_t last) const {
    return {at(first).span.begin, at(last).span.end};
  }
};

struct MatchResult {
  std::size_t first = 0;  // stream items, inclusive
  std::size_t last = 0;
  bool operator==(const MatchResult&) const = default;
};

class Matcher {
 public:
  explicit Matcher(const MarkerPattern& expanded) : pattern_(normalize(expanded)) {}

  // Longest match that starts exactly at `start` and ends before `limit`.
  std::optional<MatchResult> match_at(const TokenStream& ts, std::size_t start,
                                      std::size_t limit) const {
    limit = std::min(limit, ts.size());
    if (start >= limit) return std::nullopt;
    Ctx ctx{ts, limit};
    auto states = run(ctx, pattern_.seq, {State{start, 0}});
    std::optional<std::size_t> best;
    for (const auto& s : states) {
      std::optional<std::size_t> end;
      if (pattern_.open_tail) {
        // a tail after a space is a whole further word
        if (s.item < limit && (s.offset == 0 ? s.item > start : s.offset < ts.at(s.item).shadow.size())) {
          end = s.item;
        }
      } else if (s.item < limit && s.offset == ts.at(s.item).shadow.size()) {
        end = s.item;
      } else if (s.offset == 0 && s.item > start) {
        end = s.item - 1;
      }
      if (end && (!best || *end > *best)) best = end;
    }
    if (!best) return std::nullopt;
    return MatchResult{start, *best};
  }

  // Leftmost-longest match with start in [begin, limit).
  std::optional<MatchResult> find(const TokenStream& ts, std::size_t begin, std::size_t limit) const {
    for (std::size_t k = begin; k < std::min(limit, ts.size()); ++k) {
      if (auto m = match_at(ts, k, limit)) return m;
    }
    return std::nullopt;
  }

  const MarkerPattern& pattern() const { return pattern_; }

 private:
  struct State {
    std::size_t item;
    std::size_t offset;
    auto operator<=>(const State&) const = default;
  };
  struct Ctx {
    const TokenStream& ts;
    std::size_t limit;
  };
  using States = std::vector<State>;

  // Literals compare against diacritic-free shadows.
  static MarkerPattern normalize(MarkerPattern p) {
    auto fix = [](auto&& self, Sequence& seq) -> void {
      for (auto& e : seq.elements) {
        if (auto* lit = std::get_if<Literal>(&e)) {
          lit->text = utf8::strip_marks(lit->text);
        } else if (auto* g = std::get_if<Group>(&e)) {
          for (auto& alt : g->alternatives) self(self, alt);
        }
      }
    };
    fix(fix, p.seq);
    return p;
  }

  static void dedupe(States& s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }

  static States run(const Ctx& ctx, const Sequence& seq, States states) {
    for (std::size_t i = 0; i < seq.elements.size() && !states.empty(); ++i) {
      if (i > 0 && seq.joins[i - 1] == Join::Spaced) states = space(ctx, states);
      states = element(ctx, seq.elements[i], std::move(states));
    }
    return states;
  }

  static States space(const Ctx& ctx, const States& in) {
    States out;
    for (const auto& s : in) {
      if (s.offset == 0) {
        out.push_back(s);  // already at a word start (an empty optional was skipped)
      } else if (s.item < ctx.limit && s.offset == ctx.ts.at(s.item).shadow.size()) {
        out.push_back({s.item + 1, 0});
      }
    }
    dedupe(out);
    return out;
  }

  static States element(const Ctx& ctx, const Element& e, States in) {
    States out;
    if (const auto* lit = std::get_if<Literal>(&e)) {
      for (const auto& s : in) {
        if (s.item >= ctx.limit) continue;
        const auto& shadow = ctx.ts.at(s.item).shadow;
        if (shadow.compare(s.offset, lit->text.size(), lit->text) == 0 &&
            s.offset + lit->text.size() <= shadow.size()) {
          out.push_back({s.item, s.offset + lit->text.size()});
        }
      }
    } else if (const auto* g = std::get_if<Group>(&e)) {
      for (const auto& alt : g->alternatives) {
        auto r = run(ctx, alt, in);
        out.insert(out.end(), r.begin(), r.end());
      }
      if (g->optional) out.insert(out.end(), in.begin(), in.end());
    }
    dedupe(out);
    return out;
  }

  MarkerPattern pattern_;
};

}  // namespace slcsas
