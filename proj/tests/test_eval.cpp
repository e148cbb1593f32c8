#include <gtest/gtest.h>

#include "slcsas/eval.hpp"
#include "support.hpp"

using namespace slcsas;

namespace {

// Gold distribution of the 200-file evaluation corpus and the false
// positives that give the reference precisions.
const std::map<std::string, std::size_t> kGoldCounts = {{"qad", 64},        {"sin", 450},         {"lan", 93},
                                                        {"sawfa", 26},      {"participle", 47},   {"past_verb", 32},
                                                        {"present_verb", 31}};
const std::map<std::string, std::size_t> kFalsePositives = {{"qad", 4}, {"sin", 13}, {"sawfa", 2}};

struct Synthetic {
  std::vector<GoldAnnotation> gold;
  std::set<Triple> predicted;
};

// One triple per sentence.
Synthetic synthetic_evaluation() {
  Synthetic s;
  std::size_t sentence = 0;
  for (const auto& [label, n] : kGoldCounts) {
    for (std::size_t i = 0; i < n; ++i) {
      Triple t{"doc" + std::to_string(sentence % 200), sentence, label};
      ++sentence;
      s.gold.push_back(t);
      s.predicted.insert(t);
    }
  }
  for (const auto& [label, n] : kFalsePositives) {
    for (std::size_t i = 0; i < n; ++i) {
      s.predicted.insert({"doc" + std::to_string(sentence % 200), sentence, label});
      ++sentence;
    }
  }
  return s;
}

std::set<Triple> random_triples(support::Rng& rng, std::size_t max) {
  std::set<Triple> out;
  auto n = rng() % (max + 1);
  for (std::size_t i = 0; i < n; ++i) {
    out.insert({"d" + std::to_string(rng() % 3), rng() % 6, support::pick(rng, evaluation_classes())});
  }
  return out;
}

std::vector<GoldAnnotation> as_vector(const std::set<Triple>& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST(LoadGold, ParsesRowsAndComments) {
  auto g = load_gold("# header\nabc\t0\tqad\r\n\nabc\t12\tsin\n");
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0], (GoldAnnotation{"abc", 0, "qad"}));
  EXPECT_EQ(g[1], (GoldAnnotation{"abc", 12, "sin"}));
}

TEST(LoadGold, Errors) {
  try {
    load_gold("a\t0\tqad\na\t1\tfuture\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_STREQ(e.what(), "unknown class label future at line 2");
  }
  EXPECT_THROW(load_gold("a\t0\tqad\na\t0\tqad\n"), ParseError);
  EXPECT_THROW(load_gold("a\tx\tqad\n"), ParseError);
  EXPECT_THROW(load_gold("a\t0\n"), ParseError);
}

TEST(LoadGold, RoundTrip) {
  support::Rng rng(4);
  for (int n = 0; n < 50; ++n) {
    auto g = as_vector(random_triples(rng, 20));
    EXPECT_EQ(load_gold(serialize_gold(g)), g);
  }
}

TEST(LoadGold, BundledMiniGold) {
  auto g = load_gold(support::read(support::data() / "mini_gold/gold.tsv"));
  EXPECT_EQ(g.size(), 11u);
  auto d = distribution(g);
  EXPECT_EQ(d["sin"], 3u);
  EXPECT_EQ(d["total"], 11u);
}

TEST(Percent, TruncatesToHundredths) {
  EXPECT_EQ(Percent::of(64, 68).str(), "94.11");
  EXPECT_EQ(Percent::of(26, 28).str(), "92.85");
  EXPECT_EQ(Percent::of(743, 762).str(), "97.50");
  EXPECT_EQ(Percent::of(450, 463).str(), "97.19");
  EXPECT_EQ(Percent::of(1, 1).str(), "100.00");
  EXPECT_EQ(Percent::of(0, 5).str(), "0.00");
  EXPECT_EQ(Percent::of(1, 3).str(), "33.33");
}

TEST(Score, ReferenceFigures) {
  auto s = synthetic_evaluation();
  ASSERT_EQ(s.gold.size(), 743u);
  ASSERT_EQ(s.predicted.size(), 762u);
  auto r = score(s.predicted, s.gold);
  EXPECT_EQ(r.overall.precision()->str(), "97.50");
  EXPECT_EQ(r.overall.recall()->str(), "100.00");
  EXPECT_EQ(r.overall.fp, 19u);
  EXPECT_EQ(r.per_class["qad"].precision()->str(), "94.11");
  EXPECT_EQ(r.per_class["sin"].precision()->str(), "97.19");
  EXPECT_EQ(r.per_class["sawfa"].precision()->str(), "92.85");
  for (const auto& c : {"lan", "participle", "past_verb", "present_verb"}) {
    EXPECT_EQ(r.per_class[c].precision()->str(), "100.00") << c;
  }
  for (const auto& c : evaluation_classes()) EXPECT_EQ(r.per_class[c].recall()->str(), "100.00") << c;
}

TEST(Distribution, ReferenceCounts) {
  auto s = synthetic_evaluation();
  auto d = distribution(s.gold);
  EXPECT_EQ(d["total"], 743u);
  for (const auto& [label, n] : kGoldCounts) EXPECT_EQ(d[label], n);
  auto table = format_distribution_table(s.gold);
  EXPECT_NE(table.find("Introduced with \"قد\""), std::string::npos);
  EXPECT_NE(table.find("743"), std::string::npos);
}

TEST(Score, EmptySetsAreUndefined) {
  auto r = score(std::set<Triple>{}, {});
  EXPECT_FALSE(r.overall.precision());
  EXPECT_FALSE(r.overall.recall());
  EXPECT_NE(format_results_table(r).find("n/a"), std::string::npos);
  auto only_gold = score(std::set<Triple>{}, {{"d", 0, "qad"}});
  EXPECT_FALSE(only_gold.overall.precision());
  EXPECT_EQ(only_gold.overall.recall()->str(), "0.00");
}

TEST(Score, CountsDeduplicatedTriples) {
  Annotation a;
  a.doc_id = "d";
  a.sentence_index = 0;
  a.class_label = "sin";
  auto r = score(std::vector<Annotation>{a, a}, {{"d", 0, "sin"}});
  EXPECT_EQ(r.overall.tp, 1u);
  EXPECT_EQ(r.overall.fp, 0u);
  EXPECT_EQ(r.predicted_future, 1u);
}

TEST(Score, MatchesDirectCount) {
  support::Rng rng(10);
  for (int n = 0; n < 500; ++n) {
    auto p = random_triples(rng, 25), g = random_triples(rng, 25);
    auto r = score(p, as_vector(g));
    std::map<std::string, Counts> want;
    for (const auto& t : p) ++(g.count(t) ? want[t.class_label].tp : want[t.class_label].fp);
    for (const auto& t : g) {
      if (!p.count(t)) ++want[t.class_label].fn;
    }
    for (const auto& c : evaluation_classes()) {
      const auto& k = r.per_class[c];
      EXPECT_EQ(k, want[c]) << c;
      if (k.tp + k.fp) {
        EXPECT_EQ(k.precision()->hundredths, static_cast<std::int64_t>(k.tp * 10000 / (k.tp + k.fp)));
      }
    }
    EXPECT_EQ(r.overall.tp + r.overall.fp, p.size());
    EXPECT_EQ(r.overall.tp + r.overall.fn, g.size());
  }
}

TEST(Score, SwappingRolesSwapsMetrics) {
  support::Rng rng(12);
  for (int n = 0; n < 200; ++n) {
    auto p = random_triples(rng, 20), g = random_triples(rng, 20);
    auto a = score(p, as_vector(g)), b = score(g, as_vector(p));
    EXPECT_EQ(a.overall.precision(), b.overall.recall());
    EXPECT_EQ(a.overall.recall(), b.overall.precision());
  }
}

TEST(Score, Monotonicity) {
  support::Rng rng(14);
  for (int n = 0; n < 200; ++n) {
    auto p = random_triples(rng, 20), g = random_triples(rng, 20);
    if (g.empty()) continue;
    auto base = score(p, as_vector(g));
    // predicting one more gold triple never lowers recall
    auto more = p;
    more.insert(*std::next(g.begin(), static_cast<std::ptrdiff_t>(rng() % g.size())));
    EXPECT_GE(score(more, as_vector(g)).overall.recall()->hundredths, base.overall.recall()->hundredths);
    // a triple outside the gold never raises precision
    auto noisy = p;
    noisy.insert({"elsewhere", 99, "qad"});
    auto np = score(noisy, as_vector(g)).overall.precision();
    if (base.overall.precision()) {
      EXPECT_LE(np->hundredths, base.overall.precision()->hundredths);
    }
  }
}
