// slcsas: corpus ingestion, future-expression analysis and evaluation.
//
//   slcsas ingest  --input <html-dir | url-list> --out <corpus-dir>
//   slcsas analyze --corpus <corpus-dir> --out <out-dir>
//   slcsas eval    --gold <tsv> (--corpus <dir> | --annotations <jsonl>) [--report out.json]
//
// Exit codes: 0 success, 1 empty result, 2 usage or parse error.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "slcsas/config.hpp"
#include "slcsas/corpus.hpp"
#include "slcsas/engine.hpp"
#include "slcsas/eval.hpp"
#include "slcsas/fetch.hpp"
#include "slcsas/pipeline.hpp"
#include "slcsas/report.hpp"
#include "slcsas/serialize.hpp"

namespace fs = std::filesystem;
using namespace slcsas;

namespace {

constexpr int kOk = 0;
constexpr int kEmpty = 1;
constexpr int kUsage = 2;

struct UsageError : Error {
  using Error::Error;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw UsageError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw UsageError("cannot write " + p.string());
  out << content;
  if (!out) throw UsageError("write failed: " + p.string());
}

std::string utc_now() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Options {
  std::string config_path;
  std::string out;
  std::size_t jobs = 0;

  std::string input;
  std::size_t min_run_chars = 0;
  long delay_ms = -1;

  std::string corpus;
  std::string boundaries;
  bool strict_adjacency = false;
  bool show_all_negative_fields = false;
  std::string lexicon_dir, rules, variables, semantic_map;
  std::string clock;

  std::string gold;
  std::string annotations;
  std::string report;
};

Config resolve_config(const Options& o, const CLI::App& app) {
  Config cfg = o.config_path.empty() ? Config::defaults() : load_config(o.config_path);
  auto given = [&](const char* name) {
    auto set_in = [&](const CLI::App* a) {
      const auto* opt = a->get_option_no_throw(name);
      return opt && opt->count() > 0;
    };
    for (const auto* sub : app.get_subcommands()) {
      if (set_in(sub)) return true;
    }
    return set_in(&app);
  };
  if (given("--jobs")) cfg.parallelism = o.jobs;
  if (given("--min-run-chars")) cfg.min_run_chars = o.min_run_chars;
  if (given("--boundaries")) cfg.boundaries = parse_boundaries(o.boundaries);
  if (given("--strict-adjacency")) cfg.strict_adjacency = o.strict_adjacency;
  if (given("--show-all-negative-fields")) cfg.show_all_negative_fields = o.show_all_negative_fields;
  if (given("--lexicon-dir")) cfg.lexicon_dir = o.lexicon_dir;
  if (given("--rules")) cfg.rules_path = o.rules;
  if (given("--variables")) cfg.variables_path = o.variables;
  if (given("--semantic-map")) cfg.semantic_map_path = o.semantic_map;
  cfg.validate();
  return cfg;
}

std::vector<std::string> read_url_list(const fs::path& p) {
  std::vector<std::string> urls;
  std::istringstream in(read_file(p));
  std::string line;
  while (std::getline(in, line)) {
    auto t = utf8::trim(line);
    if (!t.empty() && t.front() != '#') urls.emplace_back(t);
  }
  return urls;
}

int cmd_ingest(const Options& o, const Config& cfg) {
  if (o.out.empty()) throw UsageError("ingest needs --out <corpus-dir>");
  fs::path input(o.input);
  if (!fs::exists(input)) throw UsageError("input not found: " + o.input);

  std::vector<RawPage> pages;
  std::size_t failed = 0;
  if (fs::is_directory(input)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(input)) {
      auto ext = detail::to_lower_ascii(e.path().extension().string());
      if (e.is_regular_file() && (ext == ".html" || ext == ".htm")) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      try {
        pages.push_back(load_raw_page(f));
      } catch (const Error& e) {
        std::cerr << f.string() << ": " << e.what() << "\n";
        ++failed;
      }
    }
  } else {
    FetchOptions fo;
    if (o.delay_ms >= 0) fo.politeness_delay = std::chrono::milliseconds(o.delay_ms);
    fo.parallelism = cfg.parallelism;
    auto result = fetch_pages(read_url_list(input), fo);
    for (const auto& f : result.failures) std::cerr << f.url << ": " << f.reason << "\n";
    failed = result.failures.size();
    pages = std::move(result.pages);
  }

  ExtractOptions eo;
  eo.min_run_chars = cfg.min_run_chars;
  std::vector<Document> docs;
  std::size_t rejected = 0;
  for (const auto& p : pages) {
    try {
      docs.push_back(page_to_document(p, eo));
    } catch (const Error& e) {
      std::cerr << p.source_url << ": " << e.what() << "\n";
      ++rejected;
    }
  }
  auto kept = deduplicate(std::move(docs));
  for (const auto& d : kept) write_file(fs::path(o.out) / (d.id + ".corpus.txt"), compile_corpus_file(d));

  std::cout << "pages=" << pages.size() << " documents=" << kept.size() << " rejected=" << rejected;
  if (failed) std::cout << " failed=" << failed;
  std::cout << "\n";
  return kept.empty() ? kEmpty : kOk;
}

RuleSet load_rules_or_throw(const Config& cfg) {
  try {
    return load_rule_set(cfg.rules_path, cfg.variables_path, cfg.semantic_map_path);
  } catch (const ParseError& e) {
    throw UsageError(std::string("rule files: ") + e.what());
  }
}

std::vector<Document> load_corpus_or_throw(const std::string& dir) {
  if (dir.empty()) throw UsageError("--corpus is required");
  if (!fs::is_directory(dir)) throw UsageError("corpus directory not found: " + dir);
  return load_corpus_dir(dir);
}

int cmd_analyze(const Options& o, const Config& cfg) {
  if (o.out.empty()) throw UsageError("analyze needs --out <dir>");
  auto rules = load_rules_or_throw(cfg);
  auto lex = load_lexicons(cfg.lexicon_dir);
  auto docs = load_corpus_or_throw(o.corpus);

  EngineOptions eo;
  eo.boundaries = cfg.boundaries;
  eo.strict_adjacency = cfg.strict_adjacency;
  auto results = analyze_corpus(docs, rules, lex, eo, cfg.parallelism);

  ReportOptions ro;
  ro.show_all_negative_fields = cfg.show_all_negative_fields;
  ro.generated_at = o.clock.empty() ? utc_now() : o.clock;

  fs::path out(o.out);
  std::vector<Annotation> all;
  std::vector<ReportPage> pages;
  std::size_t sentences = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto& r = results[i];
    sentences += r.sentences.size();
    all.insert(all.end(), r.annotations.begin(), r.annotations.end());
    pages.push_back(build_report_page(docs[i], r.sentences, r.annotations, r.traces, ro));
    write_file(out / "reports" / (docs[i].id + ".html"), render_html(pages.back()));
  }
  write_file(out / "reports" / "index.html", render_index(pages, ro.generated_at));
  write_file(out / "annotations.jsonl", to_jsonl(all));

  std::cout << "sentences=" << sentences << " future=" << to_triples(all).size() << "\n";
  return kOk;
}

int cmd_eval(const Options& o, const Config& cfg) {
  std::vector<GoldAnnotation> gold;
  try {
    gold = load_gold(read_file(o.gold));
  } catch (const ParseError& e) {
    throw UsageError(std::string("gold: ") + e.what());
  }

  std::vector<Annotation> predicted;
  std::size_t sentences = 0;
  if (!o.annotations.empty()) {
    try {
      predicted = parse_jsonl(read_file(o.annotations));
    } catch (const ParseError& e) {
      throw UsageError(std::string("annotations: ") + e.what());
    }
  } else {
    auto rules = load_rules_or_throw(cfg);
    auto lex = load_lexicons(cfg.lexicon_dir);
    auto docs = load_corpus_or_throw(o.corpus);
    EngineOptions eo;
    eo.boundaries = cfg.boundaries;
    eo.strict_adjacency = cfg.strict_adjacency;
    for (auto& r : analyze_corpus(docs, rules, lex, eo, cfg.parallelism)) {
      sentences += r.sentences.size();
      predicted.insert(predicted.end(), r.annotations.begin(), r.annotations.end());
    }
  }

  auto report = score(predicted, gold);
  report.sentences = sentences;
  std::cout << format_distribution_table(gold) << "\n" << format_results_table(report);
  if (!o.report.empty()) write_file(o.report, to_json(report).dump(2) + "\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Future-expression extraction for Arabic news text"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config_path, "key=value configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--jobs", o.jobs, "Parallel workers")->check(CLI::PositiveNumber);

  auto* ingest = app.add_subcommand("ingest", "Turn HTML pages into corpus files");
  ingest->add_option("--input", o.input, "Directory of HTML files or a file with one URL per line")->required();
  ingest->add_option("--min-run-chars", o.min_run_chars, "Minimum text run length in characters");
  ingest->add_option("--delay", o.delay_ms, "Politeness delay per host in milliseconds")
      ->check(CLI::NonNegativeNumber);

  auto add_engine_flags = [&](CLI::App* sub) {
    sub->add_option("--corpus", o.corpus, "Directory of .corpus.txt files");
    sub->add_option("--boundaries", o.boundaries, "Sentence triggers: dot-space,question,exclamation,newline");
    sub->add_flag("--strict-adjacency", o.strict_adjacency, "Punctuation breaks multi-word markers");
    sub->add_option("--lexicon-dir", o.lexicon_dir, "Lexicon directory");
    sub->add_option("--rules", o.rules, "Rule file");
    sub->add_option("--variables", o.variables, "Variable definition file");
    sub->add_option("--semantic-map", o.semantic_map, "Semantic map file");
  };
  auto* analyze = app.add_subcommand("analyze", "Annotate a corpus and write reports");
  add_engine_flags(analyze);
  analyze->add_flag("--show-all-negative-fields", o.show_all_negative_fields,
                    "Draw negative fields of rules that did not match");
  analyze->add_option("--clock", o.clock, "Fixed timestamp for the reports");

  auto* eval = app.add_subcommand("eval", "Score annotations against gold triples");
  add_engine_flags(eval);
  eval->add_option("--gold", o.gold, "Gold TSV")->required();
  eval->add_option("--annotations", o.annotations, "Annotation JSONL instead of running the engine");
  eval->add_option("--report", o.report, "Write the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    auto cfg = resolve_config(o, app);
    if (*ingest) return cmd_ingest(o, cfg);
    if (*analyze) return cmd_analyze(o, cfg);
    return cmd_eval(o, cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
