#pragma once

// Shared configuration: a flat key=value file, overridable from the command
// line, with bundled data files as defaults.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "slcsas/error.hpp"
#include "slcsas/segmenter.hpp"
#include "slcsas/utf8.hpp"

#ifndef SLCSAS_DEFAULT_DATA_DIR
#define SLCSAS_DEFAULT_DATA_DIR "data"
#endif

namespace slcsas {

// $SLCSAS_DATA_DIR if set, else the data directory of the source tree.
inline std::filesystem::path data_dir() {
  if (const char* env = std::getenv("SLCSAS_DATA_DIR"); env && *env) return env;
  return SLCSAS_DEFAULT_DATA_DIR;
}

struct Config {
  std::size_t min_run_chars = 130;
  Boundaries boundaries;
  bool strict_adjacency = false;
  bool show_all_negative_fields = false;
  std::filesystem::path lexicon_dir;
  std::filesystem::path rules_path;
  std::filesystem::path variables_path;
  std::filesystem::path semantic_map_path;
  std::size_t parallelism = 1;

  static Config defaults() {
    Config c;
    auto d = data_dir();
    c.lexicon_dir = d / "lexicon";
    c.rules_path = d / "rules_future_ar.txt";
    c.variables_path = d / "variables_ar.txt";
    c.semantic_map_path = d / "semantic_map.txt";
    return c;
  }

  // Applies one key=value setting.
  void set(const std::string& key, const std::string& value) {
    auto number = [&] {
      if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos) {
        throw Error("expected a non-negative integer for " + key);
      }
      return static_cast<std::size_t>(std::stoul(value));
    };
    auto flag = [&] {
      if (value == "true" || value == "1" || value == "yes") return true;
      if (value == "false" || value == "0" || value == "no") return false;
      throw Error("expected true or false for " + key);
    };
    if (key == "min_run_chars") min_run_chars = number();
    else if (key == "boundaries") boundaries = parse_boundaries(value);
    else if (key == "strict_adjacency") strict_adjacency = flag();
    else if (key == "show_all_negative_fields") show_all_negative_fields = flag();
    else if (key == "lexicon_dir") lexicon_dir = value;
    else if (key == "rules_path") rules_path = value;
    else if (key == "variables_path") variables_path = value;
    else if (key == "semantic_map_path") semantic_map_path = value;
    else if (key == "parallelism") parallelism = number();
    else throw Error("unknown config key " + key);
  }

  void validate() const {
    if (parallelism < 1) throw Error("parallelism must be at least 1");
    for (const auto& p : {lexicon_dir, rules_path, variables_path, semantic_map_path}) {
      if (!std::filesystem::exists(p)) throw Error("path does not exist: " + p.string());
    }
  }
};

// Reads key=value lines over `base`. Relative paths are resolved against the
// config file's directory.
inline Config load_config(const std::filesystem::path& file, Config base = Config::defaults()) {
  std::ifstream in(file);
  if (!in) throw Error("cannot read config " + file.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = utf8::trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key=value", lineno);
    auto key = std::string(utf8::trim(t.substr(0, eq)));
    auto value = std::string(utf8::trim(t.substr(eq + 1)));
    if (utf8::ends_with(key, "_path") || key == "lexicon_dir") {
      std::filesystem::path p(value);
      if (p.is_relative()) value = (file.parent_path() / p).string();
    }
    try {
      base.set(key, value);
    } catch (const Error& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return base;
}

}  // namespace slcsas
