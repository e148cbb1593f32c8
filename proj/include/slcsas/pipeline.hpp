#pragma once

// Corpus-level analysis over a worker pool. Results come back in input
// order regardless of how documents were scheduled.

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "slcsas/engine.hpp"

namespace slcsas {

inline std::vector<DocumentResult> analyze_corpus(const std::vector<Document>& docs, const RuleSet& rules,
                                                  const Lexicons& lex, const EngineOptions& opts = {},
                                                  std::size_t parallelism = 1) {
  std::vector<DocumentResult> results(docs.size());
  if (parallelism <= 1 || docs.size() <= 1) {
    for (std::size_t i = 0; i < docs.size(); ++i) results[i] = analyze_document(docs[i], rules, lex, opts);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < docs.size(); i = next++) {
      try {
        results[i] = analyze_document(docs[i], rules, lex, opts);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < std::min(parallelism, docs.size()); ++k) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace slcsas
