#pragma once

// Page fetching for URL-list ingestion. Local paths and file:// URLs are read
// from disk; http(s) URLs go through cpp-httplib with a per-host politeness
// delay and a bounded number of concurrent requests.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "slcsas/corpus.hpp"

namespace slcsas {

struct FetchOptions {
  std::chrono::milliseconds politeness_delay{1000};
  std::size_t parallelism = 4;
  std::chrono::seconds timeout{20};
  std::string user_agent = "slcsas-ingest/1.0 (+corpus construction; research use)";
};

struct FetchFailure {
  std::string url;
  std::string reason;
};

struct FetchResult {
  std::vector<RawPage> pages;  // input order
  std::vector<FetchFailure> failures;
};

namespace fetch_detail {

struct ParsedUrl {
  std::string scheme;  // "http", "https" or "file"
  std::string host_port;
  std::string path;
};

inline ParsedUrl parse_url(const std::string& url) {
  auto sep = url.find("://");
  if (sep == std::string::npos) return {"file", "", url};
  ParsedUrl u;
  u.scheme = detail::to_lower_ascii(url.substr(0, sep));
  auto rest = url.substr(sep + 3);
  if (u.scheme == "file") {
    u.path = rest;
    return u;
  }
  auto slash = rest.find('/');
  u.host_port = rest.substr(0, slash);
  u.path = slash == std::string::npos ? "/" : rest.substr(slash);
  return u;
}

inline std::string charset_from_content_type(const std::string& ct) {
  auto k = detail::ifind(ct, "charset=");
  if (k == std::string::npos) return {};
  auto v = ct.substr(k + 8);
  auto end = v.find_first_of("; ");
  v = v.substr(0, end);
  if (!v.empty() && (v.front() == '"' || v.front() == '\'')) v = v.substr(1, v.size() - 2);
  return v;
}

// Hands out request slots; requests to the same host are at least
// `delay` apart.
class HostClock {
 public:
  explicit HostClock(std::chrono::milliseconds delay) : delay_(delay) {}

  void wait_turn(const std::string& host) {
    std::chrono::steady_clock::time_point slot;
    {
      std::lock_guard lock(mu_);
      auto now = std::chrono::steady_clock::now();
      auto it = next_.find(host);
      slot = it == next_.end() ? now : std::max(now, it->second);
      next_[host] = slot + delay_;
    }
    std::this_thread::sleep_until(slot);
  }

 private:
  std::chrono::milliseconds delay_;
  std::mutex mu_;
  std::map<std::string, std::chrono::steady_clock::time_point> next_;
};

inline RawPage fetch_one(const std::string& url, const FetchOptions& opts, HostClock& clock) {
  auto u = parse_url(url);
  if (u.scheme == "file") return load_raw_page(u.path);
  if (u.scheme != "http" && u.scheme != "https") throw Error("unsupported scheme " + u.scheme);
  if (u.host_port.empty()) throw Error("missing host");
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (u.scheme == "https") throw Error("https support not compiled in");
#endif
  clock.wait_turn(u.host_port);
  httplib::Client client(u.scheme + "://" + u.host_port);
  client.set_connection_timeout(opts.timeout);
  client.set_read_timeout(opts.timeout);
  client.set_follow_location(true);
  httplib::Headers headers{{"User-Agent", opts.user_agent}};
  auto res = client.Get(u.path, headers);
  if (!res) throw Error("request failed: " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300) throw Error("HTTP " + std::to_string(res->status));
  auto charset = charset_from_content_type(res->get_header_value("Content-Type"));
  return RawPage{url, normalize_to_utf8(res->body, charset)};
}

}  // namespace fetch_detail

inline FetchResult fetch_pages(const std::vector<std::string>& urls, const FetchOptions& opts = {}) {
  std::vector<std::optional<RawPage>> pages(urls.size());
  std::vector<std::optional<std::string>> errors(urls.size());
  fetch_detail::HostClock clock(opts.politeness_delay);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < urls.size(); i = next++) {
      try {
        pages[i] = fetch_detail::fetch_one(urls[i], opts, clock);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  {
    std::vector<std::jthread> threads;
    auto n = std::max<std::size_t>(1, std::min(opts.parallelism, urls.size()));
    for (std::size_t k = 0; k < n; ++k) threads.emplace_back(worker);
  }
  FetchResult out;
  for (std::size_t i = 0; i < urls.size(); ++i) {
    if (pages[i]) out.pages.push_back(std::move(*pages[i]));
    if (errors[i]) out.failures.push_back({urls[i], *errors[i]});
  }
  return out;
}

}  // namespace slcsas
