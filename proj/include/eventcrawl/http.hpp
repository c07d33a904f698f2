#pragma once

#include "eventcrawl/error.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace eventcrawl {

// Ordered header list with case-insensitive lookup. Repeated headers (Link)
// are kept as separate entries.
class Headers {
public:
  using Entry = std::pair<std::string, std::string>;

  Headers() = default;
  Headers(std::initializer_list<Entry> entries) : entries_(entries) {}

  void add(std::string name, std::string value) { entries_.emplace_back(std::move(name), std::move(value)); }
  void set(std::string_view name, std::string value);
  std::optional<std::string> get(std::string_view name) const;
  std::vector<std::string> get_all(std::string_view name) const;
  bool contains(std::string_view name) const { return get(name).has_value(); }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  std::size_t size() const { return entries_.size(); }

private:
  std::vector<Entry> entries_;
};

struct HttpRequest {
  std::string url;
  Headers headers;
};

struct HttpResponse {
  int status = 0;
  Headers headers;
  std::string body;
  std::string url;  // URL this response was served for

  bool is_redirect() const { return status == 301 || status == 302 || status == 303 || status == 307 || status == 308; }
  bool ok() const { return status >= 200 && status < 300; }
  // Media type without parameters, lowercased; empty when absent.
  std::string media_type() const;
};

// One GET request, no redirect handling. Throws TransportError when no HTTP
// response could be obtained. Implementations must be callable concurrently.
class Fetcher {
public:
  virtual ~Fetcher() = default;
  virtual HttpResponse fetch(const HttpRequest& request) = 0;
};

class TooManyRedirects : public Error {
public:
  using Error::Error;
};

// Follows Location headers up to max_redirects hops, re-sending the original
// request headers. Every intermediate and final response is appended to
// chain when given.
HttpResponse fetch_following_redirects(Fetcher& fetcher, const HttpRequest& request, int max_redirects = 10,
                                       std::vector<HttpResponse>* chain = nullptr);

struct HttpFetcherOptions {
  std::chrono::milliseconds timeout{30000};
  std::string user_agent = "eventcrawl/1.0";
};

// Real network fetcher backed by cpp-httplib (http and https).
class HttpFetcher final : public Fetcher {
public:
  explicit HttpFetcher(HttpFetcherOptions options = {});
  HttpResponse fetch(const HttpRequest& request) override;

private:
  HttpFetcherOptions options_;
};

std::string percent_encode(std::string_view text);

}  // namespace eventcrawl
