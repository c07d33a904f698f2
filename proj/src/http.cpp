#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "eventcrawl/http.hpp"

#include "eventcrawl/strings.hpp"
#include "eventcrawl/uri.hpp"

namespace eventcrawl {

void Headers::set(std::string_view name, std::string value) {
  std::erase_if(entries_, [&](const Entry& e) { return str::iequals(e.first, name); });
  entries_.emplace_back(std::string(name), std::move(value));
}

std::optional<std::string> Headers::get(std::string_view name) const {
  for (const auto& [key, value] : entries_)
    if (str::iequals(key, name)) return value;
  return std::nullopt;
}

std::vector<std::string> Headers::get_all(std::string_view name) const {
  std::vector<std::string> values;
  for (const auto& [key, value] : entries_)
    if (str::iequals(key, name)) values.push_back(value);
  return values;
}

std::string HttpResponse::media_type() const {
  auto value = headers.get("Content-Type");
  if (!value) return {};
  std::string_view v = *value;
  return str::to_lower(str::trim(v.substr(0, v.find(';'))));
}

HttpResponse fetch_following_redirects(Fetcher& fetcher, const HttpRequest& request, int max_redirects,
                                       std::vector<HttpResponse>* chain) {
  HttpRequest current = request;
  for (int hop = 0;; ++hop) {
    HttpResponse response = fetcher.fetch(current);
    if (response.url.empty()) response.url = current.url;
    if (chain) chain->push_back(response);
    if (!response.is_redirect()) return response;
    auto location = response.headers.get("Location");
    if (!location) return response;
    if (hop >= max_redirects)
      throw TooManyRedirects("more than " + std::to_string(max_redirects) + " redirects from " + request.url);
    current.url = resolve(current.url, str::trim(*location));
  }
}

HttpFetcher::HttpFetcher(HttpFetcherOptions options) : options_(std::move(options)) {}

HttpResponse HttpFetcher::fetch(const HttpRequest& request) {
  Uri uri;
  try {
    uri = Uri::parse(request.url);
  } catch (const UriError& e) {
    throw TransportError(e.what());
  }
  if (!uri.is_absolute() || !uri.authority) throw TransportError("not an absolute URL: " + request.url);

  httplib::Client client(uri.scheme + "://" + *uri.authority);
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
  auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_follow_location(false);

  httplib::Headers headers;
  headers.emplace("User-Agent", options_.user_agent);
  for (const auto& [name, value] : request.headers) headers.emplace(name, value);

  std::string target = uri.path.empty() ? "/" : uri.path;
  if (uri.query) target += "?" + *uri.query;
  auto result = client.Get(target, headers);
  if (!result) throw TransportError(request.url + ": " + httplib::to_string(result.error()));

  HttpResponse response;
  response.status = result->status;
  response.body = result->body;
  response.url = request.url;
  for (const auto& [name, value] : result->headers) response.headers.add(name, value);
  return response;
}

std::string percent_encode(std::string_view text) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : text) {
    if (str::is_alpha(static_cast<char>(c)) || str::is_digit(static_cast<char>(c)) || c == '-' || c == '_' ||
        c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

}  // namespace eventcrawl
