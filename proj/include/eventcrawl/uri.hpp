#pragma once

#include "eventcrawl/error.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace eventcrawl {

class UriError : public Error {
public:
  using Error::Error;
};

// RFC 3986 URI reference split into its components. Components are kept in
// their original (still percent-encoded) form.
struct Uri {
  std::string scheme;  // empty for relative references
  std::optional<std::string> authority;
  std::string path;
  std::optional<std::string> query;
  std::optional<std::string> fragment;

  static Uri parse(std::string_view text);

  bool is_absolute() const { return !scheme.empty(); }
  // Host part of the authority without userinfo or port, as written.
  std::string host() const;
  std::optional<int> port() const;
  std::string to_string() const;
};

// RFC 3986 section 5.2 reference resolution.
Uri resolve(const Uri& base, const Uri& reference);
std::string resolve(std::string_view base, std::string_view reference);

std::string remove_dot_segments(std::string_view path);

// Canonical form used for crawl dedup: lowercase scheme and host, no fragment,
// no default port, dot segments resolved, utm_* query parameters removed.
// Throws UriError for relative or unparseable input.
std::string normalize_uri(std::string_view uri);

bool is_http_uri(std::string_view uri);

// Lowercased host of an absolute URI, or empty.
std::string host_of(std::string_view uri);

// Registrable domain ("web.archive.org" -> "archive.org",
// "www.bbc.co.uk" -> "bbc.co.uk"). IP literals are returned unchanged.
std::string registrable_domain(std::string_view host);

}  // namespace eventcrawl
