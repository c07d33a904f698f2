#pragma once

#include "eventcrawl/error.hpp"
#include "eventcrawl/http.hpp"
#include "eventcrawl/time.hpp"

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace eventcrawl {

// An archived snapshot (RFC 7089 Memento).
struct Memento {
  std::string uri_m;
  std::string uri_r;
  Timestamp memento_datetime;
  std::string archive_id;  // registrable domain of uri_m

  friend bool operator==(const Memento&, const Memento&) = default;
};

// Archive identity of a URI-M: the registrable domain of its host.
std::string archive_id_of(std::string_view uri_m);

// Protocol violation by a server (e.g. a Memento without Memento-Datetime).
class MementoProtocolError : public Error {
public:
  using Error::Error;
};

class LinkParseError : public Error {
public:
  LinkParseError(const std::string& message, std::size_t offset, std::string span)
      : Error(message + " at offset " + std::to_string(offset) + ": '" + span + "'"), offset_(offset) {}
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

// One link-value of an RFC 8288 Link header.
struct LinkEntry {
  std::string target;
  std::vector<std::string> rels;  // lowercased relation types, in header order
  std::optional<Timestamp> datetime;
  // Other parameters in header order, names lowercased. A parameter given
  // without a value maps to an empty string.
  std::vector<std::pair<std::string, std::string>> params;

  bool has_rel(std::string_view rel) const;
  friend bool operator==(const LinkEntry&, const LinkEntry&) = default;
};

struct LinkRelations {
  std::vector<LinkEntry> entries;

  // First entry whose rel set contains every token of `rel` (e.g. "next memento").
  const LinkEntry* find(std::string_view rel) const;
  std::vector<const LinkEntry*> find_all(std::string_view rel) const;
  bool empty() const { return entries.empty(); }
  friend bool operator==(const LinkRelations&, const LinkRelations&) = default;
};

// Parses a Link header value (or several joined with commas). Throws
// LinkParseError naming the offending span for unrecoverable input.
LinkRelations parse_link_header(std::string_view value);
// Parses every Link header of a response, in order.
LinkRelations parse_link_headers(const Headers& headers);
std::string serialize_link_header(const LinkRelations& links);

// application/link-format TimeMap; mementos sorted by datetime ascending.
std::vector<Memento> parse_timemap(std::string_view body);

class OriginalUriError : public Error {
public:
  using Error::Error;
};

// Original resource of an archive URI-M by pattern alone
// (".../20110108120000/http://example.com/x", "id_"/"im_" modifiers,
// scheme-less targets). Nullopt when the URI is not a recognized URI-M.
std::optional<std::string> strip_archive_prefix(std::string_view uri_m);

// rel="original" of the response's Link headers, else the pattern strip of
// uri_m. Throws OriginalUriError when neither works.
std::string resolve_urir(const HttpResponse& memento_response, std::string_view uri_m);

// Serializes requests per host: no two requests to one host start within
// `delay` of each other, whatever the number of callers.
class HostRateLimiter {
public:
  explicit HostRateLimiter(std::chrono::milliseconds delay) : delay_(delay) {}
  void acquire(const std::string& host);

private:
  std::chrono::milliseconds delay_;
  std::mutex mutex_;
  std::map<std::string, std::chrono::steady_clock::time_point> next_slot_;
};

enum class NegotiationFailure {
  NotArchived,         // no memento exists for the URI-R
  NoPostEventMemento,  // only mementos before the preferred datetime
  Transport,           // network failure after retries
  Protocol,            // malformed server response
};

std::string_view to_string(NegotiationFailure failure);

struct NegotiationError {
  NegotiationFailure kind;
  std::string detail;
};

struct NegotiatedMemento {
  Memento memento;
  HttpResponse response;  // final 200 response of the memento, body included
  // Links of the final response followed by those of earlier redirect hops.
  LinkRelations links;
  bool followed_next = false;
};

using NegotiationResult = std::variant<NegotiatedMemento, NegotiationError>;

struct MementoClientOptions {
  // URI-R is appended verbatim, e.g. "http://timetravel.mementoweb.org/timegate/".
  std::string timegate_endpoint;
  int max_redirects = 10;
  int retries = 2;
  std::chrono::milliseconds politeness_delay{0};
};

class MementoClient {
public:
  MementoClient(std::shared_ptr<Fetcher> fetcher, MementoClientOptions options);

  // Datetime negotiation against the TimeGate. A result memento always has
  // memento_datetime >= preferred; otherwise a NegotiationError is returned.
  NegotiationResult negotiate(const std::string& uri_r, Timestamp preferred);

  // GET through redirects with retries and per-host politeness. Every hop's
  // response is appended to chain when given.
  HttpResponse get(const std::string& url, const Headers& headers = {}, std::vector<HttpResponse>* chain = nullptr);

  const MementoClientOptions& options() const { return options_; }

private:
  std::variant<NegotiatedMemento, NegotiationError> fetch_memento(const std::string& url, Timestamp preferred,
                                                                   const std::string& uri_r_hint);

  std::shared_ptr<Fetcher> fetcher_;
  MementoClientOptions options_;
  HostRateLimiter limiter_;
};

}  // namespace eventcrawl
