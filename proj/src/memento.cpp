#include "eventcrawl/memento.hpp"

#include "eventcrawl/strings.hpp"
#include "eventcrawl/uri.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <thread>

namespace eventcrawl {

std::string archive_id_of(std::string_view uri_m) { return registrable_domain(host_of(uri_m)); }

bool LinkEntry::has_rel(std::string_view rel) const {
  return std::find(rels.begin(), rels.end(), str::to_lower(rel)) != rels.end();
}

const LinkEntry* LinkRelations::find(std::string_view rel) const {
  auto all = find_all(rel);
  return all.empty() ? nullptr : all.front();
}

std::vector<const LinkEntry*> LinkRelations::find_all(std::string_view rel) const {
  std::vector<const LinkEntry*> found;
  std::vector<std::string> wanted;
  for (auto tok : str::split(rel, ' '))
    if (!tok.empty()) wanted.push_back(str::to_lower(tok));
  for (const auto& e : entries) {
    bool all = !wanted.empty();
    for (const auto& w : wanted) all = all && e.has_rel(w);
    if (all) found.push_back(&e);
  }
  return found;
}

namespace {

class LinkParser {
public:
  explicit LinkParser(std::string_view in) : in_(in) {}

  LinkRelations run() {
    LinkRelations out;
    while (true) {
      skip_ws_and_commas();
      if (pos_ >= in_.size()) return out;
      out.entries.push_back(parse_value());
    }
  }

private:
  [[noreturn]] void fail(const std::string& what, std::size_t at) {
    auto end = std::min(in_.size(), at + 40);
    throw LinkParseError(what, at, std::string(in_.substr(at, end - at)));
  }

  void skip_ws() {
    while (pos_ < in_.size() && str::is_space(in_[pos_])) ++pos_;
  }
  void skip_ws_and_commas() {
    while (pos_ < in_.size() && (str::is_space(in_[pos_]) || in_[pos_] == ',')) ++pos_;
  }

  LinkEntry parse_value() {
    LinkEntry entry;
    if (in_[pos_] != '<') fail("expected '<' starting a link target", pos_);
    auto close = in_.find('>', pos_);
    if (close == std::string_view::npos) fail("unterminated link target", pos_);
    entry.target = std::string(str::trim(in_.substr(pos_ + 1, close - pos_ - 1)));
    pos_ = close + 1;
    while (true) {
      skip_ws();
      if (pos_ >= in_.size() || in_[pos_] == ',') break;
      if (in_[pos_] != ';') fail("expected ';' or ',' after link", pos_);
      ++pos_;
      skip_ws();
      if (pos_ >= in_.size() || in_[pos_] == ',' || in_[pos_] == ';') continue;
      parse_param(entry);
    }
    return entry;
  }

  void parse_param(LinkEntry& entry) {
    std::size_t start = pos_;
    while (pos_ < in_.size() && !str::is_space(in_[pos_]) && in_[pos_] != '=' && in_[pos_] != ';' &&
           in_[pos_] != ',')
      ++pos_;
    std::string name = str::to_lower(in_.substr(start, pos_ - start));
    if (name.empty()) fail("empty link parameter name", start);
    skip_ws();
    std::string value;
    bool has_value = false;
    if (pos_ < in_.size() && in_[pos_] == '=') {
      has_value = true;
      ++pos_;
      skip_ws();
      if (pos_ < in_.size() && in_[pos_] == '"') {
        std::size_t quote_start = pos_;
        ++pos_;
        while (pos_ < in_.size() && in_[pos_] != '"') {
          if (in_[pos_] == '\\' && pos_ + 1 < in_.size()) ++pos_;
          value.push_back(in_[pos_++]);
        }
        if (pos_ >= in_.size()) fail("unterminated quoted string", quote_start);
        ++pos_;
      } else {
        std::size_t vstart = pos_;
        while (pos_ < in_.size() && !str::is_space(in_[pos_]) && in_[pos_] != ';' && in_[pos_] != ',') ++pos_;
        value = std::string(in_.substr(vstart, pos_ - vstart));
      }
    }
    if (name == "rel") {
      for (auto tok : str::split(value, ' '))
        if (!str::trim(tok).empty()) entry.rels.push_back(str::to_lower(str::trim(tok)));
      if (entry.rels.empty()) fail("empty rel parameter", start);
    } else if (name == "datetime") {
      auto dt = parse_http_date(value);
      if (!dt) fail("datetime parameter is not an HTTP date", start);
      entry.datetime = dt;
    } else {
      entry.params.emplace_back(name, has_value ? value : std::string{});
    }
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace

LinkRelations parse_link_header(std::string_view value) { return LinkParser(value).run(); }

LinkRelations parse_link_headers(const Headers& headers) {
  LinkRelations all;
  for (const auto& value : headers.get_all("Link")) {
    auto part = parse_link_header(value);
    all.entries.insert(all.entries.end(), part.entries.begin(), part.entries.end());
  }
  return all;
}

std::string serialize_link_header(const LinkRelations& links) {
  std::string out;
  for (const auto& e : links.entries) {
    if (!out.empty()) out += ", ";
    out += "<" + e.target + ">";
    if (!e.rels.empty()) {
      out += "; rel=\"";
      for (std::size_t i = 0; i < e.rels.size(); ++i) out += (i ? " " : "") + e.rels[i];
      out += "\"";
    }
    if (e.datetime) out += "; datetime=\"" + format_http_date(*e.datetime) + "\"";
    for (const auto& [name, value] : e.params) {
      out += "; " + name;
      if (!value.empty()) {
        std::string escaped;
        for (char c : value) {
          if (c == '"' || c == '\\') escaped.push_back('\\');
          escaped.push_back(c);
        }
        out += "=\"" + escaped + "\"";
      }
    }
  }
  return out;
}

std::vector<Memento> parse_timemap(std::string_view body) {
  LinkRelations links;
  try {
    links = parse_link_header(body);
  } catch (const LinkParseError& e) {
    throw ParseError(std::string("malformed TimeMap: ") + e.what());
  }
  std::string uri_r;
  if (const auto* original = links.find("original")) uri_r = original->target;
  std::vector<Memento> mementos;
  for (const auto& e : links.entries) {
    if (!e.has_rel("memento")) continue;
    if (!e.datetime) throw ParseError("TimeMap memento without datetime: " + e.target);
    Memento m;
    m.uri_m = e.target;
    m.uri_r = !uri_r.empty() ? uri_r : strip_archive_prefix(e.target).value_or(std::string{});
    m.memento_datetime = *e.datetime;
    m.archive_id = archive_id_of(e.target);
    mementos.push_back(std::move(m));
  }
  std::stable_sort(mementos.begin(), mementos.end(),
                   [](const Memento& a, const Memento& b) { return a.memento_datetime < b.memento_datetime; });
  return mementos;
}

std::optional<std::string> strip_archive_prefix(std::string_view uri_m) {
  if (!is_http_uri(uri_m)) return std::nullopt;
  auto scheme_end = uri_m.find("://");
  auto path_start = uri_m.find('/', scheme_end + 3);
  if (path_start == std::string_view::npos) return std::nullopt;
  // Scan path segments for an 8-14 digit timestamp, optionally with a
  // two-letter replay modifier ("20110108120000id_").
  std::size_t pos = path_start;
  while (pos < uri_m.size() && uri_m[pos] == '/') {
    auto next = uri_m.find('/', pos + 1);
    if (next == std::string_view::npos) return std::nullopt;
    auto segment = uri_m.substr(pos + 1, next - pos - 1);
    std::size_t digits = 0;
    while (digits < segment.size() && str::is_digit(segment[digits])) ++digits;
    auto modifier = segment.substr(digits);
    bool modifier_ok = modifier.empty() || (modifier.size() == 3 && str::is_alpha(modifier[0]) &&
                                            str::is_alpha(modifier[1]) && modifier[2] == '_');
    if (digits >= 8 && digits <= 14 && modifier_ok) {
      std::string rest(uri_m.substr(next + 1));
      if (rest.empty()) return std::nullopt;
      for (std::string_view scheme : {"http:/", "https:/"}) {
        if (str::istarts_with(rest, scheme) && !str::istarts_with(rest, std::string(scheme) + "/"))
          rest.insert(scheme.size(), "/");
      }
      if (!is_http_uri(rest)) {
        auto first_slash = rest.find('/');
        auto host = rest.substr(0, first_slash);
        if (host.find('.') == std::string::npos) return std::nullopt;
        rest = "http://" + rest;
      }
      return rest;
    }
    pos = next;
  }
  return std::nullopt;
}

std::string resolve_urir(const HttpResponse& response, std::string_view uri_m) {
  try {
    auto links = parse_link_headers(response.headers);
    if (const auto* original = links.find("original")) return original->target;
  } catch (const LinkParseError& e) {
    spdlog::warn("ignoring malformed Link header from {}: {}", uri_m, e.what());
  }
  if (auto stripped = strip_archive_prefix(uri_m)) return *stripped;
  throw OriginalUriError("cannot resolve original of " + std::string(uri_m));
}

void HostRateLimiter::acquire(const std::string& host) {
  if (delay_.count() <= 0) return;
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(mutex_);
    auto now = std::chrono::steady_clock::now();
    auto& next = next_slot_[host];
    slot = std::max(now, next);
    next = slot + delay_;
  }
  std::this_thread::sleep_until(slot);
}

std::string_view to_string(NegotiationFailure failure) {
  switch (failure) {
    case NegotiationFailure::NotArchived:
      return "not_archived";
    case NegotiationFailure::NoPostEventMemento:
      return "no_post_event_memento";
    case NegotiationFailure::Transport:
      return "transport";
    case NegotiationFailure::Protocol:
      return "protocol";
  }
  return "unknown";
}

MementoClient::MementoClient(std::shared_ptr<Fetcher> fetcher, MementoClientOptions options)
    : fetcher_(std::move(fetcher)), options_(std::move(options)), limiter_(options_.politeness_delay) {}

HttpResponse MementoClient::get(const std::string& url, const Headers& headers, std::vector<HttpResponse>* chain) {
  HttpRequest request{url, headers};
  for (int hop = 0;; ++hop) {
    HttpResponse response;
    for (int attempt = 0;; ++attempt) {
      limiter_.acquire(host_of(request.url));
      try {
        response = fetcher_->fetch(request);
        break;
      } catch (const TransportError& e) {
        if (attempt >= options_.retries) throw;
        spdlog::debug("retrying {} after transport error: {}", request.url, e.what());
      }
    }
    if (response.url.empty()) response.url = request.url;
    if (chain) chain->push_back(response);
    auto location = response.headers.get("Location");
    if (!response.is_redirect() || !location) return response;
    if (hop >= options_.max_redirects) throw TooManyRedirects("redirect limit reached at " + request.url);
    request.url = resolve(request.url, str::trim(*location));
  }
}

std::variant<NegotiatedMemento, NegotiationError> MementoClient::fetch_memento(const std::string& url,
                                                                                Timestamp preferred,
                                                                                const std::string& uri_r_hint) {
  Headers headers{{"Accept-Datetime", format_http_date(preferred)}};
  HttpResponse response;
  std::vector<HttpResponse> chain;
  try {
    response = get(url, headers, &chain);
  } catch (const TransportError& e) {
    return NegotiationError{NegotiationFailure::Transport, e.what()};
  } catch (const TooManyRedirects& e) {
    return NegotiationError{NegotiationFailure::Protocol, e.what()};
  } catch (const UriError& e) {
    return NegotiationError{NegotiationFailure::Protocol, e.what()};
  }
  if (response.status == 404 || response.status == 410)
    return NegotiationError{NegotiationFailure::NotArchived, "HTTP " + std::to_string(response.status) + " for " + url};
  if (!response.ok())
    return NegotiationError{NegotiationFailure::Transport, "HTTP " + std::to_string(response.status) + " for " + url};
  auto header = response.headers.get("Memento-Datetime");
  if (!header) return NegotiationError{NegotiationFailure::Protocol, "missing Memento-Datetime from " + response.url};
  auto datetime = parse_http_date(*header);
  if (!datetime)
    return NegotiationError{NegotiationFailure::Protocol, "unparseable Memento-Datetime '" + *header + "'"};

  NegotiatedMemento result;
  result.memento.uri_m = response.url;
  result.memento.memento_datetime = *datetime;
  result.memento.archive_id = archive_id_of(response.url);
  try {
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      auto hop_links = parse_link_headers(it->headers);
      result.links.entries.insert(result.links.entries.end(), hop_links.entries.begin(), hop_links.entries.end());
    }
  } catch (const LinkParseError& e) {
    return NegotiationError{NegotiationFailure::Protocol, e.what()};
  }
  if (const auto* original = result.links.find("original"))
    result.memento.uri_r = original->target;
  else
    result.memento.uri_r = strip_archive_prefix(response.url).value_or(uri_r_hint);
  if (result.memento.uri_r == result.memento.uri_m)
    return NegotiationError{NegotiationFailure::Protocol, "memento URI equals its original: " + response.url};
  result.response = std::move(response);
  return result;
}

NegotiationResult MementoClient::negotiate(const std::string& uri_r, Timestamp preferred) {
  auto first = fetch_memento(options_.timegate_endpoint + uri_r, preferred, uri_r);
  if (auto* err = std::get_if<NegotiationError>(&first)) return *err;
  auto& found = std::get<NegotiatedMemento>(first);
  if (found.memento.memento_datetime >= preferred) return found;

  // Exactly one hop: the next memento is the temporal neighbour after the
  // selected one.
  const LinkEntry* next = found.links.find("next memento");
  if (!next)
    return NegotiationError{NegotiationFailure::NoPostEventMemento,
                            "latest memento of " + uri_r + " is " + format_iso8601(found.memento.memento_datetime)};
  auto target = resolve(found.response.url, next->target);
  auto second = fetch_memento(target, preferred, found.memento.uri_r);
  if (auto* err = std::get_if<NegotiationError>(&second)) return *err;
  auto& hop = std::get<NegotiatedMemento>(second);
  if (hop.memento.memento_datetime < preferred)
    return NegotiationError{NegotiationFailure::NoPostEventMemento,
                            "next memento of " + uri_r + " still precedes the preferred datetime"};
  hop.followed_next = true;
  return hop;
}

}  // namespace eventcrawl
