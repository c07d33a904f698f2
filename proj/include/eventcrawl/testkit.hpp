#pragma once

#include "eventcrawl/crawler.hpp"
#include "eventcrawl/event_setup.hpp"
#include "eventcrawl/http.hpp"
#include "eventcrawl/time.hpp"

#include "json.hpp"

#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace eventcrawl::testkit {

struct FixturePage {
  std::string body;
  std::string content_type = "text/html; charset=utf-8";
  int status = 200;
  std::optional<std::string> redirect_to;
  std::optional<Timestamp> published;  // informational
};

struct Snapshot {
  Timestamp datetime;
  std::string archive_host;
  std::string body;
  std::optional<Timestamp> orig_last_modified;  // sent as X-Archive-Orig-Last-Modified
  // The TimeGate points at a day-precision URI-M; the archive then
  // redirects to the exact one.
  bool inexact = false;
};

// Offline web: live pages keyed by normalized URI and archive snapshots keyed
// by URI-R (sorted by datetime, then archive host).
struct FixtureSite {
  std::string timegate_host = "timegate.test";
  std::map<std::string, FixturePage> pages;
  std::map<std::string, std::vector<Snapshot>> snapshots;
  std::set<std::string> transport_failures;  // URLs whose fetch always throws

  void add_page(const std::string& uri, FixturePage page);
  void add_snapshot(const std::string& uri_r, Snapshot snapshot);
  std::string timegate_endpoint() const { return "http://" + timegate_host + "/timegate/"; }

  static FixtureSite from_json(const nlohmann::json& doc, const std::string& base_dir = ".");
  static FixtureSite load(const std::string& path);
  nlohmann::json to_json() const;
};

// "http://<host>/web/<YYYYMMDDhhmmss>/<uri_r>"
std::string memento_uri(const std::string& archive_host, Timestamp datetime, const std::string& uri_r);

// In-process fetcher serving a FixtureSite. Live hosts answer from pages
// (404 on miss). The TimeGate host answers /timegate/<uri-r> with a 302 to
// the snapshot closest to Accept-Datetime (ties go to the earlier one) and
// /timemap/link/<uri-r> with a link-format TimeMap. Archive hosts serve
// /web/<ts>/<uri-r> with Memento-Datetime, memento Link relations, and
// outlinks rewritten to URI-M form; an inexact timestamp redirects to the
// closest snapshot of that archive. Thread-safe.
class FixtureFetcher final : public Fetcher {
public:
  explicit FixtureFetcher(FixtureSite site);
  HttpResponse fetch(const HttpRequest& request) override;

  // Fails the next `count` requests for url with TransportError.
  void fail_next(const std::string& url, int count);
  std::size_t request_count() const { return requests_.load(); }
  std::vector<std::string> requested_urls() const;
  const FixtureSite& site() const { return site_; }

private:
  HttpResponse live(const std::string& url) const;
  HttpResponse timegate(const std::string& url, const std::string& rest, const HttpRequest& request) const;
  HttpResponse timemap(const std::string& rest) const;
  HttpResponse archive(const std::string& url, const std::string& host, const std::string& rest) const;

  FixtureSite site_;
  std::set<std::string> archive_hosts_;
  std::atomic<std::size_t> requests_{0};
  mutable std::mutex mutex_;
  std::map<std::string, int> pending_failures_;
  std::vector<std::string> log_;
};

enum class Variant {
  AllRelevant,   // every page relevant and in the interval
  Cliff,         // relevant up to cliff_depth, off-topic beyond
  Mixed,         // page kinds drawn from a seeded generator
  PreEventOnly,  // archive copies of seeds predate the event; live pages are stale
  Graded,        // graded vocabulary overlap, all accepted, varied priorities
};

enum class PageKind { Relevant, OffTopic, Stale, Undated };
std::string_view to_string(PageKind kind);

struct SyntheticParams {
  Variant variant = Variant::AllRelevant;
  CrawlMode mode = CrawlMode::Live;
  int branching = 3;
  int site_depth = 3;  // depth of the page tree below each seed
  int max_depth = 5;
  int cliff_depth = 2;
  int seeds = 1;
  int archives = 2;
  std::uint64_t rng_seed = 1;
};

struct SyntheticPage {
  std::string uri;
  PageKind kind;
  int depth;
  std::vector<std::string> children;
};

struct SyntheticEvent {
  FixtureSite site;
  EventSpec spec;
  std::vector<SyntheticPage> pages;  // tree order
  // Ground truth from the construction: every page the crawl must record,
  // the accepted ones, and the dismissed ones with their reasons.
  std::set<std::string> expected_records;
  std::set<std::string> expected_accepted;
  std::map<std::string, DismissReason> expected_dismissed;
  Timestamp now;  // closes the interval if needed; the spec carries dt_cp
};

// Throws Error on inconsistent parameters.
SyntheticEvent build_synthetic_event(const SyntheticParams& params);

// Text an event vector is built from, and a vocabulary-disjoint counterpart.
std::string_view event_text();
std::string_view off_topic_text();

}  // namespace eventcrawl::testkit
