#pragma once

#include "eventcrawl/content.hpp"
#include "eventcrawl/datetime_extract.hpp"
#include "eventcrawl/event_setup.hpp"
#include "eventcrawl/http.hpp"
#include "eventcrawl/memento.hpp"
#include "eventcrawl/temporal.hpp"
#include "eventcrawl/time.hpp"

#include "json.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace eventcrawl {

// Anchor targets of a page: resolved against base_uri (or <base href>),
// normalized, http(s) only, same-page fragments dropped, first occurrence kept.
std::vector<std::string> extract_outlinks(std::string_view html, std::string_view base_uri);

struct FrontierEntry {
  std::string uri;
  int depth = 0;
  double priority = 1.0;
  std::optional<std::string> parent;
  std::uint64_t seq = 0;  // assigned on push; breaks priority ties FIFO
};

enum class OverflowPolicy { EvictLowest, Error };

class FrontierOverflow : public Error {
public:
  using Error::Error;
};

// Priority queue of URIs awaiting crawling: highest priority first, equal
// priorities in insertion order. Not synchronized.
class Frontier {
public:
  // Called on every pop with the popped entry and the highest priority still
  // queued afterwards (nullopt when the queue is now empty).
  using PopHook = std::function<void(const FrontierEntry&, std::optional<double>)>;

  explicit Frontier(std::size_t capacity = 100000, OverflowPolicy policy = OverflowPolicy::EvictLowest);

  // Returns false when the entry was dropped because the queue is full and
  // it ranks below everything queued. Throws FrontierOverflow under the
  // Error policy.
  bool push(FrontierEntry entry);
  std::optional<FrontierEntry> pop();

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  std::optional<double> max_priority() const;
  std::size_t dropped() const { return dropped_; }
  std::vector<FrontierEntry> snapshot() const { return {entries_.begin(), entries_.end()}; }

  PopHook on_pop;

private:
  struct Order {
    bool operator()(const FrontierEntry& a, const FrontierEntry& b) const {
      if (a.priority != b.priority) return a.priority > b.priority;
      return a.seq < b.seq;
    }
  };

  std::set<FrontierEntry, Order> entries_;
  std::size_t capacity_;
  OverflowPolicy policy_;
  std::uint64_t next_seq_ = 0;
  std::size_t dropped_ = 0;
};

enum class DismissReason { NoDatetime, FetchFailed, NotArchived, NonHtml };
std::string_view to_string(DismissReason reason);
DismissReason dismiss_reason_from_string(std::string_view text);

struct CrawlRecord {
  std::uint64_t seq = 0;  // dequeue order
  std::string uri;        // normalized; a URI-R in archive mode
  std::optional<std::string> uri_m;
  int depth = 0;
  std::optional<std::string> parent;
  int status = 0;
  std::optional<Timestamp> dt_r;
  std::optional<std::string> dt_source;
  std::optional<double> r_cont;
  std::optional<double> r_temp;
  std::optional<double> r_aggr;
  bool accepted = false;
  std::optional<DismissReason> dismissed;
  std::optional<std::string> detail;
  std::optional<std::string> archive_id;
  Instant fetched_at{};
  std::chrono::milliseconds elapsed{0};
  std::optional<std::string> body_sha256;

  friend bool operator==(const CrawlRecord&, const CrawlRecord&) = default;
};

nlohmann::json to_json(const CrawlRecord& record);
CrawlRecord crawl_record_from_json(const nlohmann::json& doc);

struct Collection {
  EventSpec event;
  CrawlMode mode = CrawlMode::Live;
  std::vector<CrawlRecord> records;
  Instant started_at{};
  Instant finished_at{};
};

// r_aggr >= th_aggr; the boundary is inclusive.
bool accept(const RelevanceScores& scores, const EventSpec& spec);

std::string sha256_hex(std::string_view data);

// <dir>/collection.jsonl, <dir>/event.json and <dir>/crawl.json (mode and
// timing). Raw bodies are written by the crawl's body sink.
void save_collection(const Collection& collection, const std::string& dir);
Collection load_collection(const std::string& dir);
std::string serialize_records(const std::vector<CrawlRecord>& records);

struct CrawlServices {
  Fetcher* fetcher = nullptr;         // live mode
  MementoClient* mementos = nullptr;  // archive mode
  DatetimeLookup* lookup = nullptr;
  const IdfTable* idf = nullptr;  // null means uniform IDF
  const TextExtractor* extractor = nullptr;
  Clock* clock = nullptr;  // null means the system clock
};

struct CrawlOptions {
  CrawlMode mode = CrawlMode::Live;
  int workers = 1;
  std::size_t frontier_cap = 100000;
  OverflowPolicy overflow = OverflowPolicy::EvictLowest;
  // Closes the temporal interval when the event has no change point;
  // defaults to the clock at crawl start.
  std::optional<Timestamp> now;
  Frontier::PopHook on_pop;
  std::function<void(const FrontierEntry&)> on_enqueue;
  // Receives every fetched body with its digest (e.g. to write raw/<digest>.html).
  std::function<void(const std::string& digest, const std::string& body)> body_sink;
};

Collection crawl(const EventSpec& spec, const CrawlOptions& options, const CrawlServices& services);

}  // namespace eventcrawl
