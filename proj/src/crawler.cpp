#include "eventcrawl/crawler.hpp"

#include "eventcrawl/html.hpp"
#include "eventcrawl/strings.hpp"
#include "eventcrawl/uri.hpp"

#include <openssl/evp.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_set>

namespace eventcrawl {

using nlohmann::json;

std::vector<std::string> extract_outlinks(std::string_view page, std::string_view base_uri) {
  auto tokens = html::tokenize(page);
  std::string base(base_uri);
  for (const auto& t : tokens) {
    if (!t.is_start("base")) continue;
    if (auto href = t.attribute("href")) {
      try {
        base = resolve(base, str::trim(*href));
      } catch (const UriError&) {
      }
    }
    break;
  }

  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& t : tokens) {
    if (!(t.is_start("a") || t.is_start("area"))) continue;
    auto href = t.attribute("href");
    if (!href) continue;
    auto target = str::trim(*href);
    if (target.empty() || target.front() == '#') continue;
    try {
      auto resolved = resolve(base, target);
      if (!is_http_uri(resolved)) continue;
      auto normalized = normalize_uri(resolved);
      if (seen.insert(normalized).second) out.push_back(std::move(normalized));
    } catch (const UriError&) {
    }
  }
  return out;
}

// ---- Frontier ---------------------------------------------------------------

Frontier::Frontier(std::size_t capacity, OverflowPolicy policy) : capacity_(capacity), policy_(policy) {
  if (capacity_ == 0) throw Error("frontier capacity must be positive");
}

bool Frontier::push(FrontierEntry entry) {
  entry.seq = next_seq_++;
  if (entries_.size() >= capacity_) {
    if (policy_ == OverflowPolicy::Error)
      throw FrontierOverflow("frontier full (" + std::to_string(capacity_) + " entries) while adding " + entry.uri);
    auto lowest = std::prev(entries_.end());
    if (!Order{}(entry, *lowest)) {
      ++dropped_;
      return false;
    }
    entries_.erase(lowest);
    ++dropped_;
  }
  entries_.insert(std::move(entry));
  return true;
}

std::optional<FrontierEntry> Frontier::pop() {
  if (entries_.empty()) return std::nullopt;
  auto node = entries_.extract(entries_.begin());
  FrontierEntry entry = std::move(node.value());
  if (on_pop) on_pop(entry, max_priority());
  return entry;
}

std::optional<double> Frontier::max_priority() const {
  if (entries_.empty()) return std::nullopt;
  return entries_.begin()->priority;
}

// ---- records ------------------------------------------------------------------

std::string_view to_string(DismissReason reason) {
  switch (reason) {
    case DismissReason::NoDatetime:
      return "no_datetime";
    case DismissReason::FetchFailed:
      return "fetch_failed";
    case DismissReason::NotArchived:
      return "not_archived";
    case DismissReason::NonHtml:
      return "non_html";
  }
  return "unknown";
}

DismissReason dismiss_reason_from_string(std::string_view text) {
  for (auto r : {DismissReason::NoDatetime, DismissReason::FetchFailed, DismissReason::NotArchived,
                 DismissReason::NonHtml})
    if (to_string(r) == text) return r;
  throw ParseError("unknown dismissal reason '" + std::string(text) + "'");
}

namespace {

template <typename T>
json opt(const std::optional<T>& value) {
  return value ? json(*value) : json(nullptr);
}

template <typename T>
std::optional<T> get_opt(const json& doc, const char* key) {
  if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
  return doc[key].get<T>();
}

Instant parse_instant(const std::string& text) {
  // "YYYY-MM-DDThh:mm:ss.mmmZ"
  auto dot = text.find('.');
  auto whole = parse_iso8601(text.substr(0, dot) + "Z");
  if (!whole) throw ParseError("bad instant '" + text + "'");
  Instant t = *whole;
  if (dot != std::string::npos) t += std::chrono::milliseconds{std::stoi(text.substr(dot + 1, 3))};
  return t;
}

}  // namespace

json to_json(const CrawlRecord& r) {
  return json{
      {"seq", r.seq},
      {"uri", r.uri},
      {"uri_m", opt(r.uri_m)},
      {"depth", r.depth},
      {"parent", opt(r.parent)},
      {"status", r.status},
      {"dt_r", r.dt_r ? json(format_iso8601(*r.dt_r)) : json(nullptr)},
      {"dt_source", opt(r.dt_source)},
      {"r_cont", opt(r.r_cont)},
      {"r_temp", opt(r.r_temp)},
      {"r_aggr", opt(r.r_aggr)},
      {"accepted", r.accepted},
      {"dismissed_reason", r.dismissed ? json(std::string(to_string(*r.dismissed))) : json(nullptr)},
      {"detail", opt(r.detail)},
      {"archive_id", opt(r.archive_id)},
      {"fetched_at", format_iso8601(r.fetched_at)},
      {"elapsed_ms", r.elapsed.count()},
      {"body_sha256", opt(r.body_sha256)},
  };
}

CrawlRecord crawl_record_from_json(const json& doc) {
  try {
    CrawlRecord r;
    r.seq = doc.at("seq").get<std::uint64_t>();
    r.uri = doc.at("uri").get<std::string>();
    r.uri_m = get_opt<std::string>(doc, "uri_m");
    r.depth = doc.at("depth").get<int>();
    r.parent = get_opt<std::string>(doc, "parent");
    r.status = doc.value("status", 0);
    if (auto dt = get_opt<std::string>(doc, "dt_r")) {
      r.dt_r = parse_iso8601(*dt);
      if (!r.dt_r) throw ParseError("bad dt_r '" + *dt + "'");
    }
    r.dt_source = get_opt<std::string>(doc, "dt_source");
    r.r_cont = get_opt<double>(doc, "r_cont");
    r.r_temp = get_opt<double>(doc, "r_temp");
    r.r_aggr = get_opt<double>(doc, "r_aggr");
    r.accepted = doc.at("accepted").get<bool>();
    if (auto reason = get_opt<std::string>(doc, "dismissed_reason")) r.dismissed = dismiss_reason_from_string(*reason);
    r.detail = get_opt<std::string>(doc, "detail");
    r.archive_id = get_opt<std::string>(doc, "archive_id");
    r.fetched_at = parse_instant(doc.at("fetched_at").get<std::string>());
    r.elapsed = std::chrono::milliseconds{doc.at("elapsed_ms").get<std::int64_t>()};
    r.body_sha256 = get_opt<std::string>(doc, "body_sha256");
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("crawl record: ") + e.what());
  }
}

bool accept(const RelevanceScores& scores, const EventSpec& spec) { return scores.r_aggr >= spec.th_aggr(); }

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

std::string serialize_records(const std::vector<CrawlRecord>& records) {
  std::string out;
  for (const auto& r : records) out += to_json(r).dump() + "\n";
  return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("write failed for " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

void save_collection(const Collection& collection, const std::string& dir) {
  std::filesystem::create_directories(dir);
  write_file(std::filesystem::path(dir) / "collection.jsonl", serialize_records(collection.records));
  write_file(std::filesystem::path(dir) / "event.json", serialize_event_spec(collection.event));
  json meta = {{"mode", std::string(to_string(collection.mode))},
               {"started_at", format_iso8601(collection.started_at)},
               {"finished_at", format_iso8601(collection.finished_at)},
               {"records", collection.records.size()}};
  write_file(std::filesystem::path(dir) / "crawl.json", meta.dump(2) + "\n");
}

Collection load_collection(const std::string& dir) {
  Collection c;
  try {
    c.event = event_spec_from_json(json::parse(read_file(std::filesystem::path(dir) / "event.json")));
    auto meta = json::parse(read_file(std::filesystem::path(dir) / "crawl.json"));
    c.mode = crawl_mode_from_string(meta.at("mode").get<std::string>());
    c.started_at = parse_instant(meta.at("started_at").get<std::string>());
    c.finished_at = parse_instant(meta.at("finished_at").get<std::string>());
  } catch (const json::exception& e) {
    throw ParseError("collection " + dir + ": " + e.what());
  }
  std::istringstream lines(read_file(std::filesystem::path(dir) / "collection.jsonl"));
  std::string line;
  std::size_t number = 0;
  while (std::getline(lines, line)) {
    ++number;
    if (str::trim(line).empty()) continue;
    try {
      c.records.push_back(crawl_record_from_json(json::parse(line)));
    } catch (const std::exception& e) {
      throw ParseError("collection.jsonl line " + std::to_string(number) + ": " + e.what());
    }
  }
  return c;
}

// ---- crawl loop -------------------------------------------------------------

namespace {

bool is_html_type(const std::string& media_type) {
  return media_type.empty() || media_type == "text/html" || media_type == "application/xhtml+xml";
}

// Outlinks of a memento mapped back to original resources. Links that stay
// on the archive host without a recognizable URI-M form are dropped.
std::vector<std::string> original_outlinks(std::string_view body, const std::string& uri_m) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  std::string archive_host;
  try {
    archive_host = str::to_lower(host_of(uri_m));
  } catch (const UriError&) {
  }
  for (auto& link : extract_outlinks(body, uri_m)) {
    std::optional<std::string> original;
    if (auto stripped = strip_archive_prefix(link)) {
      original = *stripped;
    } else {
      std::string host;
      try {
        host = str::to_lower(host_of(link));
      } catch (const UriError&) {
        continue;
      }
      if (host == archive_host) continue;
      original = link;
    }
    try {
      auto normalized = normalize_uri(*original);
      if (seen.insert(normalized).second) out.push_back(std::move(normalized));
    } catch (const UriError&) {
    }
  }
  return out;
}

struct Outcome {
  CrawlRecord record;
  std::vector<std::string> outlinks;
};

class CrawlRun {
public:
  CrawlRun(const EventSpec& spec, const CrawlOptions& options, const CrawlServices& services)
      : spec_(spec),
        options_(options),
        services_(services),
        frontier_(options.frontier_cap, options.overflow),
        extractor_(services.extractor ? services.extractor : &default_extractor_),
        idf_(services.idf ? services.idf : &uniform_idf_),
        clock_(services.clock ? services.clock : &system_clock_) {
    if (options_.mode == CrawlMode::Live && !services_.fetcher) throw Error("live crawl needs a fetcher");
    if (options_.mode == CrawlMode::Archive && !services_.mementos) throw Error("archive crawl needs a memento client");
    if (options_.workers < 1) throw Error("workers must be >= 1");
    frontier_.on_pop = options_.on_pop;
  }

  Collection run() {
    Collection collection;
    collection.event = spec_;
    collection.mode = options_.mode;
    started_ = clock_->now();
    collection.started_at = started_;
    auto now = options_.now.value_or(std::chrono::floor<std::chrono::seconds>(started_));
    params_ = spec_.temporal_params(options_.mode, now);

    for (const auto& seed : spec_.seeds) {
      std::string uri;
      try {
        uri = normalize_uri(seed);
      } catch (const UriError& e) {
        spdlog::warn("skipping seed {}: {}", seed, e.what());
        continue;
      }
      enqueue(FrontierEntry{uri, 0, 1.0, std::nullopt, 0});
    }

    if (options_.workers == 1) {
      worker();
    } else {
      std::vector<std::thread> threads;
      for (int i = 0; i < options_.workers; ++i) threads.emplace_back([this] { worker(); });
      for (auto& t : threads) t.join();
    }
    if (failure_) std::rethrow_exception(failure_);

    for (auto& [seq, record] : records_) collection.records.push_back(std::move(record));
    collection.finished_at = clock_->now();
    return collection;
  }

private:
  // Caller holds mutex_ (or is the only thread).
  void enqueue(FrontierEntry entry) {
    if (visited_.contains(entry.uri)) return;
    if (options_.on_enqueue) options_.on_enqueue(entry);
    frontier_.push(std::move(entry));
  }

  void worker() {
    std::unique_lock lock(mutex_);
    while (true) {
      cv_.wait(lock, [&] { return failure_ || !frontier_.empty() || in_flight_ == 0; });
      if (failure_ || (frontier_.empty() && in_flight_ == 0)) break;
      auto entry = *frontier_.pop();
      if (!visited_.insert(entry.uri).second) continue;
      auto seq = next_record_++;
      ++in_flight_;
      lock.unlock();

      Outcome outcome;
      std::exception_ptr error;
      try {
        outcome = process(entry);
        outcome.record.seq = seq;
      } catch (...) {
        error = std::current_exception();
      }

      lock.lock();
      --in_flight_;
      if (error) {
        failure_ = error;
      } else {
        try {
          if (outcome.record.accepted && entry.depth < spec_.max_depth) {
            double priority = std::clamp(*outcome.record.r_aggr, 0.0, 1.0);
            for (auto& link : outcome.outlinks) enqueue(FrontierEntry{link, entry.depth + 1, priority, entry.uri, 0});
          }
        } catch (...) {
          failure_ = std::current_exception();
        }
        records_.emplace(seq, std::move(outcome.record));
      }
      cv_.notify_all();
    }
    cv_.notify_all();
  }

  Outcome process(const FrontierEntry& entry) {
    Outcome out;
    auto& r = out.record;
    r.uri = entry.uri;
    r.depth = entry.depth;
    r.parent = entry.parent;

    auto stamp = [&] {
      r.fetched_at = clock_->now();
      r.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(r.fetched_at - started_);
    };
    auto dismiss = [&](DismissReason reason, std::string detail) {
      r.dismissed = reason;
      r.detail = std::move(detail);
      return out;
    };

    HttpResponse response;
    std::optional<Memento> memento;
    if (options_.mode == CrawlMode::Live) {
      try {
        response = fetch_following_redirects(*services_.fetcher, HttpRequest{entry.uri, {}});
      } catch (const Error& e) {
        stamp();
        return dismiss(DismissReason::FetchFailed, e.what());
      }
      stamp();
      r.status = response.status;
      if (!response.ok()) return dismiss(DismissReason::FetchFailed, "HTTP " + std::to_string(response.status));
    } else {
      NegotiationResult result;
      try {
        result = services_.mementos->negotiate(entry.uri, spec_.dt_e);
      } catch (const Error& e) {
        stamp();
        return dismiss(DismissReason::FetchFailed, e.what());
      }
      stamp();
      if (auto* failure = std::get_if<NegotiationError>(&result)) {
        bool missing = failure->kind == NegotiationFailure::NotArchived ||
                       failure->kind == NegotiationFailure::NoPostEventMemento;
        return dismiss(missing ? DismissReason::NotArchived : DismissReason::FetchFailed,
                       std::string(to_string(failure->kind)) + ": " + failure->detail);
      }
      auto& found = std::get<NegotiatedMemento>(result);
      response = std::move(found.response);
      memento = found.memento;
      r.status = response.status;
      r.uri_m = memento->uri_m;
      r.archive_id = memento->archive_id;
    }

    r.body_sha256 = sha256_hex(response.body);
    if (options_.body_sink) options_.body_sink(*r.body_sha256, response.body);
    if (!is_html_type(response.media_type())) return dismiss(DismissReason::NonHtml, response.media_type());

    auto text = extractor_->extract(response.body);
    double r_cont = cosine(spec_.event_vector, build_term_vector(text, *idf_));
    r.r_cont = r_cont;

    DatetimeOutcome dated;
    if (memento) {
      try {
        dated = resolve_memento(*memento, response.headers, services_.lookup, params_);
      } catch (const MementoProtocolError& e) {
        return dismiss(DismissReason::FetchFailed, e.what());
      }
    } else {
      dated = resolve_live(entry.uri, response.body, services_.lookup);
    }
    if (auto* none = std::get_if<Dismissal>(&dated)) return dismiss(DismissReason::NoDatetime, none->reason);
    const auto& evidence = std::get<DatetimeEvidence>(dated);
    r.dt_r = evidence.value;
    r.dt_source = std::string(to_string(evidence.source));

    auto scores = RelevanceScores::combine(r_cont, temporal_score(evidence.value, params_), spec_.alpha, spec_.beta);
    r.r_temp = scores.r_temp;
    r.r_aggr = scores.r_aggr;
    r.accepted = accept(scores, spec_);

    if (r.accepted && entry.depth < spec_.max_depth) {
      out.outlinks = memento ? original_outlinks(response.body, memento->uri_m)
                             : extract_outlinks(response.body, response.url.empty() ? entry.uri : response.url);
    }
    return out;
  }

  const EventSpec& spec_;
  const CrawlOptions& options_;
  const CrawlServices& services_;
  Frontier frontier_;

  DensityExtractor default_extractor_;
  IdfTable uniform_idf_;
  SystemClock system_clock_;
  const TextExtractor* extractor_;
  const IdfTable* idf_;
  Clock* clock_;

  TemporalParams params_{};
  Instant started_{};

  std::mutex mutex_;
  std::condition_variable cv_;
  std::unordered_set<std::string> visited_;
  std::map<std::uint64_t, CrawlRecord> records_;
  std::uint64_t next_record_ = 0;
  int in_flight_ = 0;
  std::exception_ptr failure_;
};

}  // namespace

Collection crawl(const EventSpec& spec, const CrawlOptions& options, const CrawlServices& services) {
  if (spec.seeds.empty()) throw Error("crawl needs at least one seed");
  CrawlRun run(spec, options, services);
  return run.run();
}

}  // namespace eventcrawl
