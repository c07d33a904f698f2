#pragma once

#include "eventcrawl/changepoint.hpp"
#include "eventcrawl/content.hpp"
#include "eventcrawl/temporal.hpp"
#include "eventcrawl/time.hpp"

#include "json.hpp"

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eventcrawl {

class Fetcher;
class MementoClient;

enum class CrawlMode { Live, Archive };
std::string_view to_string(CrawlMode mode);
CrawlMode crawl_mode_from_string(std::string_view text);

// Everything that parameterizes one event crawl.
struct EventSpec {
  std::string name;
  Timestamp dt_e;
  std::optional<Timestamp> dt_cp;        // absent: the live page was used
  std::optional<std::int64_t> revision;  // selected page version, when known
  std::vector<std::string> seeds;
  TermVector event_vector;
  double th_cont = 0;
  double th_temp = 0;
  double alpha = 0.5;
  double beta = 0.5;
  Duration grace_live{};
  Duration grace_archive{};
  int max_depth = 5;
  bool grace_cutoff = true;

  // Always derived from the stored components.
  double th_aggr() const { return aggregate_threshold(th_cont, th_temp, alpha, beta); }
  // Throws Error on a violated invariant.
  void validate() const;
  // Interval for scoring; `now` closes the interval when dt_cp is absent.
  TemporalParams temporal_params(CrawlMode mode, Timestamp now) const;
};

nlohmann::json to_json(const EventSpec& spec);
EventSpec event_spec_from_json(const nlohmann::json& doc);
// Pretty-printed JSON with keys in a fixed order; byte-stable for equal specs.
std::string serialize_event_spec(const EventSpec& spec);

class EventSetupError : public Error {
public:
  using Error::Error;
};

// Full-precision UTC datetime of the first date in `text` ("December 2,
// 2015", "31 October 2017", "2011-01-08", with an optional following
// "10:10 a.m. MST" or "(UTC-07:00)"). Date-only input maps to 00:00:01.
Timestamp parse_event_datetime(std::string_view text);

// Text of the infobox "Date" row, if the page has one.
std::optional<std::string> infobox_date_text(std::string_view wiki_html);

// Main-text of a Wikipedia page: the article body with reference lists,
// navigation boxes and edit chrome removed.
std::string wiki_article_text(std::string_view wiki_html);

// External references in the page's reference lists, resolved against
// base_uri, deduplicated in document order. No language/format filtering.
std::vector<ReferenceEntry> extract_references(std::string_view wiki_html, std::string_view base_uri);

// What fetching a reference revealed; used by the seed filters.
struct FetchedReference {
  int status = 0;
  std::string media_type;
  std::string text;  // extracted main text
};
using ReferenceFetches = std::map<std::string, FetchedReference>;

bool has_non_html_extension(std::string_view uri);
// Non-English country-code TLD or non-Latin script in the path.
bool uri_suggests_non_english(std::string_view uri);
// Fraction of word tokens found in a built-in English stopword list.
double english_stopword_ratio(std::string_view text);

struct SeedFilterOptions {
  double min_stopword_ratio = 0.1;
};

// extract_references followed by the HTML-only and English-only filters.
// Fetched content, when provided, decides format (Content-Type) and
// language (stopword ratio); otherwise URI heuristics decide. Throws
// EventSetupError("no seeds") when nothing survives.
std::vector<ReferenceEntry> extract_seeds(std::string_view wiki_html, std::string_view base_uri,
                                          const ReferenceFetches* fetched = nullptr,
                                          const SeedFilterOptions& options = {});

// Contents of a crawl configuration file. Relative paths are resolved
// against the configuration file's directory.
struct EventConfig {
  std::string name;
  std::string wiki_html_path;
  std::string wiki_base_uri = "https://en.wikipedia.org/wiki/";
  std::string page_title;
  std::string revisions_path;
  std::string mediawiki_api = "https://en.wikipedia.org/w/api.php";
  std::optional<Timestamp> event_datetime;  // overrides the infobox
  double alpha = 0.5;
  double beta = 0.5;
  int max_depth = 5;
  int repeats = 10;
  double split_fraction = 0.6;
  std::uint64_t rng_seed = 0;
  CrawlMode mode = CrawlMode::Live;
  int workers = 1;
  std::chrono::milliseconds request_timeout{30000};
  std::chrono::milliseconds politeness{0};
  std::string idf_path;
  std::string lookup_path;
  std::string timegate = "http://timetravel.mementoweb.org/timegate/";
  std::string fixture_path;
  std::size_t frontier_cap = 100000;
  std::optional<Timestamp> now;  // pins "now" for reproducible runs
  CandidateMode candidate_mode = CandidateMode::Concatenated;
  bool grace_cutoff = true;
  double min_change_improvement = 0.01;
  double min_stopword_ratio = 0.1;

  static EventConfig from_json(const nlohmann::json& doc, const std::string& base_dir = ".");
  static EventConfig load(const std::string& path);
};

struct SetupServices {
  Fetcher* fetcher = nullptr;         // reference pages; null skips fetching
  MementoClient* mementos = nullptr;  // archival datetimes of references
  const IdfTable* idf = nullptr;      // null means uniform IDF
  const TextExtractor* extractor = nullptr;
  Timestamp now{};
};

struct SetupReport {
  std::vector<ReferenceEntry> references;  // surviving seeds with datetimes
  std::vector<std::size_t> sampled;        // event-vector sample over reference texts
  std::size_t reference_texts = 0;
  bool change_point_found = false;
  std::optional<std::string> change_point_note;
};

// Assembles the EventSpec: change point (falling back to the live page when
// none is significant), event datetime, seeds, event vector and thresholds.
EventSpec build_event_spec(std::string_view wiki_html, const RevisionHistory* history, const EventConfig& config,
                           const SetupServices& services, SetupReport* report = nullptr);

}  // namespace eventcrawl
