#pragma once

#include "eventcrawl/http.hpp"
#include "eventcrawl/memento.hpp"
#include "eventcrawl/temporal.hpp"
#include "eventcrawl/time.hpp"

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace eventcrawl {

enum class EvidenceSource { UriPattern, HtmlMeta, ExternalLookup, MementoDatetime, ArchivedHeader };

std::string_view to_string(EvidenceSource source);

struct DatetimeEvidence {
  EvidenceSource source;
  Timestamp value;

  friend bool operator==(const DatetimeEvidence&, const DatetimeEvidence&) = default;
};

// No datetime could be attributed; the resource is dismissed.
struct Dismissal {
  std::string reason;
};

using DatetimeOutcome = std::variant<DatetimeEvidence, Dismissal>;

// Date embedded in the URI path: /YYYY/MM/DD/, YYYY-MM-DD, YYYYMMDD, then
// /YYYY/MM/ (first of the month). Years 1990-2049 only; date-only values
// are pinned to 00:00:01 UTC.
std::optional<Timestamp> datetime_from_uri(std::string_view uri);

// Earliest publication date in <meta> or <time> elements whose
// property/name/itemprop is one of article:published,
// article:published_time, datePublished, og:published_time, date, dc.date.
std::optional<Timestamp> datetime_from_html(std::string_view html);

// First-mention datetime provider (CarbonDate-style). Implementations must be
// safe to call concurrently and may throw on failure.
class DatetimeLookup {
public:
  virtual ~DatetimeLookup() = default;
  virtual std::optional<Timestamp> lookup(const std::string& uri) = 0;
};

// Offline provider backed by a JSON object mapping URI to ISO-8601 datetime.
class StubLookup final : public DatetimeLookup {
public:
  StubLookup() = default;
  static StubLookup load(const std::string& path);
  static StubLookup parse(std::string_view json);

  void add(std::string uri, Timestamp when);
  std::optional<Timestamp> lookup(const std::string& uri) override;

private:
  std::map<std::string, Timestamp> table_;
};

// Provider failures are logged as warnings and reported as no evidence.
std::optional<Timestamp> datetime_from_external(const std::string& uri, DatetimeLookup* lookup);

// Earliest of URI, HTML and external evidence; dismissal when none exist.
DatetimeOutcome resolve_live(const std::string& uri, std::string_view html, DatetimeLookup* lookup);

// Memento-Datetime when it falls inside [dt_e, dt_cp]; otherwise external
// lookup on the original URI, then archived Last-Modified X-headers.
// Throws MementoProtocolError when the response lacks Memento-Datetime.
DatetimeOutcome resolve_memento(const Memento& memento, const Headers& response_headers, DatetimeLookup* lookup,
                                const TemporalParams& params);

}  // namespace eventcrawl
