#pragma once

#include <chrono>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

namespace eventcrawl {

using Timestamp = std::chrono::sys_seconds;
using Duration = std::chrono::seconds;
using Days = std::chrono::days;

// Wall-clock instant with millisecond resolution, used for crawl timing.
using Instant = std::chrono::sys_time<std::chrono::milliseconds>;

// Date-only evidence is pinned to 00:00:01 of its day.
inline constexpr Duration kDateOnlyOffset{1};

// Builds a UTC timestamp; returns nullopt for an invalid calendar date or time.
std::optional<Timestamp> make_timestamp(int year, int month, int day, int hour = 0,
                                        int minute = 0, int second = 0);

// year-month-day at 00:00:01 UTC.
std::optional<Timestamp> make_date_only(int year, int month, int day);

Timestamp start_of_day(Timestamp t);

// ISO-8601: "2017-12-09", "2017-12-09T10:14:50-05:00", "2017-12-09 10:14:50Z",
// fractional seconds ignored. A bare date maps to 00:00:01 UTC.
std::optional<Timestamp> parse_iso8601(std::string_view text);

// RFC 1123 ("Sat, 08 Jan 2011 19:00:00 GMT"), plus the RFC 850 and asctime forms
// HTTP still permits.
std::optional<Timestamp> parse_http_date(std::string_view text);

// 14-digit archive timestamp, YYYYMMDDhhmmss.
std::optional<Timestamp> parse_compact(std::string_view text);

std::string format_iso8601(Timestamp t);
std::string format_iso8601(Instant t);
std::string format_http_date(Timestamp t);
std::string format_compact(Timestamp t);

// Month name or three-letter abbreviation to 1..12, case-insensitive.
std::optional<int> month_from_name(std::string_view name);

class Clock {
public:
  virtual ~Clock() = default;
  virtual Instant now() = 0;
};

class SystemClock final : public Clock {
public:
  Instant now() override;
};

// Deterministic clock: every call to now() returns the previous value plus a
// fixed step. Thread-safe.
class ManualClock final : public Clock {
public:
  explicit ManualClock(Instant start, std::chrono::milliseconds step = std::chrono::milliseconds{0});
  Instant now() override;
  void advance(std::chrono::milliseconds by);

private:
  std::mutex mutex_;
  Instant current_;
  std::chrono::milliseconds step_;
};

}  // namespace eventcrawl
