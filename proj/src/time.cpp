#include "eventcrawl/time.hpp"

#include "eventcrawl/strings.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace eventcrawl {

using namespace std::chrono;

namespace {

constexpr std::array<std::string_view, 12> kMonthNames = {
    "january", "february", "march",     "april",   "may",      "june",
    "july",    "august",   "september", "october", "november", "december"};
constexpr std::array<std::string_view, 7> kWeekdays = {"Sun", "Mon", "Tue", "Wed",
                                                       "Thu", "Fri", "Sat"};

std::optional<int> parse_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!str::is_digit(c)) return false;
  return true;
}

// Parses "hh:mm[:ss[.frac]]" into seconds since midnight.
std::optional<int> parse_clock(std::string_view s) {
  auto parts = str::split(s, ':');
  if (parts.size() < 2 || parts.size() > 3) return std::nullopt;
  auto h = parse_int(parts[0]);
  auto m = parse_int(parts[1]);
  int sec = 0;
  if (parts.size() == 3) {
    auto sec_part = parts[2];
    if (auto dot = sec_part.find_first_of(".,"); dot != std::string_view::npos) {
      if (!all_digits(sec_part.substr(dot + 1))) return std::nullopt;
      sec_part = sec_part.substr(0, dot);
    }
    auto parsed = parse_int(sec_part);
    if (!parsed) return std::nullopt;
    sec = *parsed;
  }
  if (!h || !m || *h < 0 || *h > 23 || *m < 0 || *m > 59 || sec < 0 || sec > 60)
    return std::nullopt;
  return *h * 3600 + *m * 60 + std::min(sec, 59);
}

// Parses "Z", "+hh:mm", "+hhmm", "+hh" into an offset east of UTC in seconds.
std::optional<int> parse_offset(std::string_view s) {
  if (s.empty() || s == "Z" || s == "z") return 0;
  if (s.front() != '+' && s.front() != '-') return std::nullopt;
  int sign = s.front() == '-' ? -1 : 1;
  std::string digits;
  for (char c : s.substr(1)) {
    if (c == ':') continue;
    if (!str::is_digit(c)) return std::nullopt;
    digits.push_back(c);
  }
  if (digits.size() != 2 && digits.size() != 4) return std::nullopt;
  int hours = *parse_int(std::string_view(digits).substr(0, 2));
  int minutes = digits.size() == 4 ? *parse_int(std::string_view(digits).substr(2, 2)) : 0;
  if (hours > 18 || minutes > 59) return std::nullopt;
  return sign * (hours * 3600 + minutes * 60);
}

}  // namespace

std::optional<Timestamp> make_timestamp(int year, int month, int day, int hour, int minute,
                                        int second) {
  if (month < 1 || month > 12 || day < 1 || day > 31) return std::nullopt;
  year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                     std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok()) return std::nullopt;
  if (hour < 0 || hour > 23 || minute < 0 || minute > 59 || second < 0 || second > 59)
    return std::nullopt;
  return sys_days{ymd} + hours{hour} + minutes{minute} + seconds{second};
}

std::optional<Timestamp> make_date_only(int year, int month, int day) {
  auto t = make_timestamp(year, month, day);
  if (!t) return std::nullopt;
  return *t + kDateOnlyOffset;
}

Timestamp start_of_day(Timestamp t) { return floor<days>(t); }

std::optional<Timestamp> parse_iso8601(std::string_view text) {
  text = str::trim(text);
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto y = parse_int(text.substr(0, 4));
  auto mo = parse_int(text.substr(5, 2));
  auto d = parse_int(text.substr(8, 2));
  if (!y || !mo || !d || !all_digits(text.substr(0, 4))) return std::nullopt;
  auto rest = text.substr(10);
  if (rest.empty()) return make_date_only(*y, *mo, *d);
  if (rest.front() != 'T' && rest.front() != 't' && rest.front() != ' ') return std::nullopt;
  rest.remove_prefix(1);
  auto zone_pos = rest.find_first_of("Zz+-");
  auto clock_part = rest.substr(0, zone_pos);
  auto zone_part = zone_pos == std::string_view::npos ? std::string_view{} : rest.substr(zone_pos);
  auto secs = parse_clock(str::trim(clock_part));
  auto offset = parse_offset(str::trim(zone_part));
  if (!secs || !offset) return std::nullopt;
  auto base = make_timestamp(*y, *mo, *d);
  if (!base) return std::nullopt;
  return *base + seconds{*secs} - seconds{*offset};
}

std::optional<Timestamp> parse_http_date(std::string_view text) {
  std::optional<int> day, month, year, clock;
  bool zone_ok = true;
  std::string token;
  auto flush = [&](std::string_view tok) {
    if (tok.empty()) return;
    if (tok.find(':') != std::string_view::npos) {
      clock = parse_clock(tok);
      if (!clock) zone_ok = false;
    } else if (auto m = month_from_name(tok); m && !month) {
      month = m;
    } else if (all_digits(tok)) {
      int v = *parse_int(tok);
      if (tok.size() == 4) {
        year = v;
      } else if (!day) {
        day = v;
      } else if (!year && tok.size() == 2) {
        year = v < 70 ? 2000 + v : 1900 + v;
      } else {
        zone_ok = false;
      }
    } else if (str::iequals(tok, "GMT") || str::iequals(tok, "UTC") || str::iequals(tok, "UT") ||
               tok == "+0000" || tok == "Z") {
      // UTC designators
    } else {
      bool weekday = false;
      for (auto w : kWeekdays)
        if (str::istarts_with(tok, w)) weekday = true;
      if (!weekday) zone_ok = false;
    }
  };
  for (char c : text) {
    if (c == ' ' || c == ',' || c == '-' || c == '\t') {
      flush(token);
      token.clear();
    } else {
      token.push_back(c);
    }
  }
  flush(token);
  if (!zone_ok || !day || !month || !year || !clock) return std::nullopt;
  auto base = make_timestamp(*year, *month, *day);
  if (!base) return std::nullopt;
  return *base + seconds{*clock};
}

std::optional<Timestamp> parse_compact(std::string_view text) {
  if (text.size() != 14 || !all_digits(text)) return std::nullopt;
  return make_timestamp(*parse_int(text.substr(0, 4)), *parse_int(text.substr(4, 2)),
                        *parse_int(text.substr(6, 2)), *parse_int(text.substr(8, 2)),
                        *parse_int(text.substr(10, 2)), *parse_int(text.substr(12, 2)));
}

namespace {
struct Fields {
  int year;
  unsigned month, day, weekday;
  long hour, minute, second;
};

Fields split_fields(Timestamp t) {
  auto day_point = floor<days>(t);
  year_month_day ymd{day_point};
  hh_mm_ss hms{t - day_point};
  return {static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
          static_cast<unsigned>(ymd.day()), weekday{day_point}.c_encoding(),
          hms.hours().count(), hms.minutes().count(), static_cast<long>(hms.seconds().count())};
}
}  // namespace

std::string format_iso8601(Timestamp t) {
  auto f = split_fields(t);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ldZ", f.year, f.month, f.day, f.hour,
                f.minute, f.second);
  return buf;
}

std::string format_iso8601(Instant t) {
  auto secs = floor<seconds>(t);
  auto millis = (t - secs).count();
  auto base = format_iso8601(Timestamp{secs});
  char buf[8];
  std::snprintf(buf, sizeof buf, ".%03lldZ", static_cast<long long>(millis));
  base.pop_back();
  return base + buf;
}

std::string format_http_date(Timestamp t) {
  static constexpr std::array<const char*, 12> kMonths = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                          "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  auto f = split_fields(t);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%s, %02u %s %04d %02ld:%02ld:%02ld GMT",
                std::string(kWeekdays[f.weekday]).c_str(), f.day, kMonths[f.month - 1], f.year, f.hour,
                f.minute, f.second);
  return buf;
}

std::string format_compact(Timestamp t) {
  auto f = split_fields(t);
  char buf[24];
  std::snprintf(buf, sizeof buf, "%04d%02u%02u%02ld%02ld%02ld", f.year, f.month, f.day, f.hour, f.minute,
                f.second);
  return buf;
}

std::optional<int> month_from_name(std::string_view name) {
  auto lowered = str::to_lower(name);
  if (!lowered.empty() && lowered.back() == '.') lowered.pop_back();
  if (lowered.size() < 3) return std::nullopt;
  for (std::size_t i = 0; i < kMonthNames.size(); ++i) {
    auto full = kMonthNames[i];
    if (lowered == full || lowered == full.substr(0, 3) || (lowered == "sept" && i == 8))
      return static_cast<int>(i + 1);
  }
  return std::nullopt;
}

Instant SystemClock::now() { return floor<milliseconds>(system_clock::now()); }

ManualClock::ManualClock(Instant start, milliseconds step) : current_(start), step_(step) {}

Instant ManualClock::now() {
  std::lock_guard lock(mutex_);
  auto value = current_;
  current_ += step_;
  return value;
}

void ManualClock::advance(milliseconds by) {
  std::lock_guard lock(mutex_);
  current_ += by;
}

}  // namespace eventcrawl
