#include "eventcrawl/datetime_extract.hpp"

#include "eventcrawl/html.hpp"
#include "eventcrawl/strings.hpp"
#include "eventcrawl/uri.hpp"

#include "json.hpp"

#include <spdlog/spdlog.h>

#include <array>
#include <fstream>
#include <regex>
#include <sstream>

namespace eventcrawl {

std::string_view to_string(EvidenceSource source) {
  switch (source) {
    case EvidenceSource::UriPattern:
      return "uri_pattern";
    case EvidenceSource::HtmlMeta:
      return "html_meta";
    case EvidenceSource::ExternalLookup:
      return "external_lookup";
    case EvidenceSource::MementoDatetime:
      return "memento_datetime";
    case EvidenceSource::ArchivedHeader:
      return "archived_header";
  }
  return "unknown";
}

namespace {

std::optional<Timestamp> bounded_date(const std::string& y, const std::string& m, const std::string& d) {
  int year = std::stoi(y);
  if (year < 1990 || year > 2049) return std::nullopt;
  return make_date_only(year, std::stoi(m), std::stoi(d));
}

}  // namespace

std::optional<Timestamp> datetime_from_uri(std::string_view uri) {
  std::string path;
  try {
    auto parsed = Uri::parse(uri);
    path = parsed.path;
  } catch (const UriError&) {
    return std::nullopt;
  }
  static const std::regex kSlashYmd(R"(/(\d{4})/(\d{1,2})/(\d{1,2})(?=/|$|[^0-9]))");
  static const std::regex kDashYmd(R"((?:^|[^0-9])(\d{4})-(\d{2})-(\d{2})(?=$|[^0-9]))");
  static const std::regex kCompactYmd(R"((?:^|[^0-9])(\d{4})(\d{2})(\d{2})(?=$|[^0-9]))");
  static const std::regex kSlashYm(R"(/(\d{4})/(\d{1,2})(?=/|$))");

  for (const auto* pattern : {&kSlashYmd, &kDashYmd, &kCompactYmd}) {
    for (std::sregex_iterator it(path.begin(), path.end(), *pattern), end; it != end; ++it) {
      if (auto t = bounded_date((*it)[1], (*it)[2], (*it)[3])) return t;
    }
  }
  for (std::sregex_iterator it(path.begin(), path.end(), kSlashYm), end; it != end; ++it) {
    if (auto t = bounded_date((*it)[1], (*it)[2], "1")) return t;
  }
  return std::nullopt;
}

std::optional<Timestamp> datetime_from_html(std::string_view input) {
  static constexpr std::array<std::string_view, 6> kProperties = {
      "article:published", "article:published_time", "datepublished", "og:published_time", "date", "dc.date"};
  auto is_date_property = [](const html::Token& t) {
    for (auto attr : {"property", "name", "itemprop"}) {
      auto value = t.attribute(attr);
      if (!value) continue;
      for (auto token : str::split(*value, ' ')) {
        auto lowered = str::to_lower(str::trim(token));
        for (auto p : kProperties)
          if (lowered == p) return true;
      }
    }
    return false;
  };

  std::optional<Timestamp> earliest;
  auto consider = [&](const std::string& raw) {
    auto value = parse_iso8601(raw);
    if (!value) value = parse_http_date(raw);
    if (value && (!earliest || *value < *earliest)) earliest = value;
  };
  for (const auto& t : html::tokenize(input)) {
    if (t.kind != html::Token::Kind::StartTag) continue;
    if (t.name == "meta" && is_date_property(t)) {
      if (auto content = t.attribute("content")) consider(*content);
    } else if (t.name == "time" && (is_date_property(t) || t.has_attribute("pubdate"))) {
      if (auto dt = t.attribute("datetime")) consider(*dt);
    }
  }
  return earliest;
}

StubLookup StubLookup::parse(std::string_view text) {
  StubLookup stub;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("lookup map: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("lookup map must be a JSON object");
  for (const auto& [uri, value] : doc.items()) {
    auto when = value.is_string() ? parse_iso8601(value.get<std::string>()) : std::nullopt;
    if (!when) throw ParseError("lookup map: bad datetime for " + uri);
    stub.add(uri, *when);
  }
  return stub;
}

StubLookup StubLookup::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lookup map " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

void StubLookup::add(std::string uri, Timestamp when) { table_[std::move(uri)] = when; }

std::optional<Timestamp> StubLookup::lookup(const std::string& uri) {
  auto it = table_.find(uri);
  if (it != table_.end()) return it->second;
  try {
    it = table_.find(normalize_uri(uri));
  } catch (const UriError&) {
    return std::nullopt;
  }
  return it == table_.end() ? std::nullopt : std::optional<Timestamp>(it->second);
}

std::optional<Timestamp> datetime_from_external(const std::string& uri, DatetimeLookup* lookup) {
  if (!lookup) return std::nullopt;
  try {
    return lookup->lookup(uri);
  } catch (const std::exception& e) {
    spdlog::warn("datetime lookup failed for {}: {}", uri, e.what());
    return std::nullopt;
  }
}

DatetimeOutcome resolve_live(const std::string& uri, std::string_view html, DatetimeLookup* lookup) {
  std::optional<DatetimeEvidence> best;
  auto consider = [&](std::optional<Timestamp> value, EvidenceSource source) {
    if (value && (!best || *value < best->value)) best = DatetimeEvidence{source, *value};
  };
  consider(datetime_from_uri(uri), EvidenceSource::UriPattern);
  consider(datetime_from_html(html), EvidenceSource::HtmlMeta);
  consider(datetime_from_external(uri, lookup), EvidenceSource::ExternalLookup);
  if (best) return *best;
  return Dismissal{"no datetime evidence for " + uri};
}

namespace {

bool is_archived_last_modified(std::string_view name) {
  auto lowered = str::to_lower(name);
  if (lowered == "x-last-modified") return true;
  return str::istarts_with(lowered, "x-") && lowered.find("-orig-") != std::string::npos &&
         lowered.size() >= 13 && lowered.compare(lowered.size() - 13, 13, "last-modified") == 0;
}

}  // namespace

DatetimeOutcome resolve_memento(const Memento& memento, const Headers& headers, DatetimeLookup* lookup,
                                const TemporalParams& params) {
  auto header = headers.get("Memento-Datetime");
  if (!header) throw MementoProtocolError("memento " + memento.uri_m + " has no Memento-Datetime header");
  auto archived = parse_http_date(*header);
  if (!archived) throw MementoProtocolError("unparseable Memento-Datetime '" + *header + "'");

  if (params.dt_e <= *archived && *archived <= params.dt_cp)
    return DatetimeEvidence{EvidenceSource::MementoDatetime, *archived};

  if (auto external = datetime_from_external(memento.uri_r, lookup))
    return DatetimeEvidence{EvidenceSource::ExternalLookup, *external};

  std::optional<Timestamp> earliest;
  for (const auto& [name, value] : headers) {
    if (!is_archived_last_modified(name)) continue;
    auto parsed = parse_http_date(value);
    if (parsed && (!earliest || *parsed < *earliest)) earliest = parsed;
  }
  if (earliest) return DatetimeEvidence{EvidenceSource::ArchivedHeader, *earliest};
  return Dismissal{"memento " + memento.uri_m + " archived outside the event interval without other evidence"};
}

}  // namespace eventcrawl
