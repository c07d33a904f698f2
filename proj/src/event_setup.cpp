#include "eventcrawl/event_setup.hpp"

#include "eventcrawl/html.hpp"
#include "eventcrawl/http.hpp"
#include "eventcrawl/memento.hpp"
#include "eventcrawl/strings.hpp"
#include "eventcrawl/uri.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <unordered_set>

namespace eventcrawl {

using nlohmann::json;

std::string_view to_string(CrawlMode mode) { return mode == CrawlMode::Live ? "live" : "archive"; }

CrawlMode crawl_mode_from_string(std::string_view text) {
  auto lowered = str::to_lower(str::trim(text));
  if (lowered == "live") return CrawlMode::Live;
  if (lowered == "archive") return CrawlMode::Archive;
  throw Error("unknown crawl mode '" + std::string(text) + "' (expected live or archive)");
}

// ---- EventSpec ------------------------------------------------------------

void EventSpec::validate() const {
  auto fail = [&](const std::string& what) { throw Error("event '" + name + "': " + what); };
  if (dt_cp && *dt_cp <= dt_e) fail("change point must come after the event datetime");
  if (!(alpha >= 0) || !(beta >= 0) || alpha + beta <= 0) fail("alpha and beta must be non-negative, not both zero");
  if (!(th_cont >= 0 && th_cont <= 1)) fail("content threshold outside [0, 1]");
  if (!(th_temp >= 0 && th_temp <= 1)) fail("temporal threshold outside [0, 1]");
  if (max_depth < 0) fail("negative max_depth");
  if (grace_live < Duration{0} || grace_archive < Duration{0}) fail("negative grace period");
  if (seeds.empty()) fail("no seeds");
}

TemporalParams EventSpec::temporal_params(CrawlMode mode, Timestamp now) const {
  return TemporalParams::make(dt_e, dt_cp.value_or(now), mode == CrawlMode::Live ? grace_live : grace_archive,
                              grace_cutoff);
}

json to_json(const EventSpec& spec) {
  json vector = json::object();
  for (const auto& [term, weight] : spec.event_vector.entries()) vector[term] = weight;
  json doc = {
      {"name", spec.name},
      {"dt_e", format_iso8601(spec.dt_e)},
      {"dt_cp", spec.dt_cp ? json(format_iso8601(*spec.dt_cp)) : json(nullptr)},
      {"revision", spec.revision ? json(*spec.revision) : json(nullptr)},
      {"seeds", spec.seeds},
      {"event_vector", std::move(vector)},
      {"th_cont", spec.th_cont},
      {"th_temp", spec.th_temp},
      {"th_aggr", spec.th_aggr()},
      {"alpha", spec.alpha},
      {"beta", spec.beta},
      {"grace_live_s", spec.grace_live.count()},
      {"grace_archive_s", spec.grace_archive.count()},
      {"max_depth", spec.max_depth},
      {"grace_cutoff", spec.grace_cutoff},
  };
  return doc;
}

namespace {

Timestamp json_time(const json& value, const char* key) {
  if (!value.is_string()) throw ParseError(std::string("event spec: ") + key + " must be an ISO-8601 string");
  auto t = parse_iso8601(value.get<std::string>());
  if (!t) throw ParseError(std::string("event spec: bad datetime in ") + key);
  return *t;
}

}  // namespace

EventSpec event_spec_from_json(const json& doc) {
  try {
    EventSpec spec;
    spec.name = doc.at("name").get<std::string>();
    spec.dt_e = json_time(doc.at("dt_e"), "dt_e");
    if (doc.contains("dt_cp") && !doc["dt_cp"].is_null()) spec.dt_cp = json_time(doc["dt_cp"], "dt_cp");
    if (doc.contains("revision") && !doc["revision"].is_null()) spec.revision = doc["revision"].get<std::int64_t>();
    spec.seeds = doc.at("seeds").get<std::vector<std::string>>();
    TermVector::Map entries;
    for (const auto& [term, weight] : doc.at("event_vector").items()) entries.emplace(term, weight.get<double>());
    spec.event_vector = TermVector(std::move(entries));
    spec.th_cont = doc.at("th_cont").get<double>();
    spec.th_temp = doc.at("th_temp").get<double>();
    spec.alpha = doc.value("alpha", 0.5);
    spec.beta = doc.value("beta", 0.5);
    spec.grace_live = Duration{doc.at("grace_live_s").get<std::int64_t>()};
    spec.grace_archive = Duration{doc.at("grace_archive_s").get<std::int64_t>()};
    spec.max_depth = doc.value("max_depth", 5);
    spec.grace_cutoff = doc.value("grace_cutoff", true);
    // th_aggr in the document is informational; it is always recomputed.
    return spec;
  } catch (const json::exception& e) {
    throw ParseError(std::string("event spec: ") + e.what());
  }
}

std::string serialize_event_spec(const EventSpec& spec) { return to_json(spec).dump(2) + "\n"; }

// ---- event datetime -----------------------------------------------------

namespace {

// Unicode minus and dashes to ASCII so one set of patterns covers them.
std::string ascii_dashes(std::string_view text) {
  std::string out(text);
  for (std::string_view dash : {"\xE2\x88\x92", "\xE2\x80\x93", "\xE2\x80\x94"}) {
    for (auto pos = out.find(dash); pos != std::string::npos; pos = out.find(dash, pos + 1)) out.replace(pos, dash.size(), "-");
  }
  return out;
}

struct DateMatch {
  int year, month, day;
  std::size_t end;  // offset just past the match
  std::size_t begin;
};

const std::string kMonth =
    "(January|February|March|April|May|June|July|August|September|October|November|December|"
    "Jan|Feb|Mar|Apr|Jun|Jul|Aug|Sep|Sept|Oct|Nov|Dec)\\.?";

std::optional<DateMatch> find_date(const std::string& text) {
  static const std::regex kMdy(kMonth + R"(\s+(\d{1,2}),?\s+(\d{4}))", std::regex::icase);
  static const std::regex kDmy(R"((\d{1,2})\s+)" + kMonth + R"(,?\s+(\d{4}))", std::regex::icase);
  static const std::regex kIso(R"((\d{4})-(\d{2})-(\d{2}))");

  std::optional<DateMatch> best;
  auto offer = [&](const std::smatch& m, int y, int mo, int d) {
    if (!make_timestamp(y, mo, d)) return;
    auto begin = static_cast<std::size_t>(m.position(0));
    if (!best || begin < best->begin) best = DateMatch{y, mo, d, begin + static_cast<std::size_t>(m.length(0)), begin};
  };
  std::smatch m;
  if (std::regex_search(text, m, kMdy)) offer(m, std::stoi(m[3]), *month_from_name(m[1].str()), std::stoi(m[2]));
  if (std::regex_search(text, m, kDmy)) offer(m, std::stoi(m[3]), *month_from_name(m[2].str()), std::stoi(m[1]));
  if (std::regex_search(text, m, kIso)) offer(m, std::stoi(m[1]), std::stoi(m[2]), std::stoi(m[3]));
  return best;
}

std::optional<int> zone_offset_minutes(std::string_view abbreviation) {
  static const std::array<std::pair<std::string_view, int>, 22> kZones = {{
      {"UTC", 0},        {"GMT", 0},        {"Z", 0},          {"EST", -5 * 60},   {"EDT", -4 * 60},
      {"CST", -6 * 60},  {"CDT", -5 * 60},  {"MST", -7 * 60},  {"MDT", -6 * 60},   {"PST", -8 * 60},
      {"PDT", -7 * 60},  {"AKST", -9 * 60}, {"AKDT", -8 * 60}, {"HST", -10 * 60},  {"BST", 60},
      {"CET", 60},       {"CEST", 120},     {"EET", 120},      {"EEST", 180},      {"IST", 330},
      {"JST", 9 * 60},   {"AEST", 10 * 60},
  }};
  for (const auto& [name, minutes] : kZones)
    if (str::iequals(name, abbreviation)) return minutes;
  return std::nullopt;
}

std::optional<std::string> percent_decode_plus(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '+') {
      out += ' ';
    } else if (c == '%' && i + 2 < text.size() && std::isxdigit(static_cast<unsigned char>(text[i + 1])) &&
               std::isxdigit(static_cast<unsigned char>(text[i + 2]))) {
      out += static_cast<char>(std::stoi(std::string(text.substr(i + 1, 2)), nullptr, 16));
      i += 2;
    } else {
      out += c;
    }
  }
  return out;
}

std::optional<Timestamp> date_in_text(const std::string& text) {
  if (auto iso = parse_iso8601(str::trim(text))) return iso;
  auto m = find_date(text);
  if (!m) return std::nullopt;
  return make_date_only(m->year, m->month, m->day);
}

}  // namespace

Timestamp parse_event_datetime(std::string_view input) {
  auto text = ascii_dashes(input);
  auto date = find_date(text);
  if (!date) throw ParseError("no date in '" + std::string(input) + "'");

  std::string rest = text.substr(date->end, 80);
  static const std::regex kTime(R"(^[\s,;(]*(?:c\.\s*|at\s+)?(\d{1,2})(?::(\d{2}))?(?::(\d{2}))?\s*(a\.?\s?m\.?|p\.?\s?m\.?)?)",
                                std::regex::icase);
  static const std::regex kZone(R"(^\s*\(?\s*([A-Za-z]{1,5})?\s*\)?\s*(?:\(?\s*(?:UTC|GMT)\s*([+-])(\d{1,2})(?::?(\d{2}))?\s*\)?)?)");

  std::smatch m;
  bool has_time = std::regex_search(rest, m, kTime) && (m[2].matched || m[4].matched);
  if (!has_time) return *make_date_only(date->year, date->month, date->day);

  int hour = std::stoi(m[1]);
  int minute = m[2].matched ? std::stoi(m[2]) : 0;
  int second = m[3].matched ? std::stoi(m[3]) : 0;
  if (m[4].matched) {
    bool pm = std::tolower(static_cast<unsigned char>(m[4].str()[0])) == 'p';
    if (hour < 1 || hour > 12) throw ParseError("bad 12-hour time in '" + std::string(input) + "'");
    hour = hour % 12 + (pm ? 12 : 0);
  }
  auto local = make_timestamp(date->year, date->month, date->day, hour, minute, second);
  if (!local) throw ParseError("bad time in '" + std::string(input) + "'");

  int offset = 0;
  std::string after = m.suffix().str();
  std::smatch z;
  if (std::regex_search(after, z, kZone)) {
    std::optional<int> named = z[1].matched ? zone_offset_minutes(z[1].str()) : std::nullopt;
    if (named) {
      offset = *named;
    } else if (z[2].matched) {
      offset = std::stoi(z[3]) * 60 + (z[4].matched ? std::stoi(z[4]) : 0);
      if (z[2] == "-") offset = -offset;
    }
  }
  return *local - std::chrono::minutes{offset};
}

// ---- wiki page structure --------------------------------------------------

namespace {

bool class_has(const html::Token& t, std::string_view cls) {
  auto value = t.attribute("class");
  if (!value) return false;
  for (auto part : str::split(*value, ' '))
    if (str::trim(part) == cls) return true;
  return false;
}

// Tracks a skipped subtree by counting nested tags of the same name.
struct SubtreeSkip {
  std::string tag;
  int depth = 0;

  bool active() const { return depth > 0; }
  void begin(const html::Token& t) {
    tag = t.name;
    depth = 1;
  }
  // Feeds a token while active; returns true while still inside.
  bool feed(const html::Token& t) {
    if (t.kind == html::Token::Kind::StartTag && t.name == tag && !t.self_closing) ++depth;
    if (t.kind == html::Token::Kind::EndTag && t.name == tag) --depth;
    return depth > 0;
  }
};

bool skipped_in_article(const html::Token& t) {
  static constexpr std::array<std::string_view, 9> kTags = {"script", "style",  "nav",      "footer",  "header",
                                                            "head",   "noscript", "template", "aside"};
  static constexpr std::array<std::string_view, 9> kClasses = {
      "references", "reflist", "navbox", "mw-editsection", "reference", "toc", "mw-references-wrap", "hatnote",
      "noprint"};
  if (std::find(kTags.begin(), kTags.end(), t.name) != kTags.end()) return true;
  for (auto cls : kClasses)
    if (class_has(t, cls)) return true;
  auto id = t.attribute("id");
  return id && (*id == "toc" || *id == "catlinks" || *id == "mw-navigation" || *id == "footer");
}

}  // namespace

std::optional<std::string> infobox_date_text(std::string_view wiki_html) {
  auto tokens = html::tokenize(wiki_html);
  int table_depth = 0;
  enum class Cell { None, Header, Data } cell = Cell::None;
  std::string header, data;
  for (const auto& t : tokens) {
    if (table_depth == 0) {
      if (t.is_start("table") && class_has(t, "infobox")) table_depth = 1;
      continue;
    }
    if (t.is_start("table")) ++table_depth;
    if (t.is_end("table") && --table_depth == 0) break;
    if (t.is_start("tr")) {
      header.clear();
      data.clear();
      cell = Cell::None;
    } else if (t.is_start("th")) {
      cell = Cell::Header;
    } else if (t.is_start("td")) {
      cell = Cell::Data;
    } else if (t.is_end("th") || t.is_end("td")) {
      cell = Cell::None;
    } else if (t.kind == html::Token::Kind::StartTag && (t.name == "br" || html::is_block_element(t.name))) {
      if (cell == Cell::Data) data += ' ';
    } else if (t.kind == html::Token::Kind::Text) {
      if (cell == Cell::Header) header += t.text;
      if (cell == Cell::Data) data += t.text;
    }
    if (t.is_end("tr") || t.is_end("td")) {
      if (str::iequals(str::trim(str::collapse_whitespace(header)), "date") && !str::trim(data).empty())
        return str::collapse_whitespace(data);
    }
  }
  return std::nullopt;
}

std::string wiki_article_text(std::string_view wiki_html) {
  std::string out;
  SubtreeSkip skip;
  for (const auto& t : html::tokenize(wiki_html)) {
    if (skip.active()) {
      skip.feed(t);
      continue;
    }
    if (t.kind == html::Token::Kind::StartTag) {
      if (skipped_in_article(t) && !t.self_closing && !html::is_void_element(t.name)) {
        skip.begin(t);
        continue;
      }
      if (html::is_block_element(t.name) || t.name == "br") out += '\n';
    } else if (t.kind == html::Token::Kind::EndTag) {
      if (html::is_block_element(t.name)) out += '\n';
    } else if (t.kind == html::Token::Kind::Text) {
      out += t.text;
    }
  }
  // Keep paragraph breaks so bigrams do not join unrelated blocks.
  std::string result;
  for (auto line : str::split(out, '\n')) {
    auto collapsed = str::collapse_whitespace(line);
    if (collapsed.empty()) continue;
    if (!result.empty()) result += '\n';
    result += collapsed;
  }
  return result;
}

// ---- references -----------------------------------------------------------

namespace {

bool is_wiki_internal_host(const std::string& host) {
  for (std::string_view suffix : {"wikipedia.org", "wikimedia.org", "wikidata.org", "mediawiki.org",
                                  "wikimediafoundation.org", "wiktionary.org", "wikisource.org"}) {
    if (host == suffix || (host.size() > suffix.size() && host.ends_with(suffix) &&
                           host[host.size() - suffix.size() - 1] == '.'))
      return true;
  }
  return false;
}

bool is_archive_host(const std::string& host) {
  for (std::string_view known : {"web.archive.org", "wayback.archive.org", "webcitation.org", "www.webcitation.org",
                                 "archive.today", "archive.is", "archive.ph", "archive.li", "webarchive.org.uk",
                                 "webarchive.loc.gov", "arquivo.pt"}) {
    if (host == known) return true;
  }
  return false;
}

std::optional<Timestamp> archive_timestamp(const std::string& uri_m) {
  static const std::regex kStamp(R"(/(\d{14}|\d{8})(?:[a-z]{2}_)?/)");
  std::smatch m;
  if (!std::regex_search(uri_m, m, kStamp)) return std::nullopt;
  auto digits = m[1].str();
  if (digits.size() == 14) return parse_compact(digits);
  return make_date_only(std::stoi(digits.substr(0, 4)), std::stoi(digits.substr(4, 2)), std::stoi(digits.substr(6, 2)));
}

struct Citation {
  std::vector<std::string> hrefs;
  std::string text;
  std::vector<std::string> coins;
};

std::optional<Timestamp> after_keyword(const std::string& text, std::string_view keyword) {
  auto lowered = str::to_lower(text);
  auto pos = lowered.find(keyword);
  if (pos == std::string::npos) return std::nullopt;
  auto tail = text.substr(pos + keyword.size(), 60);
  auto m = find_date(tail);
  if (!m || m->begin > 8) return std::nullopt;
  return make_date_only(m->year, m->month, m->day);
}

std::optional<ReferenceEntry> to_reference(const Citation& cite, std::string_view base_uri) {
  std::optional<std::string> primary;
  std::optional<std::string> archive;
  for (const auto& raw : cite.hrefs) {
    std::string href;
    try {
      href = resolve(base_uri, raw);
    } catch (const UriError&) {
      continue;
    }
    if (!is_http_uri(href)) continue;
    std::string host;
    try {
      host = str::to_lower(host_of(href));
    } catch (const UriError&) {
      continue;
    }
    if (is_archive_host(host) || (strip_archive_prefix(href) && host.find("archive") != std::string::npos)) {
      if (!archive) archive = href;
      continue;
    }
    if (is_wiki_internal_host(host)) continue;
    if (!primary) primary = href;
  }
  if (!primary && archive) primary = strip_archive_prefix(*archive);
  if (!primary) return std::nullopt;

  ReferenceEntry entry;
  try {
    entry.uri = normalize_uri(*primary);
  } catch (const UriError&) {
    return std::nullopt;
  }

  for (const auto& title : cite.coins) {
    for (auto field : str::split(title, '&')) {
      auto decoded = *percent_decode_plus(field);
      if (!str::istarts_with(decoded, "rft.date=")) continue;
      entry.cited_datetime = date_in_text(decoded.substr(9));
      if (entry.cited_datetime) break;
    }
    if (entry.cited_datetime) break;
  }
  auto text = ascii_dashes(cite.text);
  if (!entry.cited_datetime) entry.cited_datetime = after_keyword(text, "published");
  if (!entry.cited_datetime) {
    // A date written in the citation body, ahead of any retrieval or archival note.
    auto lowered = str::to_lower(text);
    auto stop = std::min(lowered.find("retrieved"), lowered.find("archived"));
    entry.cited_datetime = date_in_text(text.substr(0, stop));
  }
  if (!entry.cited_datetime) entry.cited_datetime = after_keyword(text, "retrieved");

  if (archive) entry.archived_datetime = archive_timestamp(*archive);
  if (!entry.archived_datetime) entry.archived_datetime = after_keyword(text, "archived from the original on");
  return entry;
}

void add_unique(std::vector<ReferenceEntry>& out, ReferenceEntry entry) {
  for (auto& existing : out) {
    if (existing.uri != entry.uri) continue;
    if (!existing.cited_datetime) existing.cited_datetime = entry.cited_datetime;
    if (!existing.archived_datetime) existing.archived_datetime = entry.archived_datetime;
    return;
  }
  out.push_back(std::move(entry));
}

}  // namespace

std::vector<ReferenceEntry> extract_references(std::string_view wiki_html, std::string_view base_uri) {
  auto tokens = html::tokenize(wiki_html);
  std::vector<ReferenceEntry> out;

  int list_depth = 0;  // nesting of <ol> inside a reference list
  int item_depth = 0;
  Citation cite;
  bool any_list = false;
  for (const auto& t : tokens) {
    if (list_depth == 0) {
      if (t.is_start("ol") && class_has(t, "references")) {
        list_depth = 1;
        any_list = true;
      }
      continue;
    }
    if (t.is_start("ol")) ++list_depth;
    if (t.is_end("ol") && --list_depth == 0) continue;
    if (t.is_start("li")) {
      if (item_depth++ == 0) cite = Citation{};
      continue;
    }
    if (t.is_end("li")) {
      if (item_depth > 0 && --item_depth == 0) {
        if (auto entry = to_reference(cite, base_uri)) add_unique(out, std::move(*entry));
      }
      continue;
    }
    if (item_depth == 0) continue;
    if (t.is_start("a")) {
      if (auto href = t.attribute("href")) cite.hrefs.push_back(*href);
    } else if (t.is_start("span") && class_has(t, "Z3988")) {
      if (auto title = t.attribute("title")) cite.coins.push_back(*title);
    } else if (t.kind == html::Token::Kind::Text) {
      cite.text += t.text;
    } else if (t.kind == html::Token::Kind::StartTag && t.name == "br") {
      cite.text += ' ';
    }
  }

  if (!any_list) {
    // No reference list markup: every external link counts, without dates.
    for (const auto& t : tokens) {
      if (!t.is_start("a") || !class_has(t, "external")) continue;
      auto href = t.attribute("href");
      if (!href) continue;
      Citation single;
      single.hrefs.push_back(*href);
      if (auto entry = to_reference(single, base_uri)) add_unique(out, std::move(*entry));
    }
  }
  return out;
}

// ---- seed filters ---------------------------------------------------------

bool has_non_html_extension(std::string_view uri) {
  std::string path;
  try {
    path = Uri::parse(uri).path;
  } catch (const UriError&) {
    return false;
  }
  auto slash = path.rfind('/');
  auto last = slash == std::string::npos ? path : path.substr(slash + 1);
  auto dot = last.rfind('.');
  if (dot == std::string::npos) return false;
  auto ext = str::to_lower(last.substr(dot + 1));
  static const std::set<std::string, std::less<>> kNonHtml = {
      "pdf", "jpg", "jpeg", "png", "gif", "svg", "webp", "tif",  "tiff", "bmp", "ico", "mp3", "mp4",
      "m4a", "wav", "ogg",  "ogv", "avi", "mov", "wmv",  "flv",  "webm", "zip", "gz",  "tgz", "tar",
      "rar", "7z",  "doc",  "docx", "xls", "xlsx", "ppt", "pptx", "odt", "csv", "txt", "xml", "json",
      "rss", "exe", "dmg",  "iso",  "epub"};
  return kNonHtml.contains(ext);
}

namespace {

bool non_latin_text(std::string_view text) {
  for (std::size_t i = 0; i < text.size();) {
    auto c = static_cast<unsigned char>(text[i]);
    char32_t cp = 0;
    std::size_t len = 1;
    if (c < 0x80) {
      cp = c;
    } else if ((c >> 5) == 0x6 && i + 1 < text.size()) {
      cp = ((c & 0x1F) << 6) | (static_cast<unsigned char>(text[i + 1]) & 0x3F);
      len = 2;
    } else if ((c >> 4) == 0xE && i + 2 < text.size()) {
      cp = ((c & 0x0F) << 12) | ((static_cast<unsigned char>(text[i + 1]) & 0x3F) << 6) |
           (static_cast<unsigned char>(text[i + 2]) & 0x3F);
      len = 3;
    } else if ((c >> 3) == 0x1E && i + 3 < text.size()) {
      cp = 0x10000;
      len = 4;
    }
    // Greek and beyond; punctuation blocks in the 0x2000 range are not scripts.
    if (cp >= 0x370 && !(cp >= 0x2000 && cp < 0x2C00)) return true;
    i += len;
  }
  return false;
}

}  // namespace

bool uri_suggests_non_english(std::string_view uri) {
  Uri parsed;
  try {
    parsed = Uri::parse(uri);
  } catch (const UriError&) {
    return false;
  }
  static const std::set<std::string, std::less<>> kNonEnglishTlds = {
      "ru", "cn", "jp", "de", "fr", "es", "it", "br", "pl", "nl", "se", "no", "fi", "dk", "kr", "ua", "tr",
      "ir", "gr", "cz", "sk", "hu", "ro", "bg", "pt", "vn", "th", "ar", "mx", "cl", "pe", "by", "kz", "il",
      "sa", "eg", "id", "tw", "rs", "hr", "si", "lt", "lv", "ee", "at", "ch", "be"};
  auto host = str::to_lower(parsed.host());
  auto dot = host.rfind('.');
  if (dot != std::string::npos && kNonEnglishTlds.contains(std::string_view(host).substr(dot + 1))) return true;
  auto decoded = *percent_decode_plus(parsed.path);
  return non_latin_text(decoded);
}

double english_stopword_ratio(std::string_view text) {
  static const std::unordered_set<std::string> kStopwords = {
      "a",     "about", "after", "all",   "also",  "an",    "and",   "any",   "are",   "as",    "at",    "be",
      "been",  "before", "but",  "by",    "can",   "could", "did",   "do",    "does",  "for",   "from",  "had",
      "has",   "have",  "he",    "her",   "him",   "his",   "how",   "i",     "if",    "in",    "into",  "is",
      "it",    "its",   "just",  "more",  "most",  "my",    "no",    "not",   "now",   "of",    "on",    "one",
      "only",  "or",    "other", "our",   "out",   "over",  "said",  "she",   "so",    "some",  "such",  "than",
      "that",  "the",   "their", "them",  "then",  "there", "these", "they",  "this",  "those", "through", "to",
      "two",   "up",    "very",  "was",   "we",    "were",  "what",  "when",  "where", "which", "while", "who",
      "will",  "with",  "would", "you",   "your",  "being", "because", "between", "both", "each", "few",  "here",
      "off",   "own",   "same",  "should", "under", "until", "why",  "again", "against", "during", "itself"};
  auto tokens = tokenize_words(text);
  if (tokens.empty()) return 0;
  std::size_t hits = 0;
  for (const auto& token : tokens)
    if (kStopwords.contains(token)) ++hits;
  return static_cast<double>(hits) / static_cast<double>(tokens.size());
}

std::vector<ReferenceEntry> extract_seeds(std::string_view wiki_html, std::string_view base_uri,
                                          const ReferenceFetches* fetched, const SeedFilterOptions& options) {
  // Enough words for the stopword ratio to mean something.
  constexpr std::size_t kMinTokensForLanguage = 20;
  std::vector<ReferenceEntry> seeds;
  for (auto& ref : extract_references(wiki_html, base_uri)) {
    if (has_non_html_extension(ref.uri)) continue;
    const FetchedReference* page = nullptr;
    if (fetched) {
      auto it = fetched->find(ref.uri);
      if (it != fetched->end()) page = &it->second;
    }
    if (page && !page->media_type.empty() && page->media_type != "text/html" &&
        page->media_type != "application/xhtml+xml")
      continue;
    if (page && tokenize_words(page->text).size() >= kMinTokensForLanguage) {
      if (english_stopword_ratio(page->text) < options.min_stopword_ratio) continue;
    } else if (uri_suggests_non_english(ref.uri)) {
      continue;
    }
    seeds.push_back(std::move(ref));
  }
  if (seeds.empty()) throw EventSetupError("no seeds: no English HTML references survived filtering");
  return seeds;
}

// ---- configuration --------------------------------------------------------

EventConfig EventConfig::from_json(const json& doc, const std::string& base_dir) {
  if (!doc.is_object()) throw ParseError("config must be a JSON object");
  EventConfig c;
  auto path = [&](const json& v) {
    auto p = std::filesystem::path(v.get<std::string>());
    if (p.empty() || p.is_absolute()) return p.string();
    return (std::filesystem::path(base_dir) / p).lexically_normal().string();
  };
  auto time = [&](const json& v, const char* key) {
    auto text = v.get<std::string>();
    auto t = parse_iso8601(text);
    if (!t) throw ParseError(std::string("config: bad datetime in ") + key + ": '" + text + "'");
    return *t;
  };
  try {
    for (const auto& [key, v] : doc.items()) {
      if (key == "name") c.name = v.get<std::string>();
      else if (key == "wiki_html") c.wiki_html_path = path(v);
      else if (key == "wiki_base_uri") c.wiki_base_uri = v.get<std::string>();
      else if (key == "page_title") c.page_title = v.get<std::string>();
      else if (key == "revisions") c.revisions_path = path(v);
      else if (key == "mediawiki_api") c.mediawiki_api = v.get<std::string>();
      else if (key == "event_datetime") {
        auto text = v.get<std::string>();
        auto t = parse_iso8601(text);
        c.event_datetime = t ? *t : parse_event_datetime(text);
      } else if (key == "alpha") c.alpha = v.get<double>();
      else if (key == "beta") c.beta = v.get<double>();
      else if (key == "max_depth") c.max_depth = v.get<int>();
      else if (key == "repeats") c.repeats = v.get<int>();
      else if (key == "split_fraction") c.split_fraction = v.get<double>();
      else if (key == "rng_seed") c.rng_seed = v.get<std::uint64_t>();
      else if (key == "mode") c.mode = crawl_mode_from_string(v.get<std::string>());
      else if (key == "workers") c.workers = v.get<int>();
      else if (key == "request_timeout_ms") c.request_timeout = std::chrono::milliseconds{v.get<std::int64_t>()};
      else if (key == "politeness_ms") c.politeness = std::chrono::milliseconds{v.get<std::int64_t>()};
      else if (key == "idf") c.idf_path = path(v);
      else if (key == "lookup") c.lookup_path = path(v);
      else if (key == "timegate") c.timegate = v.get<std::string>();
      else if (key == "fixture") c.fixture_path = path(v);
      else if (key == "frontier_cap") c.frontier_cap = v.get<std::size_t>();
      else if (key == "now") c.now = time(v, "now");
      else if (key == "candidate_mode") {
        auto mode = v.get<std::string>();
        if (mode == "concatenated") c.candidate_mode = CandidateMode::Concatenated;
        else if (mode == "per_reference_mean") c.candidate_mode = CandidateMode::PerReferenceMean;
        else throw ParseError("config: unknown candidate_mode '" + mode + "'");
      } else if (key == "grace_cutoff") c.grace_cutoff = v.get<bool>();
      else if (key == "min_change_improvement") c.min_change_improvement = v.get<double>();
      else if (key == "min_stopword_ratio") c.min_stopword_ratio = v.get<double>();
      else throw ParseError("config: unknown key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (c.name.empty()) throw ParseError("config: name is required");
  if (c.workers < 1) throw ParseError("config: workers must be >= 1");
  if (c.repeats < 1) throw ParseError("config: repeats must be >= 1");
  if (!(c.split_fraction > 0 && c.split_fraction < 1)) throw ParseError("config: split_fraction must be in (0, 1)");
  if (c.max_depth < 0) throw ParseError("config: max_depth must be >= 0");
  return c;
}

EventConfig EventConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("config " + path + ": " + e.what());
  }
  return from_json(doc, std::filesystem::path(path).parent_path().string());
}

// ---- assembly -------------------------------------------------------------

namespace {

Duration round_seconds(std::chrono::duration<double> d) {
  return Duration{static_cast<std::int64_t>(std::llround(d.count()))};
}

}  // namespace

EventSpec build_event_spec(std::string_view wiki_html, const RevisionHistory* history, const EventConfig& config,
                           const SetupServices& services, SetupReport* report) {
  SetupReport local;
  SetupReport& rep = report ? *report : local;

  EventSpec spec;
  spec.name = config.name;
  spec.alpha = config.alpha;
  spec.beta = config.beta;
  spec.max_depth = config.max_depth;
  spec.grace_cutoff = config.grace_cutoff;

  if (config.event_datetime) {
    spec.dt_e = *config.event_datetime;
  } else {
    auto text = infobox_date_text(wiki_html);
    if (!text) throw EventSetupError("event '" + config.name + "': no infobox Date row and no event_datetime");
    try {
      spec.dt_e = parse_event_datetime(*text);
    } catch (const ParseError& e) {
      throw EventSetupError("event '" + config.name + "': infobox date: " + e.what());
    }
  }

  if (history && !history->revisions.empty()) {
    try {
      auto cp = change_point_datetime(*history, config.min_change_improvement);
      if (cp <= spec.dt_e) {
        rep.change_point_note = "change point " + format_iso8601(cp) + " precedes the event; using the live page";
      } else {
        spec.dt_cp = cp;
        spec.revision = select_version(*history, cp);
        rep.change_point_found = true;
      }
    } catch (const ChangePointError& e) {
      rep.change_point_note = std::string(e.what()) + "; using the live page";
    }
    if (!spec.revision) spec.revision = history->revisions.back().id;
  } else {
    rep.change_point_note = "no revision history; using the live page";
  }
  if (rep.change_point_note) spdlog::info("{}: {}", config.name, *rep.change_point_note);

  auto base = config.wiki_base_uri;
  ReferenceFetches fetched;
  if (services.fetcher) {
    DensityExtractor fallback;
    const TextExtractor& extractor = services.extractor ? *services.extractor : fallback;
    for (const auto& ref : extract_references(wiki_html, base)) {
      FetchedReference page;
      try {
        auto response = fetch_following_redirects(*services.fetcher, HttpRequest{ref.uri, {}});
        page.status = response.status;
        page.media_type = response.media_type();
        if (response.ok() && (page.media_type.empty() || page.media_type == "text/html" ||
                              page.media_type == "application/xhtml+xml"))
          page.text = extractor.extract(response.body);
      } catch (const Error& e) {
        spdlog::warn("reference {} not fetched: {}", ref.uri, e.what());
      }
      fetched.emplace(ref.uri, std::move(page));
    }
  }
  auto seeds = extract_seeds(wiki_html, base, services.fetcher ? &fetched : nullptr,
                             SeedFilterOptions{config.min_stopword_ratio});

  if (services.mementos) {
    for (auto& ref : seeds) {
      if (ref.archived_datetime || !ref.cited_datetime) continue;
      auto result = services.mementos->negotiate(ref.uri, *ref.cited_datetime);
      if (auto* found = std::get_if<NegotiatedMemento>(&result)) ref.archived_datetime = found->memento.memento_datetime;
    }
  }
  for (const auto& ref : seeds) spec.seeds.push_back(ref.uri);

  // The reference corpus: seeds whose text is available, in seed order.
  std::vector<std::string> texts;
  std::vector<ReferenceEntry> corpus;
  for (const auto& ref : seeds) {
    auto it = fetched.find(ref.uri);
    if (it == fetched.end() || it->second.text.empty()) continue;
    texts.push_back(it->second.text);
    corpus.push_back(ref);
  }
  rep.references = seeds;
  rep.reference_texts = texts.size();

  static const IdfTable kUniform;
  const IdfTable& idf = services.idf ? *services.idf : kUniform;
  auto wiki_text = wiki_article_text(wiki_html);

  auto ev = build_event_vector(wiki_text, texts, config.split_fraction, config.rng_seed, idf);
  spec.event_vector = std::move(ev.vector);
  rep.sampled = std::move(ev.sampled);

  ThresholdOptions options{config.repeats, config.split_fraction, config.rng_seed, config.candidate_mode};
  try {
    spec.th_cont = content_threshold(wiki_text, texts, options, idf);
  } catch (const ThresholdError& e) {
    throw EventSetupError("event '" + config.name + "': content threshold: " + e.what());
  }

  auto interval_end = spec.dt_cp.value_or(services.now);
  if (interval_end <= spec.dt_e)
    throw EventSetupError("event '" + config.name + "': event datetime is not before " + format_iso8601(interval_end));
  auto delta_t = round_seconds(std::chrono::duration<double>(interval_end - spec.dt_e) / 4.0);
  try {
    spec.grace_live = grace_period_live(seeds);
  } catch (const GracePeriodError&) {
    spec.grace_live = delta_t;
  }
  try {
    spec.grace_archive = grace_period_archive(seeds);
  } catch (const GracePeriodError&) {
    spec.grace_archive = delta_t;
  }

  auto params = spec.temporal_params(config.mode, services.now);
  try {
    spec.th_temp = temporal_threshold(corpus, config.repeats, config.split_fraction, params, config.rng_seed);
  } catch (const Error& e) {
    throw EventSetupError("event '" + config.name + "': temporal threshold: " + e.what());
  }

  spec.validate();
  return spec;
}

}  // namespace eventcrawl
