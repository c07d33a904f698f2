#include "eventcrawl/testkit.hpp"

#include "eventcrawl/memento.hpp"
#include "eventcrawl/strings.hpp"
#include "eventcrawl/uri.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>

namespace eventcrawl::testkit {

using nlohmann::json;

// ---- site -----------------------------------------------------------------

void FixtureSite::add_page(const std::string& uri, FixturePage page) { pages[normalize_uri(uri)] = std::move(page); }

void FixtureSite::add_snapshot(const std::string& uri_r, Snapshot snapshot) {
  auto& list = snapshots[normalize_uri(uri_r)];
  list.push_back(std::move(snapshot));
  std::stable_sort(list.begin(), list.end(), [](const Snapshot& a, const Snapshot& b) {
    if (a.datetime != b.datetime) return a.datetime < b.datetime;
    return a.archive_host < b.archive_host;
  });
}

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Timestamp need_time(const json& v, const std::string& what) {
  auto t = parse_iso8601(v.get<std::string>());
  if (!t) throw ParseError("fixture: bad datetime in " + what);
  return *t;
}

std::string body_of(const json& item, const std::string& base_dir) {
  if (item.contains("body_file"))
    return read_text(std::filesystem::path(base_dir) / item["body_file"].get<std::string>());
  return item.value("body", std::string{});
}

}  // namespace

FixtureSite FixtureSite::from_json(const json& doc, const std::string& base_dir) {
  FixtureSite site;
  try {
    site.timegate_host = doc.value("timegate_host", site.timegate_host);
    for (const auto& item : doc.value("pages", json::array())) {
      FixturePage page;
      page.body = body_of(item, base_dir);
      page.content_type = item.value("content_type", page.content_type);
      page.status = item.value("status", 200);
      if (item.contains("redirect_to")) page.redirect_to = item["redirect_to"].get<std::string>();
      if (item.contains("published")) page.published = need_time(item["published"], "published");
      site.add_page(item.at("uri").get<std::string>(), std::move(page));
    }
    for (const auto& item : doc.value("snapshots", json::array())) {
      Snapshot snap;
      snap.datetime = need_time(item.at("datetime"), "snapshot datetime");
      snap.archive_host = item.at("archive_host").get<std::string>();
      snap.body = body_of(item, base_dir);
      if (item.contains("orig_last_modified"))
        snap.orig_last_modified = need_time(item["orig_last_modified"], "orig_last_modified");
      snap.inexact = item.value("inexact", false);
      site.add_snapshot(item.at("uri_r").get<std::string>(), std::move(snap));
    }
    for (const auto& url : doc.value("transport_failures", json::array()))
      site.transport_failures.insert(url.get<std::string>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("fixture: ") + e.what());
  }
  return site;
}

FixtureSite FixtureSite::load(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw ParseError("fixture " + path + ": " + e.what());
  }
  return from_json(doc, std::filesystem::path(path).parent_path().string());
}

json FixtureSite::to_json() const {
  json pages_json = json::array();
  for (const auto& [uri, page] : pages) {
    json item = {{"uri", uri}, {"body", page.body}, {"content_type", page.content_type}, {"status", page.status}};
    if (page.redirect_to) item["redirect_to"] = *page.redirect_to;
    if (page.published) item["published"] = format_iso8601(*page.published);
    pages_json.push_back(std::move(item));
  }
  json snaps_json = json::array();
  for (const auto& [uri_r, list] : snapshots) {
    for (const auto& snap : list) {
      json item = {{"uri_r", uri_r},
                   {"datetime", format_iso8601(snap.datetime)},
                   {"archive_host", snap.archive_host},
                   {"body", snap.body}};
      if (snap.orig_last_modified) item["orig_last_modified"] = format_iso8601(*snap.orig_last_modified);
      if (snap.inexact) item["inexact"] = true;
      snaps_json.push_back(std::move(item));
    }
  }
  return json{{"timegate_host", timegate_host},
              {"pages", std::move(pages_json)},
              {"snapshots", std::move(snaps_json)},
              {"transport_failures", transport_failures}};
}

std::string memento_uri(const std::string& archive_host, Timestamp datetime, const std::string& uri_r) {
  return "http://" + archive_host + "/web/" + format_compact(datetime) + "/" + uri_r;
}

// ---- fetcher --------------------------------------------------------------

FixtureFetcher::FixtureFetcher(FixtureSite site) : site_(std::move(site)) {
  for (const auto& [uri_r, list] : site_.snapshots)
    for (const auto& snap : list) archive_hosts_.insert(str::to_lower(snap.archive_host));
}

void FixtureFetcher::fail_next(const std::string& url, int count) {
  std::lock_guard lock(mutex_);
  pending_failures_[url] += count;
}

std::vector<std::string> FixtureFetcher::requested_urls() const {
  std::lock_guard lock(mutex_);
  return log_;
}

HttpResponse FixtureFetcher::fetch(const HttpRequest& request) {
  ++requests_;
  {
    std::lock_guard lock(mutex_);
    log_.push_back(request.url);
    auto it = pending_failures_.find(request.url);
    if (it != pending_failures_.end() && it->second > 0) {
      --it->second;
      throw TransportError("injected failure for " + request.url);
    }
  }
  if (site_.transport_failures.contains(request.url)) throw TransportError("injected failure for " + request.url);

  Uri parsed;
  try {
    parsed = Uri::parse(request.url);
  } catch (const UriError& e) {
    throw TransportError(std::string("bad request URL: ") + e.what());
  }
  auto host = str::to_lower(parsed.host());
  auto scheme_end = request.url.find("://");
  auto path_start = request.url.find('/', scheme_end + 3);
  std::string rest = path_start == std::string::npos ? "/" : request.url.substr(path_start);

  if (host == str::to_lower(site_.timegate_host)) {
    if (str::istarts_with(rest, "/timegate/")) return timegate(request.url, rest.substr(10), request);
    if (str::istarts_with(rest, "/timemap/link/")) return timemap(rest.substr(14));
    HttpResponse missing{404, {{"Content-Type", "text/plain"}}, "unknown endpoint", request.url};
    return missing;
  }
  if (archive_hosts_.contains(host)) return archive(request.url, host, rest);
  return live(request.url);
}

HttpResponse FixtureFetcher::live(const std::string& url) const {
  std::string key;
  try {
    key = normalize_uri(url);
  } catch (const UriError&) {
    return HttpResponse{400, {{"Content-Type", "text/plain"}}, "bad request", url};
  }
  auto it = site_.pages.find(key);
  if (it == site_.pages.end()) return HttpResponse{404, {{"Content-Type", "text/html"}}, "<h1>Not Found</h1>", url};
  const auto& page = it->second;
  HttpResponse response{page.status, {{"Content-Type", page.content_type}}, page.body, url};
  if (page.redirect_to) {
    response.status = page.status >= 300 && page.status < 400 ? page.status : 301;
    response.headers.add("Location", *page.redirect_to);
    response.body.clear();
  }
  return response;
}

namespace {

const std::vector<Snapshot>* snapshots_of(const FixtureSite& site, const std::string& uri_r) {
  try {
    auto it = site.snapshots.find(normalize_uri(uri_r));
    return it == site.snapshots.end() ? nullptr : &it->second;
  } catch (const UriError&) {
    return nullptr;
  }
}

// Index of the snapshot closest to `when`; ties go to the earlier snapshot.
std::size_t closest(const std::vector<Snapshot>& list, Timestamp when, const std::string* host = nullptr) {
  std::size_t best = list.size();
  Duration best_distance{};
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (host && str::to_lower(list[i].archive_host) != *host) continue;
    auto distance = list[i].datetime > when ? list[i].datetime - when : when - list[i].datetime;
    if (best == list.size() || distance < best_distance) {
      best = i;
      best_distance = distance;
    }
  }
  return best;
}

std::string snapshot_uri(const Snapshot& snap, const std::string& uri_r) {
  return memento_uri(snap.archive_host, snap.datetime, uri_r);
}

LinkRelations memento_links(const FixtureSite& site, const std::vector<Snapshot>& list, std::size_t selected,
                            const std::string& uri_r) {
  LinkRelations links;
  links.entries.push_back(LinkEntry{uri_r, {"original"}, std::nullopt, {}});
  links.entries.push_back(LinkEntry{"http://" + site.timegate_host + "/timemap/link/" + uri_r,
                                    {"timemap"},
                                    std::nullopt,
                                    {{"type", "application/link-format"}}});
  std::vector<std::size_t> order;
  std::map<std::size_t, std::vector<std::string>> rels;
  auto mark = [&](std::size_t i, const char* rel) {
    if (!rels.contains(i)) order.push_back(i);
    rels[i].push_back(rel);
  };
  mark(0, "first");
  mark(list.size() - 1, "last");
  if (selected > 0) mark(selected - 1, "prev");
  if (selected + 1 < list.size()) mark(selected + 1, "next");
  for (auto i : order) {
    auto tokens = rels[i];
    tokens.push_back("memento");
    links.entries.push_back(LinkEntry{snapshot_uri(list[i], uri_r), tokens, list[i].datetime, {}});
  }
  return links;
}

std::string rewrite_outlinks(const std::string& body, const Snapshot& snap, const std::string& uri_r) {
  static const std::regex kHref(R"((href\s*=\s*")([^"]*)("))", std::regex::icase);
  std::string out;
  auto last = body.cbegin();
  for (std::sregex_iterator it(body.begin(), body.end(), kHref), end; it != end; ++it) {
    const auto& m = *it;
    out.append(last, m[0].first);
    std::string target = m[2];
    try {
      auto resolved = resolve(uri_r, target);
      if (is_http_uri(resolved)) target = memento_uri(snap.archive_host, snap.datetime, resolved);
    } catch (const UriError&) {
    }
    out += m[1].str() + target + m[3].str();
    last = m[0].second;
  }
  out.append(last, body.cend());
  return out;
}

}  // namespace

HttpResponse FixtureFetcher::timegate(const std::string& url, const std::string& uri_r,
                                      const HttpRequest& request) const {
  const auto* list = snapshots_of(site_, uri_r);
  if (!list || list->empty())
    return HttpResponse{404, {{"Content-Type", "text/plain"}}, "no mementos for " + uri_r, url};

  std::size_t selected = list->size() - 1;
  if (auto header = request.headers.get("Accept-Datetime")) {
    auto preferred = parse_http_date(*header);
    if (!preferred)
      return HttpResponse{400, {{"Content-Type", "text/plain"}}, "bad Accept-Datetime", url};
    selected = closest(*list, *preferred);
  }
  const auto& snap = (*list)[selected];
  auto target = snapshot_uri(snap, uri_r);
  if (snap.inexact) {
    // Day precision: the archive resolves the rest.
    target = "http://" + snap.archive_host + "/web/" + format_compact(snap.datetime).substr(0, 8) + "/" + uri_r;
  }
  HttpResponse response{302, {}, "", url};
  response.headers.add("Location", target);
  response.headers.add("Vary", "accept-datetime");
  response.headers.add("Content-Type", "text/plain");
  response.headers.add("Link", serialize_link_header(memento_links(site_, *list, selected, uri_r)));
  return response;
}

HttpResponse FixtureFetcher::timemap(const std::string& uri_r) const {
  const auto* list = snapshots_of(site_, uri_r);
  if (!list || list->empty()) return HttpResponse{404, {{"Content-Type", "text/plain"}}, "not archived", uri_r};
  LinkRelations links;
  links.entries.push_back(LinkEntry{uri_r, {"original"}, std::nullopt, {}});
  for (std::size_t i = 0; i < list->size(); ++i) {
    std::vector<std::string> rels;
    if (i == 0) rels.push_back("first");
    if (i + 1 == list->size()) rels.push_back("last");
    rels.push_back("memento");
    links.entries.push_back(LinkEntry{snapshot_uri((*list)[i], uri_r), rels, (*list)[i].datetime, {}});
  }
  // One link-value per line, as archives serve them.
  std::string formatted;
  for (const auto& entry : links.entries) {
    if (!formatted.empty()) formatted += ",\n";
    formatted += serialize_link_header(LinkRelations{{entry}});
  }
  return HttpResponse{200, {{"Content-Type", "application/link-format"}}, formatted + "\n", uri_r};
}

HttpResponse FixtureFetcher::archive(const std::string& url, const std::string& host, const std::string& rest) const {
  static const std::regex kPath(R"(^/web/(\d{8,14})(?:[a-z]{2}_)?/(.+)$)");
  std::smatch m;
  if (!std::regex_match(rest, m, kPath))
    return HttpResponse{404, {{"Content-Type", "text/plain"}}, "not a memento URI", url};
  std::string stamp = m[1];
  std::string uri_r = m[2];
  const auto* list = snapshots_of(site_, uri_r);
  if (!list) return HttpResponse{404, {{"Content-Type", "text/plain"}}, "not archived", url};
  uri_r = normalize_uri(uri_r);

  std::optional<Timestamp> when;
  if (stamp.size() == 14) when = parse_compact(stamp);
  else if (stamp.size() >= 8)
    when = make_timestamp(std::stoi(stamp.substr(0, 4)), std::stoi(stamp.substr(4, 2)), std::stoi(stamp.substr(6, 2)));
  if (!when) return HttpResponse{400, {{"Content-Type", "text/plain"}}, "bad timestamp", url};

  auto index = closest(*list, *when, &host);
  if (index == list->size()) return HttpResponse{404, {{"Content-Type", "text/plain"}}, "not in this archive", url};
  const auto& snap = (*list)[index];
  if (stamp.size() != 14 || snap.datetime != *when) {
    HttpResponse redirect{302, {}, "", url};
    redirect.headers.add("Location", snapshot_uri(snap, uri_r));
    redirect.headers.add("Content-Type", "text/plain");
    return redirect;
  }
  HttpResponse response{200, {}, rewrite_outlinks(snap.body, snap, uri_r), url};
  response.headers.add("Content-Type", "text/html; charset=utf-8");
  response.headers.add("Memento-Datetime", format_http_date(snap.datetime));
  response.headers.add("Link", serialize_link_header(memento_links(site_, *list, index, uri_r)));
  if (snap.orig_last_modified)
    response.headers.add("X-Archive-Orig-Last-Modified", format_http_date(*snap.orig_last_modified));
  return response;
}

// ---- synthetic events -----------------------------------------------------

std::string_view to_string(PageKind kind) {
  switch (kind) {
    case PageKind::Relevant:
      return "relevant";
    case PageKind::OffTopic:
      return "off_topic";
    case PageKind::Stale:
      return "stale";
    case PageKind::Undated:
      return "undated";
  }
  return "unknown";
}

std::string_view event_text() {
  return "Harbor bridge collapse prompted emergency rescue divers searching the river after the steel span "
         "failed during evening traffic. Investigators examined corroded cables while engineers inspected "
         "remaining bridge supports. City officials announced closures and rescue teams recovered vehicles "
         "from the harbor.";
}

std::string_view off_topic_text() {
  return "Bakery owners unveiled seasonal pastries featuring lemon glaze, almond cream, cinnamon swirls, maple "
         "pecans, chocolate ganache. Customers praised flaky croissants; local musicians performed jazz "
         "melodies near colorful flower stalls on sunny Saturday mornings.";
}

namespace {

const Timestamp kEventStart = *make_timestamp(2015, 6, 1, 12, 0, 0);
const Timestamp kChangePoint = kEventStart + Days{40};
const Duration kGrace = Days{10};

std::string archive_host(int index) { return std::string("arch-") + static_cast<char>('a' + index) + ".test"; }

std::string page_html(int id, const std::string& text, const std::vector<std::string>& links) {
  std::string out = "<!DOCTYPE html>\n<html><head><title>Story " + std::to_string(id) +
                    "</title></head>\n<body>\n<article><p>" + text + "</p></article>\n<ul>\n";
  for (const auto& link : links) out += "<li><a href=\"" + link + "\">more</a></li>\n";
  out += "<li><a href=\"mailto:desk@example.test\">contact</a></li>\n</ul>\n</body></html>\n";
  return out;
}

std::string graded_text(double share, std::mt19937_64& rng) {
  auto on = tokenize_words(event_text());
  auto off = tokenize_words(off_topic_text());
  auto keep = static_cast<std::size_t>(std::llround(share * static_cast<double>(on.size())));
  std::string text;
  for (std::size_t i = 0; i < on.size(); ++i) {
    const auto& word = i < keep ? on[i] : off[(i + rng()) % off.size()];
    if (!text.empty()) text += ' ';
    text += word;
  }
  return text;
}

}  // namespace

SyntheticEvent build_synthetic_event(const SyntheticParams& p) {
  if (p.branching < 1 || p.site_depth < 0 || p.max_depth < 0 || p.seeds < 1 || p.cliff_depth < 0)
    throw Error("synthetic event: branching and seeds must be >= 1, depths >= 0");
  if (p.archives < 1 || p.archives > 26) throw Error("synthetic event: archives must be in 1..26");

  SyntheticEvent ev;
  ev.now = kChangePoint + Days{365};
  std::mt19937_64 rng(p.rng_seed);

  auto kind_for = [&](int depth) {
    switch (p.variant) {
      case Variant::AllRelevant:
      case Variant::Graded:
        return PageKind::Relevant;
      case Variant::Cliff:
        return depth <= p.cliff_depth ? PageKind::Relevant : PageKind::OffTopic;
      case Variant::PreEventOnly:
        return PageKind::Stale;
      case Variant::Mixed: {
        if (depth == 0) return PageKind::Relevant;
        auto draw = rng() % 20;
        if (draw < 10) return PageKind::Relevant;
        if (draw < 14) return PageKind::OffTopic;
        if (draw < 17) return PageKind::Stale;
        return PageKind::Undated;
      }
    }
    return PageKind::Relevant;
  };

  // Page tree, breadth-first per seed so ids are stable.
  int next_id = 0;
  std::vector<std::size_t> roots;
  for (int s = 0; s < p.seeds; ++s) {
    std::vector<std::size_t> level;
    auto make = [&](int depth) {
      int id = next_id++;
      auto kind = kind_for(depth);
      std::string host = "news" + std::to_string(id % 3) + ".test";
      std::string uri;
      int day = 2 + id % 27;
      char date[32];
      if (kind == PageKind::Undated) {
        uri = "http://" + host + "/story-" + std::to_string(id) + ".html";
      } else if (kind == PageKind::Stale) {
        uri = "http://" + host + "/2015/03/15/story-" + std::to_string(id) + ".html";
      } else {
        std::snprintf(date, sizeof date, "/2015/06/%02d/", day);
        uri = "http://" + host + date + "story-" + std::to_string(id) + ".html";
      }
      ev.pages.push_back(SyntheticPage{uri, kind, depth, {}});
      return ev.pages.size() - 1;
    };
    auto root = make(0);
    roots.push_back(root);
    level.push_back(root);
    for (int d = 1; d <= p.site_depth; ++d) {
      std::vector<std::size_t> next;
      for (auto parent : level) {
        for (int b = 0; b < p.branching; ++b) {
          auto child = make(d);
          ev.pages[parent].children.push_back(ev.pages[child].uri);
          next.push_back(child);
        }
      }
      level = std::move(next);
    }
  }

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < ev.pages.size(); ++i) index[ev.pages[i].uri] = i;

  // Bodies and archive copies.
  std::map<std::string, std::string> parent_of;
  for (const auto& page : ev.pages)
    for (const auto& child : page.children) parent_of[child] = page.uri;

  for (std::size_t i = 0; i < ev.pages.size(); ++i) {
    const auto& page = ev.pages[i];
    int id = static_cast<int>(i);
    std::string text = page.kind == PageKind::OffTopic ? std::string(off_topic_text()) : std::string(event_text());
    if (p.variant == Variant::Graded && page.depth > 0) {
      std::uniform_real_distribution<double> share(0.2, 1.0);
      text = graded_text(share(rng), rng);
    }
    auto links = page.children;
    if (auto it = parent_of.find(page.uri); it != parent_of.end()) links.push_back(it->second);
    auto body = page_html(id, text, links);
    ev.site.add_page(page.uri, FixturePage{body, "text/html; charset=utf-8", 200, std::nullopt, std::nullopt});

    auto host = archive_host(id % p.archives);
    if (p.variant == Variant::PreEventOnly) {
      ev.site.add_snapshot(page.uri, Snapshot{kEventStart - Days{5}, host, body, std::nullopt, false});
      continue;
    }
    switch (page.kind) {
      case PageKind::Relevant:
      case PageKind::OffTopic: {
        auto offset = Duration{86400 + 60 * id};
        if (id % 2 == 0)
          ev.site.add_snapshot(page.uri, Snapshot{kEventStart - offset, host, body, std::nullopt, false});
        ev.site.add_snapshot(page.uri, Snapshot{kEventStart + offset, host, body, std::nullopt, id % 5 == 0});
        break;
      }
      case PageKind::Stale:
        ev.site.add_snapshot(page.uri, Snapshot{kChangePoint + Days{100}, host, body,
                                                *make_timestamp(2015, 3, 15), false});
        break;
      case PageKind::Undated:
        ev.site.add_snapshot(page.uri, Snapshot{kChangePoint + Days{100}, host, body, std::nullopt, false});
        break;
    }
  }

  auto& spec = ev.spec;
  spec.name = "synthetic-harbor-bridge";
  spec.dt_e = kEventStart;
  spec.dt_cp = kChangePoint;
  for (auto root : roots) spec.seeds.push_back(ev.pages[root].uri);
  spec.event_vector = build_term_vector(event_text(), IdfTable{});
  spec.th_cont = p.variant == Variant::Graded ? 0.0 : 0.6;
  spec.th_temp = 0.8;
  spec.alpha = 0.5;
  spec.beta = 0.5;
  spec.grace_live = kGrace;
  spec.grace_archive = kGrace;
  spec.max_depth = p.max_depth;
  spec.validate();

  // Ground truth straight from the page kinds.
  std::vector<std::pair<std::size_t, int>> stack;
  for (auto it = roots.rbegin(); it != roots.rend(); ++it) stack.emplace_back(*it, 0);
  while (!stack.empty()) {
    auto [i, depth] = stack.back();
    stack.pop_back();
    const auto& page = ev.pages[i];
    ev.expected_records.insert(page.uri);
    bool accepted = false;
    if (p.variant == Variant::PreEventOnly && p.mode == CrawlMode::Archive) {
      ev.expected_dismissed[page.uri] = DismissReason::NotArchived;
    } else if (page.kind == PageKind::Undated) {
      ev.expected_dismissed[page.uri] = DismissReason::NoDatetime;
    } else {
      accepted = page.kind == PageKind::Relevant;
    }
    if (accepted) ev.expected_accepted.insert(page.uri);
    if (accepted && depth < p.max_depth)
      for (const auto& child : page.children) stack.emplace_back(index.at(child), depth + 1);
  }
  return ev;
}

}  // namespace eventcrawl::testkit
