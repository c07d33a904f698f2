#include "doctest.h"

#include "eventcrawl/crawler.hpp"
#include "eventcrawl/testkit.hpp"
#include "eventcrawl/uri.hpp"

#include <filesystem>
#include <random>
#include <set>

using namespace eventcrawl;
using namespace eventcrawl::testkit;

namespace {

FrontierEntry entry(std::string uri, double priority) {
  FrontierEntry e;
  e.uri = std::move(uri);
  e.priority = priority;
  return e;
}

struct Harness {
  std::shared_ptr<FixtureFetcher> fetcher;
  MementoClient mementos;
  ManualClock clock{Instant{*make_timestamp(2020, 1, 1)}, std::chrono::milliseconds{250}};

  explicit Harness(const FixtureSite& site)
      : fetcher(std::make_shared<FixtureFetcher>(site)),
        mementos(fetcher, MementoClientOptions{site.timegate_endpoint(), 10, 2, {}}) {}

  Collection run(const EventSpec& spec, CrawlMode mode, CrawlOptions options = {}) {
    options.mode = mode;
    CrawlServices services;
    services.fetcher = fetcher.get();
    services.mementos = &mementos;
    services.clock = &clock;
    return crawl(spec, options, services);
  }
};

std::set<std::string> accepted(const Collection& c) {
  std::set<std::string> out;
  for (const auto& r : c.records)
    if (r.accepted) out.insert(r.uri);
  return out;
}

std::set<std::string> recorded(const Collection& c) {
  std::set<std::string> out;
  for (const auto& r : c.records) out.insert(r.uri);
  return out;
}

std::string page(const std::string& text, const std::vector<std::string>& links) {
  std::string out = "<html><body><p>" + text + "</p><ul>";
  for (const auto& l : links) out += "<li><a href=\"" + l + "\">go</a></li>";
  return out + "</ul></body></html>";
}

}  // namespace

TEST_CASE("outlinks: mailto dropped, relative resolved") {
  auto links = extract_outlinks(
      R"(<a href="/a">A</a><a href="mailto:x@y.z">m</a><a href="b.html#top">B</a>)", "http://site.test/dir/index.html");
  REQUIRE(links.size() == 2);
  CHECK(links[0] == "http://site.test/a");
  CHECK(links[1] == "http://site.test/dir/b.html");
}

TEST_CASE("outlinks: twelve anchors with two duplicates and a same-page fragment") {
  std::string html;
  for (int i = 0; i < 10; ++i) html += "<a href=\"http://Site.test/p" + std::to_string(i) + "\">x</a>";
  html += "<a href=\"http://site.test/p3#frag\">dup</a>";
  html += "<a href=\"HTTP://site.test:80/p7\">dup</a>";
  auto links = extract_outlinks(html, "http://site.test/");
  REQUIRE(links.size() == 10);
  for (int i = 0; i < 10; ++i) CHECK(links[i] == "http://site.test/p" + std::to_string(i));
  CHECK(extract_outlinks("<a href=\"#only\">x</a><a>no href</a><a href=\"javascript:void(0)\">j</a>", "http://s.test/")
            .empty());
}

TEST_CASE("outlinks honour <base href>") {
  auto links = extract_outlinks(R"(<base href="http://other.test/root/"><a href="x">x</a>)", "http://site.test/");
  REQUIRE(links.size() == 1);
  CHECK(links[0] == "http://other.test/root/x");
}

TEST_CASE("frontier: priority order with FIFO ties") {
  Frontier f;
  f.push(entry("a", 0.5));
  f.push(entry("b", 0.9));
  f.push(entry("c", 0.5));
  f.push(entry("d", 0.9));
  std::vector<std::string> order;
  while (auto e = f.pop()) order.push_back(e->uri);
  CHECK(order == std::vector<std::string>{"b", "d", "a", "c"});
}

TEST_CASE("frontier: capacity evicts the lowest entry or rejects under the error policy") {
  Frontier f(2);
  CHECK(f.push(entry("a", 0.2)));
  CHECK(f.push(entry("b", 0.8)));
  CHECK(f.push(entry("c", 0.5)));  // evicts a
  CHECK_FALSE(f.push(entry("d", 0.1)));
  CHECK(f.dropped() == 2);
  CHECK(f.pop()->uri == "b");
  CHECK(f.pop()->uri == "c");
  CHECK(f.empty());

  Frontier strict(1, OverflowPolicy::Error);
  strict.push(entry("a", 0.2));
  CHECK_THROWS_AS(strict.push(entry("b", 0.9)), FrontierOverflow);
}

TEST_CASE("frontier property: every pop is maximal among queued entries") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Frontier f(1000);
    bool ok = true;
    f.on_pop = [&](const FrontierEntry& e, std::optional<double> rest) {
      if (rest && *rest > e.priority) ok = false;
    };
    for (int step = 0; step < 400; ++step) {
      if (rng() % 3 == 0) {
        f.pop();
      } else {
        f.push({"u" + std::to_string(step), 0, static_cast<double>(rng() % 11) / 10.0});
      }
    }
    while (f.pop()) {
    }
    CHECK(ok);
  }
}

TEST_CASE("accept is inclusive at the threshold") {
  EventSpec spec;
  spec.th_cont = 0.6;
  spec.th_temp = 0.8;
  CHECK(accept(RelevanceScores::combine(0.6, 0.8, 0.5, 0.5), spec));
  CHECK_FALSE(accept(RelevanceScores{0, 0, spec.th_aggr() - 1e-12}, spec));
  spec.th_cont = 0.5;
  spec.th_temp = 1.0;  // th_aggr 0.75
  CHECK_FALSE(accept(RelevanceScores{0, 0, 0.51}, spec));
}

TEST_CASE("record JSON round trip") {
  CrawlRecord r;
  r.seq = 4;
  r.uri = "http://a.test/x";
  r.uri_m = "http://arch-a.test/web/20150602000000/http://a.test/x";
  r.depth = 2;
  r.parent = "http://a.test/";
  r.status = 200;
  r.dt_r = *make_timestamp(2015, 6, 2, 0, 0, 1);
  r.dt_source = "uri_pattern";
  r.r_cont = 0.1 + 0.2;
  r.r_temp = 1.0 / 3.0;
  r.r_aggr = 0.7;
  r.accepted = true;
  r.archive_id = "arch-a.test";
  r.fetched_at = Instant{*make_timestamp(2020, 1, 1)} + std::chrono::milliseconds{1234};
  r.elapsed = std::chrono::milliseconds{1234};
  r.body_sha256 = sha256_hex("abc");
  CHECK(crawl_record_from_json(to_json(r)) == r);
  CHECK(*r.body_sha256 == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

  CrawlRecord d;
  d.uri = "http://a.test/y";
  d.dismissed = DismissReason::NoDatetime;
  d.detail = "no evidence";
  CHECK(crawl_record_from_json(to_json(d)) == d);
}

TEST_CASE("hand-traced chain S -> A -> B -> C stops after the irrelevant page") {
  FixtureSite site;
  auto on = std::string(event_text());
  auto off = std::string(off_topic_text());
  site.add_page("http://s.test/2015/06/05/s.html", {page(on, {"http://s.test/2015/06/05/a.html"})});
  site.add_page("http://s.test/2015/06/05/a.html", {page(on, {"http://s.test/2015/06/05/b.html"})});
  site.add_page("http://s.test/2015/06/05/b.html", {page(off, {"http://s.test/2015/06/05/c.html"})});
  site.add_page("http://s.test/2015/06/05/c.html", {page(on, {})});

  EventSpec spec;
  spec.name = "chain";
  spec.dt_e = *make_timestamp(2015, 6, 1);
  spec.dt_cp = *make_timestamp(2015, 7, 1);
  spec.seeds = {"http://s.test/2015/06/05/s.html"};
  spec.event_vector = build_term_vector(event_text(), IdfTable{});
  spec.th_cont = 0.6;
  spec.th_temp = 0.8;
  spec.grace_live = spec.grace_archive = Days{7};

  Harness h(site);
  auto c = h.run(spec, CrawlMode::Live);
  REQUIRE(c.records.size() == 3);
  CHECK(c.records[0].uri == "http://s.test/2015/06/05/s.html");
  CHECK(c.records[1].uri == "http://s.test/2015/06/05/a.html");
  CHECK(c.records[2].uri == "http://s.test/2015/06/05/b.html");
  CHECK(c.records[0].accepted);
  CHECK(c.records[1].accepted);
  CHECK_FALSE(c.records[2].accepted);
  CHECK(c.records[1].depth == 1);
  CHECK(c.records[2].depth == 2);
  CHECK(*c.records[2].r_cont == doctest::Approx(0.0));

  spec.max_depth = 0;
  auto seeds_only = h.run(spec, CrawlMode::Live);
  CHECK(seeds_only.records.size() == 1);
}

TEST_CASE("fetch failures and non-HTML are recorded as dismissals") {
  FixtureSite site;
  auto on = std::string(event_text());
  site.add_page("http://s.test/2015/06/05/s.html",
                {page(on, {"http://s.test/missing.html", "http://s.test/doc.pdf", "http://down.test/x"})});
  site.add_page("http://s.test/doc.pdf", {"%PDF-1.4", "application/pdf"});
  site.transport_failures.insert("http://down.test/x");

  EventSpec spec;
  spec.name = "failures";
  spec.dt_e = *make_timestamp(2015, 6, 1);
  spec.dt_cp = *make_timestamp(2015, 7, 1);
  spec.seeds = {"http://s.test/2015/06/05/s.html"};
  spec.event_vector = build_term_vector(event_text(), IdfTable{});
  spec.th_cont = 0.6;
  spec.th_temp = 0.8;

  Harness h(site);
  auto c = h.run(spec, CrawlMode::Live);
  REQUIRE(c.records.size() == 4);
  CHECK(c.records[1].dismissed == DismissReason::FetchFailed);
  CHECK(c.records[1].status == 404);
  CHECK(c.records[2].dismissed == DismissReason::NonHtml);
  CHECK(c.records[3].dismissed == DismissReason::FetchFailed);
  for (const auto& r : c.records)
    if (r.dismissed) CHECK_FALSE(r.accepted);
}

TEST_CASE("synthetic events: crawl reproduces the constructed ground truth") {
  for (auto mode : {CrawlMode::Live, CrawlMode::Archive}) {
    for (auto variant : {Variant::AllRelevant, Variant::Cliff, Variant::Mixed, Variant::PreEventOnly}) {
      SyntheticParams p;
      p.variant = variant;
      p.mode = mode;
      p.branching = 3;
      p.site_depth = 4;
      p.max_depth = 3;
      p.cliff_depth = 1;
      p.seeds = 2;
      p.rng_seed = 11;
      auto ev = build_synthetic_event(p);
      Harness h(ev.site);
      auto c = h.run(ev.spec, mode);
      CAPTURE(to_string(mode));
      CAPTURE(static_cast<int>(variant));
      CHECK(recorded(c) == ev.expected_records);
      CHECK(accepted(c) == ev.expected_accepted);
      CHECK(c.records.size() == ev.expected_records.size());
      for (const auto& r : c.records) {
        auto it = ev.expected_dismissed.find(r.uri);
        if (it == ev.expected_dismissed.end()) {
          CHECK_FALSE(r.dismissed.has_value());
        } else {
          CHECK(r.dismissed == it->second);
        }
        CHECK(r.depth <= ev.spec.max_depth);
        if (r.accepted) {
          CHECK(r.dt_r.has_value());
          CHECK(*r.r_aggr >= ev.spec.th_aggr());
        }
        if (mode == CrawlMode::Archive && !r.dismissed) {
          CHECK(r.uri_m.has_value());
          CHECK(r.archive_id.has_value());
        }
      }
      if (variant == Variant::Cliff)
        for (const auto& r : c.records)
          if (r.accepted) CHECK(r.depth <= p.cliff_depth);
    }
  }
}

TEST_CASE("archive crawl only ever enqueues original URIs") {
  SyntheticParams p;
  p.mode = CrawlMode::Archive;
  p.branching = 3;
  p.site_depth = 3;
  auto ev = build_synthetic_event(p);
  Harness h(ev.site);
  CrawlOptions options;
  std::vector<std::string> enqueued;
  options.on_enqueue = [&](const FrontierEntry& e) { enqueued.push_back(e.uri); };
  auto c = h.run(ev.spec, CrawlMode::Archive, options);
  CHECK(enqueued.size() > 10);
  for (const auto& uri : enqueued) {
    CHECK(uri.find("arch-") == std::string::npos);
    CHECK_FALSE(strip_archive_prefix(uri).has_value());
  }
}

TEST_CASE("single-worker crawls are byte-identical; multi-worker crawls agree on the accepted set") {
  SyntheticParams p;
  p.variant = Variant::Mixed;
  p.branching = 4;
  p.site_depth = 3;
  p.rng_seed = 5;
  auto ev = build_synthetic_event(p);
  for (auto mode : {CrawlMode::Live, CrawlMode::Archive}) {
    Harness h1(ev.site), h2(ev.site), h3(ev.site);
    auto a = h1.run(ev.spec, mode);
    auto b = h2.run(ev.spec, mode);
    CHECK(serialize_records(a.records) == serialize_records(b.records));
    CrawlOptions parallel;
    parallel.workers = 4;
    auto c = h3.run(ev.spec, mode, parallel);
    CHECK(accepted(c) == accepted(a));
    CHECK(recorded(c) == recorded(a));
    for (std::size_t i = 0; i < c.records.size(); ++i) CHECK(c.records[i].seq == i);
  }
}

TEST_CASE("no URI is fetched twice even with back-links") {
  SyntheticParams p;
  p.branching = 3;
  p.site_depth = 3;
  auto ev = build_synthetic_event(p);
  Harness h(ev.site);
  auto c = h.run(ev.spec, CrawlMode::Live);
  auto urls = h.fetcher->requested_urls();
  std::set<std::string> unique(urls.begin(), urls.end());
  CHECK(unique.size() == urls.size());
  CHECK(recorded(c).size() == c.records.size());
}

TEST_CASE("collection persistence round trip") {
  SyntheticParams p;
  p.variant = Variant::Mixed;
  p.mode = CrawlMode::Archive;
  auto ev = build_synthetic_event(p);
  Harness h(ev.site);
  auto c = h.run(ev.spec, CrawlMode::Archive);
  auto dir = std::filesystem::temp_directory_path() / "eventcrawl_collection_roundtrip";
  std::filesystem::remove_all(dir);
  save_collection(c, dir.string());
  auto back = load_collection(dir.string());
  CHECK(back.records == c.records);
  CHECK(back.mode == CrawlMode::Archive);
  CHECK(serialize_event_spec(back.event) == serialize_event_spec(c.event));
  CHECK(back.started_at == c.started_at);
  std::filesystem::remove_all(dir);
}
