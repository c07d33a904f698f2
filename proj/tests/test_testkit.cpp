#include "doctest.h"

#include "eventcrawl/content.hpp"
#include "eventcrawl/memento.hpp"
#include "eventcrawl/testkit.hpp"

#include <random>

using namespace eventcrawl;
using namespace eventcrawl::testkit;

namespace {

Timestamp base() { return *make_timestamp(2015, 6, 1, 12); }

HttpResponse ask(FixtureFetcher& f, const std::string& uri_r, std::optional<Timestamp> when) {
  Headers h;
  if (when) h.add("Accept-Datetime", format_http_date(*when));
  return f.fetch(HttpRequest{"http://timegate.test/timegate/" + uri_r, h});
}

FixtureSite three_snapshots() {
  FixtureSite site;
  site.add_page("http://a.test/x", FixturePage{"<p>live</p>"});
  site.add_snapshot("http://a.test/x", Snapshot{base() + Days{10}, "arch-b.test", R"(<a href="/y">y</a>)"});
  site.add_snapshot("http://a.test/x", Snapshot{base(), "arch-a.test", R"(<a href="/y">y</a>)"});
  site.add_snapshot("http://a.test/x", Snapshot{base() + Days{20}, "arch-a.test", "<p>late</p>"});
  return site;
}

}  // namespace

TEST_CASE("live serving") {
  FixtureSite site;
  site.add_page("http://a.test/x", FixturePage{"<p>hello</p>"});
  site.add_page("http://a.test/old", FixturePage{"", "text/html", 301, std::string("http://a.test/x")});
  FixtureFetcher f(site);
  auto r = f.fetch(HttpRequest{"http://A.test/x", {}});
  CHECK(r.status == 200);
  CHECK(r.body == "<p>hello</p>");
  CHECK(f.fetch(HttpRequest{"http://a.test/x", {}}).body == r.body);
  CHECK(f.fetch(HttpRequest{"http://a.test/missing", {}}).status == 404);
  auto moved = f.fetch(HttpRequest{"http://a.test/old", {}});
  CHECK(moved.status == 301);
  CHECK(moved.headers.get("Location") == "http://a.test/x");
  CHECK(f.request_count() == 4);
}

TEST_CASE("TimeGate picks the closest snapshot and links its neighbours") {
  FixtureFetcher f(three_snapshots());
  auto r = ask(f, "http://a.test/x", base() + Days{4});
  CHECK(r.status == 302);
  CHECK(*r.headers.get("Location") == memento_uri("arch-a.test", base(), "http://a.test/x"));
  CHECK(r.headers.get("Vary") == "accept-datetime");
  auto links = parse_link_headers(r.headers);
  CHECK(links.find("original")->target == "http://a.test/x");
  CHECK(links.find("next memento")->datetime == base() + Days{10});
  CHECK(links.find("prev memento") == nullptr);
  CHECK(links.find("first memento")->datetime == base());
  CHECK(links.find("last memento")->datetime == base() + Days{20});

  r = ask(f, "http://a.test/x", base() + Days{12});
  auto mid = parse_link_headers(r.headers);
  CHECK(*r.headers.get("Location") == memento_uri("arch-b.test", base() + Days{10}, "http://a.test/x"));
  CHECK(mid.find("prev memento")->datetime == base());
  CHECK(mid.find("next memento")->datetime == base() + Days{20});

  // Exact midpoint between day 0 and day 10: the earlier one wins.
  r = ask(f, "http://a.test/x", base() + Days{5});
  CHECK(*r.headers.get("Location") == memento_uri("arch-a.test", base(), "http://a.test/x"));

  // Before every snapshot: the earliest, with a next link.
  r = ask(f, "http://a.test/x", base() - Days{100});
  CHECK(*r.headers.get("Location") == memento_uri("arch-a.test", base(), "http://a.test/x"));
  CHECK(parse_link_headers(r.headers).find("next memento") != nullptr);

  // No Accept-Datetime: the most recent.
  r = ask(f, "http://a.test/x", std::nullopt);
  CHECK(*r.headers.get("Location") == memento_uri("arch-a.test", base() + Days{20}, "http://a.test/x"));

  CHECK(ask(f, "http://never.test/", base()).status == 404);
}

TEST_CASE("property: TimeGate selection equals brute-force closest with earlier ties") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    FixtureSite site;
    std::vector<Timestamp> times;
    int n = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < n; ++i) {
      auto t = base() + Days{static_cast<int>(rng() % 60)} + std::chrono::hours{static_cast<int>(rng() % 2) * 12};
      if (std::find(times.begin(), times.end(), t) != times.end()) continue;
      times.push_back(t);
      site.add_snapshot("http://p.test/", Snapshot{t, "arch-a.test", "<p>x</p>"});
    }
    std::sort(times.begin(), times.end());
    FixtureFetcher f(site);
    for (int q = 0; q < 10; ++q) {
      auto when = base() - Days{5} + std::chrono::hours{static_cast<int>(rng() % (70 * 24))};
      Timestamp best = times.front();
      for (auto t : times) {
        auto d = [&](Timestamp x) { return x > when ? x - when : when - x; };
        if (d(t) < d(best)) best = t;
      }
      auto r = ask(f, "http://p.test/", when);
      CHECK(*r.headers.get("Location") == memento_uri("arch-a.test", best, "http://p.test/"));
    }
  }
}

TEST_CASE("archive hosts serve mementos with rewritten outlinks") {
  FixtureFetcher f(three_snapshots());
  auto uri_m = memento_uri("arch-a.test", base(), "http://a.test/x");
  auto r = f.fetch(HttpRequest{uri_m, {}});
  CHECK(r.status == 200);
  CHECK(parse_http_date(*r.headers.get("Memento-Datetime")) == base());
  CHECK(r.body.find(memento_uri("arch-a.test", base(), "http://a.test/y")) != std::string::npos);
  CHECK(resolve_urir(r, uri_m) == "http://a.test/x");

  // Day precision on the wrong host of a snapshot: redirected within that host.
  auto inexact = f.fetch(HttpRequest{"http://arch-a.test/web/20150601/http://a.test/x", {}});
  CHECK(inexact.status == 302);
  CHECK(*inexact.headers.get("Location") == uri_m);
  CHECK(f.fetch(HttpRequest{"http://arch-a.test/web/20150601/http://never.test/", {}}).status == 404);
  CHECK(f.fetch(HttpRequest{"http://arch-a.test/other", {}}).status == 404);
}

TEST_CASE("timemap and JSON round trip") {
  auto site = three_snapshots();
  FixtureFetcher f(site);
  auto r = f.fetch(HttpRequest{"http://timegate.test/timemap/link/http://a.test/x", {}});
  CHECK(r.status == 200);
  auto ms = parse_timemap(r.body);
  REQUIRE(ms.size() == 3);
  CHECK(ms[2].memento_datetime == base() + Days{20});

  auto again = FixtureSite::from_json(site.to_json());
  CHECK(again.to_json() == site.to_json());
}

TEST_CASE("injected transport failures") {
  FixtureFetcher f(three_snapshots());
  f.fail_next("http://a.test/x", 1);
  CHECK_THROWS_AS(f.fetch(HttpRequest{"http://a.test/x", {}}), TransportError);
  CHECK(f.fetch(HttpRequest{"http://a.test/x", {}}).status == 200);
}

TEST_CASE("synthetic events are deterministic and consistent") {
  for (auto variant : {Variant::AllRelevant, Variant::Cliff, Variant::Mixed, Variant::PreEventOnly, Variant::Graded}) {
    for (auto mode : {CrawlMode::Live, CrawlMode::Archive}) {
      SyntheticParams p;
      p.variant = variant;
      p.mode = mode;
      auto a = build_synthetic_event(p);
      auto b = build_synthetic_event(p);
      CHECK(a.site.to_json().dump() == b.site.to_json().dump());
      CHECK(serialize_event_spec(a.spec) == serialize_event_spec(b.spec));
      CHECK(a.expected_accepted == b.expected_accepted);
      for (const auto& uri : a.expected_accepted) CHECK(a.expected_records.contains(uri));
      for (const auto& [uri, reason] : a.expected_dismissed) {
        CHECK(a.expected_records.contains(uri));
        CHECK_FALSE(a.expected_accepted.contains(uri));
      }
      if (variant == Variant::PreEventOnly) CHECK(a.expected_accepted.empty());
      CHECK_NOTHROW(a.spec.validate());
    }
  }
  SyntheticParams bad;
  bad.branching = 0;
  CHECK_THROWS_AS(build_synthetic_event(bad), Error);
  CHECK(cosine(build_term_vector(event_text(), IdfTable{}), build_term_vector(off_topic_text(), IdfTable{})) == 0.0);
}
