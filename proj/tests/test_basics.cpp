#include "doctest.h"

#include "eventcrawl/html.hpp"
#include "eventcrawl/http.hpp"
#include "eventcrawl/sampling.hpp"
#include "eventcrawl/strings.hpp"
#include "eventcrawl/time.hpp"
#include "eventcrawl/uri.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <thread>

using namespace eventcrawl;
using namespace std::chrono;

TEST_CASE("iso8601 parsing") {
  CHECK(format_iso8601(*parse_iso8601("2017-12-09")) == "2017-12-09T00:00:01Z");
  CHECK(format_iso8601(*parse_iso8601("2017-12-09T10:14:50-05:00")) == "2017-12-09T15:14:50Z");
  CHECK(format_iso8601(*parse_iso8601("2017-12-09 10:14:50Z")) == "2017-12-09T10:14:50Z");
  CHECK(format_iso8601(*parse_iso8601("2017-12-09T10:14:50.123+01:30")) == "2017-12-09T08:44:50Z");
  CHECK_FALSE(parse_iso8601("2017-02-30").has_value());
  CHECK_FALSE(parse_iso8601("yesterday").has_value());
  CHECK_FALSE(parse_iso8601("2017-12-09T25:00:00Z").has_value());
}

TEST_CASE("http dates in all three forms") {
  auto expected = *make_timestamp(2011, 1, 8, 19, 0, 0);
  CHECK(*parse_http_date("Sat, 08 Jan 2011 19:00:00 GMT") == expected);
  CHECK(*parse_http_date("Saturday, 08-Jan-11 19:00:00 GMT") == expected);
  CHECK(*parse_http_date("Sat Jan  8 19:00:00 2011") == expected);
  CHECK(format_http_date(expected) == "Sat, 08 Jan 2011 19:00:00 GMT");
  CHECK_FALSE(parse_http_date("not a date").has_value());
}

TEST_CASE("compact archive timestamps") {
  auto t = *parse_compact("20110108120000");
  CHECK(format_compact(t) == "20110108120000");
  CHECK(format_iso8601(t) == "2011-01-08T12:00:00Z");
  CHECK_FALSE(parse_compact("2011010812").has_value());
}

TEST_CASE("time format round trip over random instants") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    Timestamp t{seconds{static_cast<std::int64_t>(rng() % 4'000'000'000ULL)}};
    CHECK(*parse_iso8601(format_iso8601(t)) == t);
    CHECK(*parse_http_date(format_http_date(t)) == t);
    CHECK(*parse_compact(format_compact(t)) == t);
  }
}

TEST_CASE("manual clock steps deterministically") {
  ManualClock clock(Instant{*make_timestamp(2020, 1, 1)}, milliseconds{10});
  auto a = clock.now();
  auto b = clock.now();
  CHECK(b - a == milliseconds{10});
  clock.advance(milliseconds{1000});
  CHECK(clock.now() - b == milliseconds{1010});
}

TEST_CASE("uri normalization") {
  CHECK(normalize_uri("HTTP://Example.COM:80/a/../b#frag") == "http://example.com/b");
  CHECK(normalize_uri("http://a/x?utm_source=t&id=2") == "http://a/x?id=2");
  CHECK(normalize_uri("https://a.test:443") == "https://a.test/");
  CHECK(normalize_uri("https://a.test:8443/x") == "https://a.test:8443/x");
  CHECK_THROWS_AS(normalize_uri("/relative/path"), UriError);
  CHECK_THROWS_AS(normalize_uri("http://bad host/"), UriError);
}

TEST_CASE("uri normalization is idempotent") {
  for (auto uri : {"http://example.com/b", "HTTP://Example.COM:80/a/./c/../d?q=1&utm_medium=x#f",
                   "https://x.test/%7Euser/", "http://a.test/p?utm_campaign=1"}) {
    auto once = normalize_uri(uri);
    CHECK(normalize_uri(once) == once);
  }
}

TEST_CASE("reference resolution examples") {
  const std::string base = "http://a/b/c/d;p?q";
  CHECK(resolve(base, "g") == "http://a/b/c/g");
  CHECK(resolve(base, "./g") == "http://a/b/c/g");
  CHECK(resolve(base, "g/") == "http://a/b/c/g/");
  CHECK(resolve(base, "/g") == "http://a/g");
  CHECK(resolve(base, "//g") == "http://g");
  CHECK(resolve(base, "?y") == "http://a/b/c/d;p?y");
  CHECK(resolve(base, "#s") == "http://a/b/c/d;p?q#s");
  CHECK(resolve(base, "../..") == "http://a/");
  CHECK(resolve(base, "../../../g") == "http://a/g");
  CHECK(resolve(base, "g;x?y#s") == "http://a/b/c/g;x?y#s");
  CHECK(resolve(base, "") == "http://a/b/c/d;p?q");
}

TEST_CASE("registrable domains") {
  CHECK(registrable_domain("web.archive.org") == "archive.org");
  CHECK(registrable_domain("www.bbc.co.uk") == "bbc.co.uk");
  CHECK(registrable_domain("archive.today") == "archive.today");
  CHECK(registrable_domain("127.0.0.1") == "127.0.0.1");
  CHECK(host_of("http://User@Example.com:8080/x") == "example.com");
}

TEST_CASE("html tokenizer basics") {
  auto tokens = html::tokenize(R"(<p class="x" data-a='1'>a &amp; b<br/><!-- c --></p><script>if (a<b) x();</script>)");
  REQUIRE(tokens.size() >= 6);
  CHECK(tokens[0].is_start("p"));
  CHECK(*tokens[0].attribute("class") == "x");
  CHECK(*tokens[0].attribute("data-a") == "1");
  CHECK(tokens[1].text == "a & b");
  CHECK(tokens[2].is_start("br"));
  CHECK(tokens[2].self_closing);
  CHECK(tokens[3].kind == html::Token::Kind::Comment);
  CHECK(tokens[4].is_end("p"));
  CHECK(tokens[5].is_start("script"));
  CHECK(tokens[6].text == "if (a<b) x();");
}

TEST_CASE("html entities and visible text") {
  CHECK(html::decode_entities("&lt;&#39;&#x2014;&nbsp;&unknown;") == "<'\xE2\x80\x94 &unknown;");
  CHECK(html::visible_text("<head><title>T</title></head><body><p>Hello <b>world</b></p><script>x</script></body>") ==
        "Hello world");
}

TEST_CASE("malformed html never throws") {
  std::mt19937_64 rng(9);
  const std::string alphabet = "<>/=\"' abc&;#!-p";
  for (int i = 0; i < 300; ++i) {
    std::string junk;
    for (int j = 0; j < 80; ++j) junk += alphabet[rng() % alphabet.size()];
    CHECK_NOTHROW(html::tokenize(junk));
    CHECK_NOTHROW(html::visible_text(junk));
  }
}

TEST_CASE("headers are case-insensitive and keep repeats") {
  Headers h;
  h.add("Link", "<a>; rel=\"x\"");
  h.add("link", "<b>; rel=\"y\"");
  h.set("Content-Type", "text/html; charset=utf-8");
  CHECK(h.get_all("LINK").size() == 2);
  CHECK(*h.get("content-type") == "text/html; charset=utf-8");
  HttpResponse r{200, h, "", ""};
  CHECK(r.media_type() == "text/html");
}

namespace {

class ScriptedFetcher final : public Fetcher {
public:
  std::map<std::string, HttpResponse> responses;
  HttpResponse fetch(const HttpRequest& request) override {
    auto it = responses.find(request.url);
    if (it == responses.end()) throw TransportError("no route to " + request.url);
    auto r = it->second;
    r.url = request.url;
    return r;
  }
};

}  // namespace

TEST_CASE("redirect following") {
  ScriptedFetcher f;
  f.responses["http://a.test/1"] = HttpResponse{301, {{"Location", "/2"}}, "", ""};
  f.responses["http://a.test/2"] = HttpResponse{302, {{"Location", "http://b.test/3"}}, "", ""};
  f.responses["http://b.test/3"] = HttpResponse{200, {}, "done", ""};
  std::vector<HttpResponse> chain;
  auto r = fetch_following_redirects(f, HttpRequest{"http://a.test/1", {}}, 10, &chain);
  CHECK(r.body == "done");
  CHECK(r.url == "http://b.test/3");
  CHECK(chain.size() == 3);

  f.responses["http://loop.test/"] = HttpResponse{302, {{"Location", "http://loop.test/"}}, "", ""};
  CHECK_THROWS_AS(fetch_following_redirects(f, HttpRequest{"http://loop.test/", {}}, 10), TooManyRedirects);
}

TEST_CASE("sampling contract") {
  CHECK(sample_size(10, 0.6) == 6);
  CHECK(sample_size(12, 0.6) == 7);
  CHECK(sample_size(5, 0.6) == 3);
  CHECK(sample_size(0, 0.6) == 0);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto s = sample_indices(12, 0.6, seed);
    CHECK(s.size() == 7);
    CHECK(std::is_sorted(s.begin(), s.end()));
    CHECK(std::set<std::size_t>(s.begin(), s.end()).size() == s.size());
    CHECK(s == sample_indices(12, 0.6, seed));
    auto rest = complement_indices(12, s);
    CHECK(rest.size() == 5);
    for (auto i : rest) CHECK(std::find(s.begin(), s.end(), i) == s.end());
  }
  CHECK(repeat_seed(1, 0) != repeat_seed(1, 1));
  CHECK(repeat_seed(1, 0) != repeat_seed(2, 0));
}

TEST_CASE("string helpers") {
  CHECK(str::collapse_whitespace("  a \n\t b  ") == "a b");
  CHECK(str::iequals("MeMento", "memento"));
  CHECK(str::icontains("X-Archive-Orig-Last-Modified", "orig"));
  CHECK(str::split("a,,b", ',').size() == 3);
}
