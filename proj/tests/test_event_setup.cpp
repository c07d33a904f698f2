#include "doctest.h"

#include "eventcrawl/event_setup.hpp"
#include "eventcrawl/memento.hpp"
#include "eventcrawl/testkit.hpp"

#include <fstream>
#include <sstream>

using namespace eventcrawl;
using namespace std::chrono_literals;

namespace {

std::string fixture(const std::string& rel) { return std::string(FIXTURE_DIR) + "/" + rel; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Timestamp at(int y, int mo, int d, int h = 0, int mi = 0, int s = 0) { return *make_timestamp(y, mo, d, h, mi, s); }

// Setup for one fixture event, wired the same way the CLI wires it.
struct FixtureEvent {
  EventConfig config;
  std::string html;
  std::optional<RevisionHistory> history;
  std::shared_ptr<testkit::FixtureFetcher> fetcher;
  std::unique_ptr<MementoClient> mementos;
  IdfTable idf;
  DensityExtractor extractor;

  explicit FixtureEvent(const std::string& config_file) : config(EventConfig::load(fixture(config_file))) {
    html = slurp(config.wiki_html_path);
    if (!config.revisions_path.empty()) history = load_revision_history(config.revisions_path);
    fetcher = std::make_shared<testkit::FixtureFetcher>(testkit::FixtureSite::load(config.fixture_path));
    mementos = std::make_unique<MementoClient>(fetcher, MementoClientOptions{config.timegate});
    idf = IdfTable::load(config.idf_path);
  }

  EventSpec build(SetupReport* report = nullptr) {
    SetupServices s;
    s.fetcher = fetcher.get();
    s.mementos = config.mode == CrawlMode::Archive ? mementos.get() : nullptr;
    s.idf = &idf;
    s.extractor = &extractor;
    s.now = *config.now;
    return build_event_spec(html, history ? &*history : nullptr, config, s, report);
  }
};

std::string refs_page(const std::vector<std::string>& hrefs) {
  std::string html = "<html><body><p>Body.</p><ol class=\"references\">";
  for (const auto& h : hrefs) html += "<li><a class=\"external text\" href=\"" + h + "\">title</a>. May 1, 2012.</li>";
  return html + "</ol></body></html>";
}

}  // namespace

TEST_CASE("event datetime parsing") {
  CHECK(parse_event_datetime("December 2, 2015") == at(2015, 12, 2, 0, 0, 1));
  CHECK(parse_event_datetime("January 8, 2011 10:10 MST") == at(2011, 1, 8, 17, 10));
  CHECK(parse_event_datetime("January 8, 2011\n10:10 a.m. MST (UTC−07:00)") == at(2011, 1, 8, 17, 10));
  CHECK(parse_event_datetime("31 October 2017") == at(2017, 10, 31, 0, 0, 1));
  CHECK(parse_event_datetime("2011-01-08") == at(2011, 1, 8, 0, 0, 1));
  CHECK_THROWS_AS(parse_event_datetime("sometime last winter"), ParseError);
}

TEST_CASE("infobox and article text of the fixture pages") {
  auto tuc = slurp(fixture("tucson/wiki.html"));
  auto date = infobox_date_text(tuc);
  REQUIRE(date);
  CHECK(parse_event_datetime(*date) == at(2011, 1, 8, 17, 10));
  auto nyc = infobox_date_text(slurp(fixture("nyc/wiki.html")));
  REQUIRE(nyc);
  CHECK(parse_event_datetime(*nyc) == at(2017, 10, 31, 0, 0, 1));
  CHECK_FALSE(infobox_date_text("<p>no infobox</p>"));

  auto text = wiki_article_text(tuc);
  CHECK(text.find("constituent meeting") != std::string::npos);
  CHECK(text.find("Retrieved") == std::string::npos);  // reference list dropped
  CHECK(text.find("Contents") == std::string::npos);
  CHECK(text.find("[edit]") == std::string::npos);
  CHECK(text.find("Main page") == std::string::npos);
}

TEST_CASE("references of the Tucson page match a hand count") {
  // 16 list items: one repeats the first citation, one links only inside
  // the wiki. That leaves 14.
  auto refs = extract_references(slurp(fixture("tucson/wiki.html")), "https://en.wikipedia.org/wiki/2011_Tucson_shooting");
  REQUIRE(refs.size() == 14);
  CHECK(refs[0].uri == "http://www.cnn.com/2011/POLITICS/01/08/arizona.shooting/index.html");
  CHECK(refs[0].cited_datetime == at(2011, 1, 8, 0, 0, 1));
  CHECK(refs[0].archived_datetime == at(2011, 1, 9, 4, 15));
  CHECK(refs[2].cited_datetime == at(2011, 1, 10, 0, 0, 1));
  CHECK(refs[2].archived_datetime == at(2011, 1, 14, 0, 0, 1));  // "Archived from the original on"
  CHECK(refs[3].cited_datetime == at(2011, 1, 12, 0, 0, 1));     // "Published"
  CHECK(refs[4].cited_datetime == at(2011, 1, 13, 0, 0, 1));     // day-first
  CHECK(refs[5].cited_datetime == at(2011, 1, 16, 0, 0, 1));     // only a retrieval date
  CHECK(refs[8].cited_datetime == at(2011, 1, 21, 0, 0, 1));     // publication ahead of retrieval
  CHECK(refs[11].cited_datetime == at(2011, 7, 12, 0, 0, 1));    // COinS
  CHECK_FALSE(refs[12].cited_datetime);
  CHECK(refs[13].uri.find("guardian") != std::string::npos);
  for (const auto& r : refs) CHECK(r.uri.find("wikipedia.org") == std::string::npos);
}

TEST_CASE("seed filters") {
  CHECK(has_non_html_extension("http://x.test/report.PDF"));
  CHECK(has_non_html_extension("http://x.test/a.jpg?w=10"));
  CHECK_FALSE(has_non_html_extension("http://x.test/story.html"));
  CHECK_FALSE(has_non_html_extension("http://x.test/2011/01/08/"));
  CHECK(uri_suggests_non_english("http://lenta.ru/news/"));
  CHECK(uri_suggests_non_english("http://x.test/\xd0\xbd\xd0\xbe\xd0\xb2\xd0\xbe\xd1\x81\xd1\x82\xd0\xb8"));
  CHECK_FALSE(uri_suggests_non_english("http://www.bbc.co.uk/news/"));
  CHECK(english_stopword_ratio("the cat and the dog") == doctest::Approx(0.6));
  CHECK(english_stopword_ratio("") == 0.0);

  auto html = refs_page({"http://www.cnn.com/a.html", "http://x.test/b.pdf", "http://news.example.ru/c"});
  auto seeds = extract_seeds(html, "https://en.wikipedia.org/wiki/X");
  REQUIRE(seeds.size() == 1);
  CHECK(seeds[0].uri == "http://www.cnn.com/a.html");

  // Duplicates collapse to their first appearance.
  auto dup = extract_seeds(refs_page({"http://a.test/1", "http://A.test/1", "http://a.test/2"}), "https://w.test/");
  REQUIRE(dup.size() == 2);
  CHECK(dup[1].uri == "http://a.test/2");

  // Fetched content overrides the URI heuristics.
  ReferenceFetches fetched;
  fetched["http://www.cnn.com/a.html"] = {200, "application/pdf", ""};
  fetched["http://news.example.ru/c"] = {200, "text/html",
                                           "the people of the city and the state were told that the road would be "
                                           "closed for the rest of the week while it is repaired"};
  fetched["http://x.test/b.pdf"] = {404, "", ""};
  auto by_content = extract_seeds(html, "https://en.wikipedia.org/wiki/X", &fetched);
  REQUIRE(by_content.size() == 1);
  CHECK(by_content[0].uri == "http://news.example.ru/c");

  CHECK_THROWS_AS(extract_seeds(refs_page({"http://x.test/only.pdf"}), "https://w.test/"), EventSetupError);
}

TEST_CASE("seed extraction is idempotent and drops the PDF and Russian references") {
  auto html = slurp(fixture("tucson/wiki.html"));
  auto base = "https://en.wikipedia.org/wiki/2011_Tucson_shooting";
  auto once = extract_seeds(html, base);
  CHECK(once.size() == 12);
  CHECK(extract_seeds(html, base) == once);
  for (const auto& s : once) {
    CHECK(s.uri.find(".pdf") == std::string::npos);
    CHECK(s.uri.find("lenta.ru") == std::string::npos);
  }
  // Re-extracting from a page that lists only the seeds gives the same URIs.
  std::vector<std::string> uris;
  for (const auto& s : once) uris.push_back(s.uri);
  auto again = extract_seeds(refs_page(uris), base);
  REQUIRE(again.size() == once.size());
  for (std::size_t i = 0; i < once.size(); ++i) CHECK(again[i].uri == once[i].uri);
}

TEST_CASE("configuration files") {
  auto c = EventConfig::load(fixture("tucson/config.json"));
  CHECK(c.name == "2011 Tucson shooting");
  CHECK(c.mode == CrawlMode::Live);
  CHECK(c.repeats == 10);
  CHECK(c.split_fraction == 0.6);
  CHECK(c.idf_path == fixture("idf.tsv"));
  CHECK(c.wiki_html_path == fixture("tucson/wiki.html"));
  CHECK(c.now == at(2018, 1, 15));
  CHECK(EventConfig::load(fixture("tucson/config-archive.json")).mode == CrawlMode::Archive);

  using nlohmann::json;
  CHECK_THROWS_AS(EventConfig::from_json(json{{"name", "x"}, {"max_dept", 3}}), ParseError);
  CHECK_THROWS_AS(EventConfig::from_json(json{{"max_depth", 3}}), ParseError);
  CHECK_THROWS_AS(EventConfig::from_json(json{{"name", "x"}, {"split_fraction", 1.0}}), ParseError);
  CHECK_THROWS_AS(EventConfig::from_json(json{{"name", "x"}, {"repeats", 0}}), ParseError);
  CHECK_THROWS_AS(EventConfig::from_json(json{{"name", "x"}, {"mode", "offline"}}), Error);
  CHECK_THROWS_AS(EventConfig::from_json(json{{"name", "x"}, {"now", "yesterday"}}), ParseError);
  CHECK_THROWS_AS(EventConfig::from_json(json::array()), ParseError);
  auto dated = EventConfig::from_json(json{{"name", "x"}, {"event_datetime", "December 2, 2015"}});
  CHECK(dated.event_datetime == at(2015, 12, 2, 0, 0, 1));
  CHECK(EventConfig::from_json(json{{"name", "x"}, {"idf", "/abs/idf.tsv"}}, "/base").idf_path == "/abs/idf.tsv");
}

TEST_CASE("Tucson: change point, page version and thresholds") {
  FixtureEvent ev("tucson/config.json");
  SetupReport report;
  auto spec = ev.build(&report);
  CHECK(spec.dt_e == at(2011, 1, 8, 17, 10));
  REQUIRE(spec.dt_cp);
  CHECK(*spec.dt_cp == at(2012, 1, 12));
  CHECK(spec.revision == 471037980);
  CHECK(report.change_point_found);
  CHECK(spec.seeds.size() == 12);
  CHECK(report.reference_texts == 12);
  CHECK(spec.th_cont > 0.0);
  CHECK(spec.th_cont <= 1.0);
  CHECK(spec.th_temp > 0.0);
  CHECK(spec.th_temp <= 1.0);
  CHECK(spec.th_aggr() == doctest::Approx((spec.th_cont + spec.th_temp) / 2).epsilon(1e-15));
  CHECK_NOTHROW(spec.validate());

  // The live grace period is the mean pairwise distance between cited
  // dates; the archive one the mean cited-to-archived lag.
  CHECK(spec.grace_live > Duration{0});
  CHECK(spec.grace_archive > Duration{0});

  auto serialized = serialize_event_spec(spec);
  CHECK(serialize_event_spec(FixtureEvent("tucson/config.json").build()) == serialized);
  CHECK(serialize_event_spec(event_spec_from_json(nlohmann::json::parse(serialized))) == serialized);

  // Other weights move only the aggregate.
  FixtureEvent weighted("tucson/config.json");
  weighted.config.alpha = 0.3;
  weighted.config.beta = 0.7;
  auto w = weighted.build();
  CHECK(w.th_cont == spec.th_cont);
  CHECK(w.th_temp == spec.th_temp);
  CHECK(w.th_aggr() == doctest::Approx(0.3 * spec.th_cont + 0.7 * spec.th_temp));
}

TEST_CASE("Tucson in archive mode resolves archival datetimes") {
  FixtureEvent ev("tucson/config-archive.json");
  SetupReport report;
  auto spec = ev.build(&report);
  CHECK(spec.dt_cp == at(2012, 1, 12));
  std::size_t archived = 0;
  for (const auto& r : report.references) {
    if (!r.archived_datetime) continue;
    ++archived;
    if (r.cited_datetime) CHECK(*r.archived_datetime >= *r.cited_datetime);
  }
  // Every dated seed except the never-archived one, plus the undated politico
  // reference which has no date to negotiate with.
  CHECK(archived == 10);
  CHECK(ev.fetcher->request_count() > 0);
  CHECK(spec.th_cont == FixtureEvent("tucson/config.json").build().th_cont);
}

TEST_CASE("NYC: no revision history, live page") {
  FixtureEvent ev("nyc/config.json");
  SetupReport report;
  auto spec = ev.build(&report);
  CHECK(spec.dt_e == at(2017, 10, 31, 0, 0, 1));
  CHECK_FALSE(spec.dt_cp);
  CHECK_FALSE(spec.revision);
  CHECK_FALSE(report.change_point_found);
  REQUIRE(report.change_point_note);
  CHECK(spec.seeds.size() == 5);
  // The open interval is closed by the pinned now.
  auto params = spec.temporal_params(CrawlMode::Live, *ev.config.now);
  CHECK(params.dt_cp == *ev.config.now);
  CHECK(std::chrono::duration_cast<Duration>(params.delta_t) == (*ev.config.now - spec.dt_e) / 4);
}

TEST_CASE("change points that do not qualify fall back to the live page") {
  FixtureEvent ev("tucson/config.json");
  // The event datetime moved past the change point.
  ev.config.event_datetime = at(2012, 6, 1);
  SetupReport late;
  auto spec = ev.build(&late);
  CHECK_FALSE(spec.dt_cp);
  CHECK(spec.revision == ev.history->revisions.back().id);
  CHECK_FALSE(late.change_point_found);

  // A one-revision history has no change point at all.
  FixtureEvent single("tucson/config.json");
  single.history->revisions.resize(1);
  SetupReport short_report;
  auto s = single.build(&short_report);
  CHECK_FALSE(s.dt_cp);
  CHECK(s.revision == single.history->revisions.front().id);
  CHECK(short_report.change_point_note);
}

TEST_CASE("setup errors") {
  FixtureEvent ev("nyc/config.json");
  ev.html = "<html><body><p>nothing here</p></body></html>";
  CHECK_THROWS_AS(ev.build(), EventSetupError);
  ev.config.event_datetime = at(2017, 10, 31);
  CHECK_THROWS_AS(ev.build(), EventSetupError);  // no seeds

  EventSpec bad;
  bad.name = "x";
  bad.dt_e = at(2012, 1, 1);
  bad.dt_cp = at(2011, 1, 1);
  bad.seeds = {"http://a.test/"};
  CHECK_THROWS_AS(bad.validate(), Error);
}
