#include "eventcrawl/changepoint.hpp"
#include "eventcrawl/crawler.hpp"
#include "eventcrawl/datetime_extract.hpp"
#include "eventcrawl/event_setup.hpp"
#include "eventcrawl/http.hpp"
#include "eventcrawl/memento.hpp"
#include "eventcrawl/reporting.hpp"
#include "eventcrawl/testkit.hpp"

#include "CLI11.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

using namespace eventcrawl;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
}

std::string index_endpoint(const std::string& api) {
  auto pos = api.rfind("api.php");
  return pos == std::string::npos ? api : api.substr(0, pos) + "index.php";
}

// Everything a crawl or setup run needs, wired from one config file.
struct Environment {
  EventConfig config;
  std::shared_ptr<Fetcher> fetcher;
  std::unique_ptr<MementoClient> mementos;
  IdfTable idf;
  std::unique_ptr<StubLookup> lookup;
  DensityExtractor extractor;
  Timestamp now;

  explicit Environment(EventConfig cfg) : config(std::move(cfg)) {
    if (!config.fixture_path.empty()) {
      fetcher = std::make_shared<testkit::FixtureFetcher>(testkit::FixtureSite::load(config.fixture_path));
    } else {
      fetcher = std::make_shared<HttpFetcher>(HttpFetcherOptions{config.request_timeout, "eventcrawl/1.0"});
    }
    mementos = std::make_unique<MementoClient>(
        fetcher, MementoClientOptions{config.timegate, 10, 2, config.politeness});
    if (!config.idf_path.empty()) idf = IdfTable::load(config.idf_path);
    if (!config.lookup_path.empty()) lookup = std::make_unique<StubLookup>(StubLookup::load(config.lookup_path));
    now = config.now.value_or(std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()));
  }

  EventSpec build_spec(SetupReport* report = nullptr) {
    std::optional<RevisionHistory> history;
    if (!config.revisions_path.empty()) {
      history = load_revision_history(config.revisions_path);
    } else if (!config.page_title.empty()) {
      history = MediaWikiRevisionSource(fetcher, config.mediawiki_api).fetch(config.page_title);
    }

    std::string html;
    if (!config.wiki_html_path.empty()) {
      html = read_file(config.wiki_html_path);
    } else if (!config.page_title.empty()) {
      std::string url = index_endpoint(config.mediawiki_api) + "?title=" + percent_encode(config.page_title);
      if (history && !history->revisions.empty()) {
        try {
          auto cp = change_point_datetime(*history, config.min_change_improvement);
          url += "&oldid=" + std::to_string(select_version(*history, cp));
        } catch (const ChangePointError&) {
        }
      }
      auto response = fetch_following_redirects(*fetcher, HttpRequest{url, {}});
      if (!response.ok()) throw Error("wiki page fetch failed: HTTP " + std::to_string(response.status));
      html = response.body;
    } else {
      throw Error("config needs wiki_html or page_title");
    }

    SetupServices services;
    services.fetcher = fetcher.get();
    services.mementos = config.mode == CrawlMode::Archive ? mementos.get() : nullptr;
    services.idf = &idf;
    services.extractor = &extractor;
    services.now = now;
    return build_event_spec(html, history ? &*history : nullptr, config, services, report);
  }
};

int run_setup(const std::string& config_path, const std::string& out) {
  Environment env(EventConfig::load(config_path));
  SetupReport report;
  auto spec = env.build_spec(&report);
  auto text = serialize_event_spec(spec);
  if (out.empty() || out == "-") std::cout << text;
  else write_file(out, text);
  spdlog::info("{} seeds, {} reference texts, th_cont={:.6f} th_temp={:.6f} th_aggr={:.6f}", spec.seeds.size(),
               report.reference_texts, spec.th_cont, spec.th_temp, spec.th_aggr());
  return 0;
}

int run_crawl(const std::string& config_path, const std::optional<std::string>& mode, const std::string& out,
              std::optional<int> workers, std::optional<std::uint64_t> seed_rng) {
  auto config = EventConfig::load(config_path);
  if (mode) config.mode = crawl_mode_from_string(*mode);
  if (workers) config.workers = *workers;
  if (seed_rng) config.rng_seed = *seed_rng;
  Environment env(std::move(config));
  auto spec = env.build_spec();

  std::filesystem::create_directories(std::filesystem::path(out) / "raw");
  std::mutex raw_mutex;
  CrawlOptions options;
  options.mode = env.config.mode;
  options.workers = env.config.workers;
  options.frontier_cap = env.config.frontier_cap;
  options.now = env.now;
  options.body_sink = [&](const std::string& digest, const std::string& body) {
    std::lock_guard lock(raw_mutex);
    auto path = std::filesystem::path(out) / "raw" / (digest + ".html");
    if (!std::filesystem::exists(path)) write_file(path.string(), body);
  };

  // A pinned "now" also pins the crawl clock so repeated runs match byte for byte.
  std::unique_ptr<Clock> clock;
  if (env.config.now) clock = std::make_unique<ManualClock>(Instant{*env.config.now}, std::chrono::milliseconds{1000});
  else clock = std::make_unique<SystemClock>();

  CrawlServices services;
  services.fetcher = env.fetcher.get();
  services.mementos = env.mementos.get();
  services.lookup = env.lookup.get();
  services.idf = &env.idf;
  services.extractor = &env.extractor;
  services.clock = clock.get();

  auto collection = crawl(spec, options, services);
  save_collection(collection, out);
  std::cout << summarize(collection).dump(2) << "\n";
  return 0;
}

int run_report(const std::string& dir, const std::string& kind, const std::string& axis, const std::string& subset,
               const std::string& out) {
  auto collection = load_collection(dir);
  std::ofstream csv(out);
  if (!csv) throw Error("cannot write " + out);
  if (kind == "depth") {
    write_depth_csv(depth_histogram(collection), csv);
  } else if (kind == "accum") {
    write_series_csv(accumulated_relevance(collection, axis_from_string(axis), subset_from_string(subset)), csv);
  } else if (kind == "archives") {
    write_contributions_csv(archive_contributions(collection), csv);
  } else {
    throw Error("unknown report kind '" + kind + "' (expected depth, accum or archives)");
  }
  write_file(out + ".summary.json", summarize(collection).dump(2) + "\n");
  return 0;
}

int run_compare(const std::string& a, const std::string& b) {
  auto overlap = compare_collections(load_collection(a), load_collection(b));
  nlohmann::json doc = {
      {"relevant_a", overlap.relevant_a}, {"relevant_b", overlap.relevant_b}, {"overlap", overlap.overlap}};
  std::cout << doc.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-centric focused crawler for the live and archived web"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  std::string config_path, out, mode_text;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed_rng;
  auto* crawl_cmd = app.add_subcommand("crawl", "Build the event model and crawl");
  crawl_cmd->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  crawl_cmd->add_option("--mode", mode_text, "live or archive (overrides the config)")
      ->check(CLI::IsMember({"live", "archive"}));
  crawl_cmd->add_option("--out", out, "Collection directory")->required();
  crawl_cmd->add_option("--workers", workers, "Fetch workers")->check(CLI::PositiveNumber);
  crawl_cmd->add_option("--seed-rng", seed_rng, "Seed for the reference sampling");

  std::string setup_config, setup_out;
  auto* setup_cmd = app.add_subcommand("setup", "Build and print the event model only");
  setup_cmd->add_option("--config", setup_config, "Config file")->required()->check(CLI::ExistingFile);
  setup_cmd->add_option("--out", setup_out, "event.json path (default stdout)");

  std::string collection_dir, kind, axis = "documents", subset = "all", report_out;
  auto* report_cmd = app.add_subcommand("report", "Plot data from a collection");
  report_cmd->add_option("--collection", collection_dir, "Collection directory")->required()->check(CLI::ExistingDirectory);
  report_cmd->add_option("--kind", kind, "depth, accum or archives")
      ->required()
      ->check(CLI::IsMember({"depth", "accum", "archives"}));
  report_cmd->add_option("--axis", axis, "time or documents")->check(CLI::IsMember({"time", "documents"}));
  report_cmd->add_option("--subset", subset, "relevant or all")->check(CLI::IsMember({"relevant", "all"}));
  report_cmd->add_option("--out", report_out, "CSV output")->required();

  std::string dir_a, dir_b;
  auto* compare_cmd = app.add_subcommand("compare", "Overlap of two collections' relevant URIs");
  compare_cmd->add_option("a", dir_a, "First collection")->required()->check(CLI::ExistingDirectory);
  compare_cmd->add_option("b", dir_b, "Second collection")->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);
  spdlog::set_default_logger(spdlog::stderr_color_mt("eventcrawl"));
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    if (*crawl_cmd)
      return run_crawl(config_path, mode_text.empty() ? std::nullopt : std::optional<std::string>(mode_text), out,
                       workers, seed_rng);
    if (*setup_cmd) return run_setup(setup_config, setup_out);
    if (*report_cmd) return run_report(collection_dir, kind, axis, subset, report_out);
    if (*compare_cmd) return run_compare(dir_a, dir_b);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
