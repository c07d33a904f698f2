#include "eventcrawl/reporting.hpp"

#include "eventcrawl/strings.hpp"
#include "eventcrawl/uri.hpp"

#include <algorithm>
#include <ostream>
#include <set>

namespace eventcrawl {

DepthStats depth_histogram(const Collection& collection) {
  int deepest = collection.event.max_depth;
  for (const auto& r : collection.records) deepest = std::max(deepest, r.depth);
  DepthStats stats;
  for (int d = 0; d <= deepest; ++d) stats.rows.push_back(DepthRow{d});
  for (const auto& r : collection.records) {
    auto& row = stats.rows.at(static_cast<std::size_t>(r.depth));
    if (r.dismissed) {
      ++row.dismissed;
      continue;
    }
    ++row.crawled;
    if (r.accepted) ++row.relevant;
  }
  for (auto& row : stats.rows)
    row.fraction_relevant = row.crawled == 0 ? 0.0 : static_cast<double>(row.relevant) / static_cast<double>(row.crawled);
  return stats;
}

Axis axis_from_string(std::string_view text) {
  if (text == "time") return Axis::Time;
  if (text == "documents") return Axis::Documents;
  throw Error("unknown axis '" + std::string(text) + "' (expected time or documents)");
}

Subset subset_from_string(std::string_view text) {
  if (text == "relevant") return Subset::Relevant;
  if (text == "all") return Subset::All;
  throw Error("unknown subset '" + std::string(text) + "' (expected relevant or all)");
}

std::vector<SeriesPoint> accumulated_relevance(const Collection& collection, Axis axis, Subset subset) {
  std::vector<const CrawlRecord*> scored;
  for (const auto& r : collection.records)
    if (!r.dismissed && r.r_aggr) scored.push_back(&r);
  std::stable_sort(scored.begin(), scored.end(), [&](const CrawlRecord* a, const CrawlRecord* b) {
    if (axis == Axis::Time && a->elapsed != b->elapsed) return a->elapsed < b->elapsed;
    return a->seq < b->seq;
  });

  std::vector<SeriesPoint> series;
  double sum = 0;
  std::size_t documents = 0;
  for (const auto* r : scored) {
    ++documents;
    if (subset == Subset::Relevant && !r->accepted) continue;
    sum += *r->r_aggr;
    double x = axis == Axis::Time ? std::chrono::duration<double>(r->elapsed).count() : static_cast<double>(documents);
    series.push_back(SeriesPoint{x, sum});
  }
  return series;
}

std::map<std::string, double> archive_contributions(const Collection& collection) {
  if (collection.mode != CrawlMode::Archive) throw Error("archive contributions need an archive-mode collection");
  std::map<std::string, std::size_t> counts;
  std::size_t total = 0;
  for (const auto& r : collection.records) {
    if (r.dismissed || !r.archive_id) continue;
    ++counts[*r.archive_id];
    ++total;
  }
  std::map<std::string, double> shares;
  for (const auto& [archive, n] : counts) shares[archive] = static_cast<double>(n) / static_cast<double>(total);
  return shares;
}

namespace {

std::set<std::string> accepted_uris(const Collection& c) {
  std::set<std::string> out;
  for (const auto& r : c.records) {
    if (!r.accepted) continue;
    try {
      out.insert(normalize_uri(r.uri));
    } catch (const UriError&) {
      out.insert(r.uri);
    }
  }
  return out;
}

}  // namespace

Overlap compare_collections(const Collection& a, const Collection& b) {
  auto ua = accepted_uris(a);
  auto ub = accepted_uris(b);
  Overlap result{ua.size(), ub.size(), 0};
  for (const auto& uri : ua) result.overlap += ub.count(uri);
  return result;
}

void write_depth_csv(const DepthStats& stats, std::ostream& out) {
  out << "depth,crawled,relevant,fraction_relevant,dismissed\n";
  for (const auto& row : stats.rows)
    out << row.depth << ',' << row.crawled << ',' << row.relevant << ',' << row.fraction_relevant << ','
        << row.dismissed << '\n';
}

void write_series_csv(const std::vector<SeriesPoint>& series, std::ostream& out) {
  out << "x,cumulative_r_aggr\n";
  for (const auto& p : series) out << p.x << ',' << p.cumulative << '\n';
}

void write_contributions_csv(const std::map<std::string, double>& shares, std::ostream& out) {
  out << "archive_id,fraction\n";
  for (const auto& [archive, share] : shares) out << archive << ',' << share << '\n';
}

nlohmann::json summarize(const Collection& collection) {
  std::size_t accepted = 0, rejected = 0;
  std::map<std::string, std::size_t> dismissed;
  for (const auto& r : collection.records) {
    if (r.dismissed) ++dismissed[std::string(to_string(*r.dismissed))];
    else if (r.accepted) ++accepted;
    else ++rejected;
  }
  return nlohmann::json{
      {"event", collection.event.name},
      {"mode", std::string(to_string(collection.mode))},
      {"records", collection.records.size()},
      {"accepted", accepted},
      {"rejected", rejected},
      {"dismissed", dismissed},
      {"th_cont", collection.event.th_cont},
      {"th_temp", collection.event.th_temp},
      {"th_aggr", collection.event.th_aggr()},
      {"started_at", format_iso8601(collection.started_at)},
      {"finished_at", format_iso8601(collection.finished_at)},
  };
}

}  // namespace eventcrawl
