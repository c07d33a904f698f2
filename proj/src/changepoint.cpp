#include "eventcrawl/changepoint.hpp"

#include "eventcrawl/http.hpp"
#include "eventcrawl/strings.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <istream>

namespace eventcrawl {

using Reason = ChangePointError::Reason;
using int128 = __int128;

EditCurve build_edit_curve(const RevisionHistory& history) {
  if (history.revisions.empty()) throw ChangePointError(Reason::NoRevisions, "no revisions");
  auto [lo, hi] = std::minmax_element(history.revisions.begin(), history.revisions.end(),
                                      [](const Revision& a, const Revision& b) { return a.timestamp < b.timestamp; });
  EditCurve curve;
  curve.first_day = start_of_day(lo->timestamp);
  auto span_days = (start_of_day(hi->timestamp) - curve.first_day) / Days{1};
  curve.edits_per_day.assign(static_cast<std::size_t>(span_days) + 1, 0);
  for (const auto& rev : history.revisions) {
    auto day = (start_of_day(rev.timestamp) - curve.first_day) / Days{1};
    ++curve.edits_per_day[static_cast<std::size_t>(day)];
  }
  const double total = static_cast<double>(history.revisions.size());
  std::int64_t running = 0;
  curve.cumulative_fraction.reserve(curve.edits_per_day.size());
  for (auto count : curve.edits_per_day) {
    running += count;
    curve.cumulative_fraction.push_back(static_cast<double>(running) / total);
  }
  curve.cumulative_fraction.back() = 1.0;
  return curve;
}

std::int64_t detect_change_point(std::span<const std::int64_t> series, double min_improvement) {
  const auto n = static_cast<std::int64_t>(series.size());
  if (n < 2) throw ChangePointError(Reason::TooShort, "change point needs at least two days of edits");

  int128 total = 0;
  int128 total_sq = 0;
  for (auto x : series) {
    if (x < 0) throw Error("negative edit count");
    total += x;
    total_sq += static_cast<int128>(x) * x;
  }

  // Minimizing the two-segment SSE is maximizing
  //   gain(k) = S1^2/k + S2^2/(n-k) = (S1^2 (n-k) + S2^2 k) / (k (n-k)),
  // compared exactly as fractions.
  std::int64_t best_k = 1;
  int128 best_num = -1;
  int128 best_den = 1;
  int128 left = 0;
  for (std::int64_t k = 1; k < n; ++k) {
    left += series[static_cast<std::size_t>(k - 1)];
    int128 right = total - left;
    int128 num = left * left * (n - k) + right * right * k;
    int128 den = static_cast<int128>(k) * (n - k);
    if (best_num < 0 || num * best_den > best_num * den) {
      best_num = num;
      best_den = den;
      best_k = k;
    }
  }

  // SSE0 = Q - S^2/n; improvement = gain - S^2/n.
  long double sse0 = static_cast<long double>(total_sq) - static_cast<long double>(total * total) / n;
  long double improvement = static_cast<long double>(best_num) / static_cast<long double>(best_den) -
                            static_cast<long double>(total * total) / n;
  if (sse0 <= 0 || improvement < static_cast<long double>(min_improvement) * sse0)
    throw ChangePointError(Reason::NotSignificant, "no significant change point");
  return best_k;
}

std::int64_t detect_change_point(const EditCurve& curve, double min_improvement) {
  return detect_change_point(std::span<const std::int64_t>(curve.edits_per_day), min_improvement);
}

Timestamp change_point_datetime(const RevisionHistory& history, double min_improvement) {
  auto curve = build_edit_curve(history);
  return curve.first_day + Days{detect_change_point(curve, min_improvement)};
}

std::int64_t select_version(const RevisionHistory& history, Timestamp bound) {
  const Revision* best = nullptr;
  for (const auto& rev : history.revisions)
    if (rev.timestamp <= bound && (!best || rev.timestamp >= best->timestamp)) best = &rev;
  if (!best) {
    if (history.revisions.empty()) throw ChangePointError(Reason::NoRevisions, "no revisions");
    throw ChangePointError(Reason::BeforeFirstRevision,
                           "change point " + format_iso8601(bound) + " precedes the first revision");
  }
  return best->id;
}

namespace {

Revision revision_from_json(const nlohmann::json& obj) {
  Revision rev;
  rev.id = obj.at("revid").get<std::int64_t>();
  auto ts = parse_iso8601(obj.at("timestamp").get<std::string>());
  if (!ts) throw ParseError("bad revision timestamp: " + obj.at("timestamp").get<std::string>());
  rev.timestamp = *ts;
  return rev;
}

void sort_revisions(RevisionHistory& history) {
  std::stable_sort(history.revisions.begin(), history.revisions.end(),
                   [](const Revision& a, const Revision& b) { return a.timestamp < b.timestamp; });
}

}  // namespace

RevisionHistory read_revision_history(std::istream& in, std::string page_title) {
  RevisionHistory history;
  history.page_title = std::move(page_title);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (str::trim(line).empty()) continue;
    try {
      history.revisions.push_back(revision_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("revision history line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ParseError& e) {
      throw ParseError("revision history line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  sort_revisions(history);
  return history;
}

RevisionHistory load_revision_history(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open revision history " + path);
  return read_revision_history(in);
}

RevisionHistory FileRevisionSource::fetch(const std::string& page_title) {
  auto history = load_revision_history(path_);
  history.page_title = page_title;
  return history;
}

MediaWikiRevisionSource::MediaWikiRevisionSource(std::shared_ptr<Fetcher> fetcher, std::string api_endpoint)
    : fetcher_(std::move(fetcher)), endpoint_(std::move(api_endpoint)) {}

RevisionHistory MediaWikiRevisionSource::fetch(const std::string& page_title) {
  RevisionHistory history;
  history.page_title = page_title;
  std::optional<std::string> cont;
  do {
    std::string url = endpoint_ +
                      "?action=query&format=json&prop=revisions&rvprop=ids%7Ctimestamp&rvlimit=max&rvdir=newer"
                      "&titles=" +
                      percent_encode(page_title);
    if (cont) url += "&rvcontinue=" + percent_encode(*cont);
    auto response = fetch_following_redirects(*fetcher_, HttpRequest{url, {}});
    if (!response.ok()) throw Error("MediaWiki API returned HTTP " + std::to_string(response.status));
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(response.body);
      for (const auto& [id, page] : doc.at("query").at("pages").items()) {
        if (!page.contains("revisions")) continue;
        for (const auto& rev : page.at("revisions")) history.revisions.push_back(revision_from_json(rev));
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("MediaWiki API response: ") + e.what());
    }
    cont.reset();
    if (doc.contains("continue") && doc["continue"].contains("rvcontinue"))
      cont = doc["continue"]["rvcontinue"].get<std::string>();
  } while (cont);
  sort_revisions(history);
  return history;
}

}  // namespace eventcrawl
