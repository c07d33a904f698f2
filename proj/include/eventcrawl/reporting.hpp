#pragma once

#include "eventcrawl/crawler.hpp"

#include "json.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace eventcrawl {

struct DepthRow {
  int depth = 0;
  std::size_t crawled = 0;    // non-dismissed records
  std::size_t relevant = 0;   // accepted records
  std::size_t dismissed = 0;
  double fraction_relevant = 0;  // relevant / crawled, 0 when nothing was crawled
};

struct DepthStats {
  std::vector<DepthRow> rows;  // depth 0 .. max(event max_depth, deepest record)
};

DepthStats depth_histogram(const Collection& collection);

enum class Axis { Time, Documents };
enum class Subset { Relevant, All };
Axis axis_from_string(std::string_view text);
Subset subset_from_string(std::string_view text);

struct SeriesPoint {
  double x = 0;  // elapsed seconds, or documents crawled so far
  double cumulative = 0;
};

// Running sum of r_aggr over non-dismissed records. The time axis orders by
// elapsed time; the documents axis orders by dequeue order and counts every
// non-dismissed record, so both subsets share one x scale.
std::vector<SeriesPoint> accumulated_relevance(const Collection& collection, Axis axis, Subset subset);

// Share of non-dismissed archive records served by each archive. Throws
// Error for a live-mode collection.
std::map<std::string, double> archive_contributions(const Collection& collection);

struct Overlap {
  std::size_t relevant_a = 0;
  std::size_t relevant_b = 0;
  std::size_t overlap = 0;
};

// Overlap of the normalized URIs of accepted records.
Overlap compare_collections(const Collection& a, const Collection& b);

void write_depth_csv(const DepthStats& stats, std::ostream& out);
void write_series_csv(const std::vector<SeriesPoint>& series, std::ostream& out);
void write_contributions_csv(const std::map<std::string, double>& shares, std::ostream& out);

// Record counts, dismissal counts by reason, and thresholds.
nlohmann::json summarize(const Collection& collection);

}  // namespace eventcrawl
