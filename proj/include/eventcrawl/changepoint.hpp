#pragma once

#include "eventcrawl/error.hpp"
#include "eventcrawl/time.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace eventcrawl {

class Fetcher;

class ChangePointError : public Error {
public:
  enum class Reason { NoRevisions, TooShort, NotSignificant, BeforeFirstRevision };

  ChangePointError(Reason reason, const std::string& message) : Error(message), reason_(reason) {}
  Reason reason() const { return reason_; }

private:
  Reason reason_;
};

struct Revision {
  std::int64_t id = 0;
  Timestamp timestamp;
};

struct RevisionHistory {
  std::string page_title;
  std::vector<Revision> revisions;  // timestamps non-decreasing
};

struct EditCurve {
  Timestamp first_day;  // midnight UTC of the first revision
  std::vector<std::int64_t> edits_per_day;
  std::vector<double> cumulative_fraction;
};

EditCurve build_edit_curve(const RevisionHistory& history);

// At-most-one-change mean shift on a daily count series with least-squares
// cost. Returns the first index of the second segment. Throws
// ChangePointError(TooShort) for fewer than two days and
// ChangePointError(NotSignificant) when the best split removes less than
// min_improvement of the unsplit cost.
std::int64_t detect_change_point(std::span<const std::int64_t> series, double min_improvement = 0.01);
std::int64_t detect_change_point(const EditCurve& curve, double min_improvement = 0.01);

// Change point of the page's edit curve as a datetime: midnight UTC of the
// first day of the low-activity segment.
Timestamp change_point_datetime(const RevisionHistory& history, double min_improvement = 0.01);

// Latest revision with timestamp <= bound.
std::int64_t select_version(const RevisionHistory& history, Timestamp bound);

// One JSON object per line with "revid" and "timestamp"; sorted by timestamp
// on load.
RevisionHistory read_revision_history(std::istream& in, std::string page_title = {});
RevisionHistory load_revision_history(const std::string& path);

class RevisionSource {
public:
  virtual ~RevisionSource() = default;
  virtual RevisionHistory fetch(const std::string& page_title) = 0;
};

class FileRevisionSource final : public RevisionSource {
public:
  explicit FileRevisionSource(std::string path) : path_(std::move(path)) {}
  RevisionHistory fetch(const std::string& page_title) override;

private:
  std::string path_;
};

// Pages through prop=revisions of a MediaWiki action API endpoint
// (e.g. https://en.wikipedia.org/w/api.php) following rvcontinue.
class MediaWikiRevisionSource final : public RevisionSource {
public:
  MediaWikiRevisionSource(std::shared_ptr<Fetcher> fetcher, std::string api_endpoint);
  RevisionHistory fetch(const std::string& page_title) override;

private:
  std::shared_ptr<Fetcher> fetcher_;
  std::string endpoint_;
};

}  // namespace eventcrawl
