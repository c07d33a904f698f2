#pragma once

#include "eventcrawl/error.hpp"
#include "eventcrawl/time.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace eventcrawl {

// An external reference of the event's Wikipedia page version.
struct ReferenceEntry {
  std::string uri;
  std::optional<Timestamp> cited_datetime;    // date given in the article
  std::optional<Timestamp> archived_datetime; // when an archive captured it

  friend bool operator==(const ReferenceEntry&, const ReferenceEntry&) = default;
};

// Temporal interval of an event: full relevance on [dt_e, dt_cp], then
// halving every delta_t (a quarter of the interval) until the grace period
// runs out.
struct TemporalParams {
  Timestamp dt_e;
  Timestamp dt_cp;
  std::chrono::duration<double> delta_t{};
  Duration grace{};
  // When false the decay continues past the grace period instead of
  // dropping to zero.
  bool cutoff_after_grace = true;

  // Throws Error unless dt_e < dt_cp and grace >= 0.
  static TemporalParams make(Timestamp dt_e, Timestamp dt_cp, Duration grace, bool cutoff_after_grace = true);
};

double temporal_score(Timestamp dt_r, const TemporalParams& params);

class GracePeriodError : public Error {
public:
  using Error::Error;
};

// Mean of (archived - cited) over references carrying both datetimes;
// negative lags count as zero. Rounded to whole seconds.
Duration grace_period_archive(std::span<const ReferenceEntry> refs);

// Mean absolute pairwise distance between cited datetimes. Needs two or
// more dated references.
Duration grace_period_live(std::span<const ReferenceEntry> refs);

// Per repeat, mean temporal score of the cited datetimes in that repeat's
// reference sample (same sample schedule as content_threshold); mean over
// repeats whose sample holds a dated reference.
double temporal_threshold(std::span<const ReferenceEntry> refs, int repeats, double sample_fraction,
                          const TemporalParams& params, std::uint64_t rng_seed);

struct RelevanceScores {
  double r_cont = 0;
  double r_temp = 0;
  double r_aggr = 0;

  static RelevanceScores combine(double r_cont, double r_temp, double alpha, double beta);
};

double aggregate(double r_cont, double r_temp, double alpha, double beta);
double aggregate_threshold(double th_cont, double th_temp, double alpha, double beta);

}  // namespace eventcrawl
