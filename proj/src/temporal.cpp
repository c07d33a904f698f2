#include "eventcrawl/temporal.hpp"

#include "eventcrawl/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace eventcrawl {

TemporalParams TemporalParams::make(Timestamp dt_e, Timestamp dt_cp, Duration grace, bool cutoff_after_grace) {
  if (!(dt_e < dt_cp))
    throw Error("event datetime " + format_iso8601(dt_e) + " must precede change point " + format_iso8601(dt_cp));
  if (grace < Duration::zero()) throw Error("grace period must be non-negative");
  TemporalParams p;
  p.dt_e = dt_e;
  p.dt_cp = dt_cp;
  p.delta_t = std::chrono::duration<double>(dt_cp - dt_e) / 4.0;
  p.grace = grace;
  p.cutoff_after_grace = cutoff_after_grace;
  return p;
}

double temporal_score(Timestamp dt_r, const TemporalParams& params) {
  if (dt_r < params.dt_e) return 0.0;
  if (dt_r <= params.dt_cp) return 1.0;
  auto lag = dt_r - params.dt_cp;
  if (params.cutoff_after_grace && lag > params.grace) return 0.0;
  // exp(-(ln 2 / dt) * lag) == 2^(-lag / dt)
  return std::exp2(-(std::chrono::duration<double>(lag) / params.delta_t));
}

namespace {
Duration round_seconds(double seconds) { return Duration{static_cast<Duration::rep>(std::llround(seconds))}; }
}  // namespace

Duration grace_period_archive(std::span<const ReferenceEntry> refs) {
  double total = 0;
  std::size_t count = 0;
  for (const auto& ref : refs) {
    if (!ref.cited_datetime || !ref.archived_datetime) continue;
    auto lag = *ref.archived_datetime - *ref.cited_datetime;
    total += static_cast<double>(std::max(lag, Duration::zero()).count());
    ++count;
  }
  if (count == 0) throw GracePeriodError("no reference carries both a cited and an archival datetime");
  return round_seconds(total / static_cast<double>(count));
}

Duration grace_period_live(std::span<const ReferenceEntry> refs) {
  std::vector<std::int64_t> times;
  for (const auto& ref : refs)
    if (ref.cited_datetime) times.push_back(ref.cited_datetime->time_since_epoch().count());
  if (times.size() < 2) throw GracePeriodError("fewer than two dated references");
  std::sort(times.begin(), times.end());
  // Sum over pairs i<j of (t_j - t_i) = sum_j t_j * (2j - n + 1).
  const auto n = static_cast<std::int64_t>(times.size());
  long double total = 0;
  for (std::int64_t j = 0; j < n; ++j) total += static_cast<long double>(times[j]) * (2 * j - n + 1);
  long double pairs = static_cast<long double>(n) * (n - 1) / 2;
  return round_seconds(static_cast<double>(total / pairs));
}

double temporal_threshold(std::span<const ReferenceEntry> refs, int repeats, double sample_fraction,
                          const TemporalParams& params, std::uint64_t rng_seed) {
  if (refs.empty()) throw Error("temporal threshold needs references");
  if (repeats < 1) throw Error("repeats must be at least 1");
  double sum = 0;
  int contributing = 0;
  for (int r = 0; r < repeats; ++r) {
    double repeat_sum = 0;
    int dated = 0;
    for (auto i : sample_indices(refs.size(), sample_fraction, repeat_seed(rng_seed, r))) {
      if (!refs[i].cited_datetime) continue;
      repeat_sum += temporal_score(*refs[i].cited_datetime, params);
      ++dated;
    }
    if (dated == 0) continue;
    sum += repeat_sum / dated;
    ++contributing;
  }
  if (contributing == 0) throw Error("no sampled reference carries a datetime");
  return sum / contributing;
}

double aggregate(double r_cont, double r_temp, double alpha, double beta) {
  if (alpha < 0 || beta < 0) throw Error("weights must be non-negative");
  return alpha * r_cont + beta * r_temp;
}

double aggregate_threshold(double th_cont, double th_temp, double alpha, double beta) {
  return aggregate(th_cont, th_temp, alpha, beta);
}

RelevanceScores RelevanceScores::combine(double r_cont, double r_temp, double alpha, double beta) {
  return {r_cont, r_temp, aggregate(r_cont, r_temp, alpha, beta)};
}

}  // namespace eventcrawl
