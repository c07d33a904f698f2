#pragma once

// Independent reference implementations. They share only the documented
// sampling contract with the library and are written for obviousness, not
// speed.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

namespace oracle {

using int128 = __int128;

// Exact two-segment least-squares split by brute force: for every split k the
// deviation sums of both halves are recomputed from scratch. Cost of a
// segment with n values and sum s is sum((n*x - s)^2) / n^2, compared as
// exact fractions. Ties keep the smallest k.
inline std::int64_t change_point(const std::vector<std::int64_t>& x) {
  const auto n = static_cast<std::int64_t>(x.size());
  std::int64_t best_k = -1;
  int128 best_num = 0, best_den = 1;
  for (std::int64_t k = 1; k < n; ++k) {
    auto segment = [&](std::int64_t lo, std::int64_t hi) {  // returns (numerator, length)
      int128 len = hi - lo, s = 0, dev = 0;
      for (auto i = lo; i < hi; ++i) s += x[i];
      for (auto i = lo; i < hi; ++i) dev += (len * x[i] - s) * (len * x[i] - s);
      return std::pair<int128, int128>{dev, len};
    };
    auto [nl, ll] = segment(0, k);
    auto [nr, lr] = segment(k, n);
    int128 num = nl * lr * lr + nr * ll * ll;
    int128 den = ll * ll * lr * lr;
    if (best_k < 0 || num * best_den < best_num * den) {
      best_k = k;
      best_num = num;
      best_den = den;
    }
  }
  return best_k;
}

// Relative SSE reduction of the best split, as a double (for significance checks).
inline double improvement_ratio(const std::vector<std::int64_t>& x) {
  const double n = static_cast<double>(x.size());
  double mean = 0;
  for (auto v : x) mean += static_cast<double>(v);
  mean /= n;
  double sse0 = 0;
  for (auto v : x) sse0 += (v - mean) * (v - mean);
  auto k = change_point(x);
  auto sse = [&](std::size_t lo, std::size_t hi) {
    double m = 0;
    for (auto i = lo; i < hi; ++i) m += static_cast<double>(x[i]);
    m /= static_cast<double>(hi - lo);
    double s = 0;
    for (auto i = lo; i < hi; ++i) s += (x[i] - m) * (x[i] - m);
    return s;
  };
  double split = sse(0, static_cast<std::size_t>(k)) + sse(static_cast<std::size_t>(k), x.size());
  return sse0 == 0 ? 0 : (sse0 - split) / sse0;
}

// ---- sampling contract ------------------------------------------------------

inline std::uint64_t mix_seed(std::uint64_t seed, int repeat) {
  std::uint64_t z = seed + static_cast<std::uint64_t>(repeat) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Marks which of n items are in the repeat's 60% (or other fraction) sample.
inline std::vector<bool> sample_mask(std::size_t n, double fraction, std::uint64_t seed) {
  auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
  if (k > n) k = n;
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < n; ++i) pool.push_back(i);
  std::mt19937_64 engine(seed);
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(engine() % (n - i));
    std::swap(pool[i], pool[j]);
  }
  std::vector<bool> mask(n, false);
  for (std::size_t i = 0; i < k; ++i) mask[pool[i]] = true;
  return mask;
}

// ---- TF-IDF ---------------------------------------------------------------

using Counts = std::unordered_map<std::string, double>;

// ASCII-only: lowercased runs of letters and digits; bigrams within one text.
inline void count_terms(const std::string& text, Counts& counts) {
  std::vector<std::string> words;
  std::string w;
  for (char c : text + " ") {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      w += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!w.empty()) {
      words.push_back(w);
      w.clear();
    }
  }
  for (std::size_t i = 0; i < words.size(); ++i) {
    counts[words[i]] += 1;
    if (i + 1 < words.size()) counts[words[i] + " " + words[i + 1]] += 1;
  }
}

struct Idf {
  double corpus_size = 0;
  std::map<std::string, double> df;
  double operator()(const std::string& term) const {
    auto it = df.find(term);
    double d = it == df.end() ? 0 : it->second;
    return std::log((corpus_size + 1) / (d + 1)) + 1;
  }
};

inline Counts weigh(const Counts& counts, const Idf& idf) {
  Counts out;
  for (const auto& [t, c] : counts) out[t] = c * idf(t);
  return out;
}

inline double cosine(const Counts& a, const Counts& b) {
  double dot = 0, na = 0, nb = 0;
  for (const auto& [t, w] : a) {
    na += w * w;
    auto it = b.find(t);
    if (it != b.end()) dot += w * it->second;
  }
  for (const auto& [t, w] : b) nb += w * w;
  if (na == 0 || nb == 0) return 0;
  double c = dot / std::sqrt(na * nb);
  return c < 0 ? 0 : (c > 1 ? 1 : c);
}

// Mean over repeats of cos(event vector over wiki + sampled refs,
// candidate vector over the held-out refs), either one concatenated
// candidate or the mean of per-reference cosines.
inline double content_threshold(const std::string& wiki, const std::vector<std::string>& refs, int repeats,
                                double fraction, std::uint64_t seed, const Idf& idf, bool per_reference) {
  double total = 0;
  for (int r = 0; r < repeats; ++r) {
    auto mask = sample_mask(refs.size(), fraction, mix_seed(seed, r));
    Counts event, candidate;
    count_terms(wiki, event);
    std::vector<std::size_t> held;
    for (std::size_t i = 0; i < refs.size(); ++i) {
      if (mask[i]) count_terms(refs[i], event);
      else held.push_back(i);
    }
    auto ev = weigh(event, idf);
    if (!per_reference) {
      for (auto i : held) count_terms(refs[i], candidate);
      total += cosine(ev, weigh(candidate, idf));
    } else {
      double s = 0;
      for (auto i : held) {
        Counts one;
        count_terms(refs[i], one);
        s += cosine(ev, weigh(one, idf));
      }
      total += held.empty() ? 0 : s / static_cast<double>(held.size());
    }
  }
  return total / repeats;
}

// ---- temporal ---------------------------------------------------------------

// Times are plain seconds since the epoch.
inline double temporal_score(double t, double dt_e, double dt_cp, double grace, bool cutoff) {
  if (t < dt_e) return 0;
  if (t <= dt_cp) return 1;
  double lag = t - dt_cp;
  if (cutoff && lag > grace) return 0;
  double delta = (dt_cp - dt_e) / 4;
  return std::exp(-(std::log(2.0) / delta) * lag);
}

inline double temporal_threshold(const std::vector<std::optional<double>>& cited, int repeats, double fraction,
                                 std::uint64_t seed, double dt_e, double dt_cp, double grace, bool cutoff) {
  double total = 0;
  int used = 0;
  for (int r = 0; r < repeats; ++r) {
    auto mask = sample_mask(cited.size(), fraction, mix_seed(seed, r));
    double s = 0;
    int n = 0;
    for (std::size_t i = 0; i < cited.size(); ++i) {
      if (!mask[i] || !cited[i]) continue;
      s += temporal_score(*cited[i], dt_e, dt_cp, grace, cutoff);
      ++n;
    }
    if (n == 0) continue;
    total += s / n;
    ++used;
  }
  return total / used;
}

}  // namespace oracle
