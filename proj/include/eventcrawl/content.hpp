#pragma once

#include "eventcrawl/error.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace eventcrawl {

// Sparse TF-IDF vector over 1-grams and 2-grams. Keys are lowercased tokens
// ("bomb") or two tokens joined by one space ("pipe bomb"). Weights are
// strictly positive; ordered keys keep arithmetic and serialization
// deterministic.
class TermVector {
public:
  using Map = std::map<std::string, double, std::less<>>;

  TermVector() = default;
  explicit TermVector(Map entries);

  // Adds `weight` to the term's weight. Throws on negative or non-finite weights.
  void add(std::string_view term, double weight);
  double weight(std::string_view term) const;
  const Map& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  double norm() const;
  TermVector scaled(double factor) const;

  friend bool operator==(const TermVector&, const TermVector&) = default;

private:
  Map entries_;
};

// Document frequencies for IDF weighting.
//   idf(t) = ln((corpus_size + 1) / (doc_freq(t) + 1)) + 1
// An empty table gives every term idf 1.
class IdfTable {
public:
  IdfTable() = default;
  explicit IdfTable(std::int64_t corpus_size) : corpus_size_(corpus_size) {}

  void set(std::string term, std::int64_t doc_freq);
  std::int64_t corpus_size() const { return corpus_size_; }
  std::int64_t doc_freq(std::string_view term) const;
  double idf(std::string_view term) const;

  // TSV: first line "#corpus_size<TAB>N", then "ngram<TAB>doc_freq" rows.
  static IdfTable read(std::istream& in);
  static IdfTable load(const std::string& path);
  void write(std::ostream& out) const;

private:
  std::int64_t corpus_size_ = 0;
  std::unordered_map<std::string, std::int64_t> doc_freq_;
};

// Lowercased word tokens. Word characters are ASCII alphanumerics and
// non-ASCII letters; everything else separates tokens.
std::vector<std::string> tokenize_words(std::string_view text);

// Term counts over one or more documents. Bigrams never span documents.
class TermCounts {
public:
  void add_document(std::string_view text);
  TermVector weighted(const IdfTable& idf) const;

private:
  std::map<std::string, std::int64_t, std::less<>> counts_;
};

TermVector build_term_vector(std::string_view text, const IdfTable& idf);

// Cosine similarity of two non-negative vectors, in [0, 1]; 0 when either is empty.
double cosine(const TermVector& a, const TermVector& b);

struct EventVector {
  TermVector vector;
  std::vector<std::size_t> sampled;  // indices into the reference list, ascending
};

// Event vector over the wiki text plus a seeded sample of the references
// (sample drawn with repeat_seed(rng_seed, 0)).
EventVector build_event_vector(std::string_view wiki_text, std::span<const std::string> reference_texts,
                               double sample_fraction, std::uint64_t rng_seed, const IdfTable& idf);

enum class CandidateMode {
  Concatenated,       // one candidate vector over all held-out references
  PerReferenceMean,   // mean cosine of each held-out reference
};

struct ThresholdOptions {
  int repeats = 10;
  double sample_fraction = 0.6;
  std::uint64_t rng_seed = 0;
  CandidateMode mode = CandidateMode::Concatenated;
};

class ThresholdError : public Error {
public:
  using Error::Error;
};

// Per repeat: event vector from wiki text + sampled references, candidate
// from the held-out references, cosine between them. Returns the mean.
double content_threshold(std::string_view wiki_text, std::span<const std::string> reference_texts,
                         const ThresholdOptions& options, const IdfTable& idf);

// Replaceable main-content extractor.
class TextExtractor {
public:
  virtual ~TextExtractor() = default;
  virtual std::string extract(std::string_view html) const = 0;
};

// Keeps text segments between block boundaries whose density
// (characters / (1 + inline tags)) exceeds `min_density`; script, style,
// nav, header, footer and aside subtrees are dropped. Falls back to all
// visible text when no segment qualifies.
class DensityExtractor final : public TextExtractor {
public:
  explicit DensityExtractor(double min_density = 8.0) : min_density_(min_density) {}
  std::string extract(std::string_view html) const override;

private:
  double min_density_;
};

std::string extract_main_text(std::string_view html);

}  // namespace eventcrawl
