#include "eventcrawl/content.hpp"

#include "eventcrawl/html.hpp"
#include "eventcrawl/sampling.hpp"
#include "eventcrawl/strings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace eventcrawl {

TermVector::TermVector(Map entries) {
  for (auto& [term, weight] : entries) add(term, weight);
}

void TermVector::add(std::string_view term, double weight) {
  if (!std::isfinite(weight) || weight < 0) throw Error("term weight must be finite and non-negative");
  if (weight == 0) return;
  auto it = entries_.find(term);
  if (it == entries_.end())
    entries_.emplace(std::string(term), weight);
  else
    it->second += weight;
}

double TermVector::weight(std::string_view term) const {
  auto it = entries_.find(term);
  return it == entries_.end() ? 0.0 : it->second;
}

double TermVector::norm() const {
  double sum = 0;
  for (const auto& [term, w] : entries_) sum += w * w;
  return std::sqrt(sum);
}

TermVector TermVector::scaled(double factor) const {
  TermVector out;
  for (const auto& [term, w] : entries_) out.add(term, w * factor);
  return out;
}

void IdfTable::set(std::string term, std::int64_t doc_freq) {
  if (doc_freq < 0 || doc_freq > corpus_size_)
    throw Error("document frequency of '" + term + "' outside [0, corpus_size]");
  doc_freq_[std::move(term)] = doc_freq;
}

std::int64_t IdfTable::doc_freq(std::string_view term) const {
  auto it = doc_freq_.find(std::string(term));
  return it == doc_freq_.end() ? 0 : it->second;
}

double IdfTable::idf(std::string_view term) const {
  return std::log(static_cast<double>(corpus_size_ + 1) / static_cast<double>(doc_freq(term) + 1)) + 1.0;
}

IdfTable IdfTable::read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("IDF table is empty");
  auto header = str::split(str::trim(line), '\t');
  auto parse_count = [](std::string_view s, const std::string& what) {
    std::int64_t v = 0;
    s = str::trim(s);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw ParseError("IDF table: bad " + what);
    return v;
  };
  if (header.size() != 2 || header[0] != "#corpus_size")
    throw ParseError("IDF table must start with '#corpus_size<TAB>N'");
  IdfTable table(parse_count(header[1], "corpus size"));
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.rfind('\t');
    if (tab == std::string::npos) throw ParseError("IDF table line " + std::to_string(line_no) + ": missing tab");
    auto df = parse_count(std::string_view(line).substr(tab + 1), "doc_freq on line " + std::to_string(line_no));
    try {
      table.set(line.substr(0, tab), df);
    } catch (const Error& e) {
      throw ParseError("IDF table line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return table;
}

IdfTable IdfTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open IDF table " + path);
  return read(in);
}

void IdfTable::write(std::ostream& out) const {
  std::map<std::string, std::int64_t> sorted(doc_freq_.begin(), doc_freq_.end());
  out << "#corpus_size\t" << corpus_size_ << "\n";
  for (const auto& [term, df] : sorted) out << term << "\t" << df << "\n";
}

namespace {

// Decodes one UTF-8 code point; malformed bytes decode as U+FFFD.
char32_t next_code_point(std::string_view s, std::size_t& i) {
  auto b0 = static_cast<unsigned char>(s[i]);
  int len = b0 < 0x80 ? 1 : (b0 >> 5) == 0x6 ? 2 : (b0 >> 4) == 0xE ? 3 : (b0 >> 3) == 0x1E ? 4 : 0;
  if (len == 0 || i + len > s.size()) {
    ++i;
    return 0xFFFD;
  }
  char32_t cp = len == 1 ? b0 : len == 2 ? (b0 & 0x1F) : len == 3 ? (b0 & 0x0F) : (b0 & 0x07);
  for (int k = 1; k < len; ++k) {
    auto b = static_cast<unsigned char>(s[i + k]);
    if ((b >> 6) != 0x2) {
      ++i;
      return 0xFFFD;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  i += len;
  return cp;
}

bool is_word_code_point(char32_t cp) {
  if (cp < 0x80) return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
  if (cp < 0xC0 || cp == 0xD7 || cp == 0xF7) return false;
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;  // punctuation, symbols, arrows
  if (cp >= 0x3000 && cp <= 0x303F) return false;  // CJK punctuation
  if (cp >= 0xFE30 && cp <= 0xFE4F) return false;
  if (cp >= 0xFF00 && cp <= 0xFF0F) return false;
  if (cp >= 0xD800 && cp <= 0xDFFF) return false;
  return cp != 0xFFFD && cp != 0xFEFF;
}

char32_t to_lower_cp(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
  if (cp >= 0x100 && cp <= 0x137 && cp % 2 == 0) return cp + 1;
  if (cp >= 0x391 && cp <= 0x3A9) return cp + 32;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 32;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 80;
  return cp;
}

}  // namespace

std::vector<std::string> tokenize_words(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t i = 0;
  while (i < text.size()) {
    char32_t cp = next_code_point(text, i);
    if (is_word_code_point(cp)) {
      html::append_utf8(current, to_lower_cp(cp));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

void TermCounts::add_document(std::string_view text) {
  auto tokens = tokenize_words(text);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    ++counts_[tokens[i]];
    if (i + 1 < tokens.size()) ++counts_[tokens[i] + " " + tokens[i + 1]];
  }
}

TermVector TermCounts::weighted(const IdfTable& idf) const {
  TermVector::Map entries;
  for (const auto& [term, tf] : counts_) entries.emplace(term, static_cast<double>(tf) * idf.idf(term));
  return TermVector(std::move(entries));
}

TermVector build_term_vector(std::string_view text, const IdfTable& idf) {
  TermCounts counts;
  counts.add_document(text);
  return counts.weighted(idf);
}

double cosine(const TermVector& a, const TermVector& b) {
  if (a.empty() || b.empty()) return 0.0;
  // Merge-join in key order, so cosine(a, b) and cosine(b, a) sum identically.
  double dot = 0;
  auto ia = a.entries().begin();
  auto ib = b.entries().begin();
  while (ia != a.entries().end() && ib != b.entries().end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  double denom = a.norm() * b.norm();
  if (denom == 0) return 0.0;
  return std::clamp(dot / denom, 0.0, 1.0);
}

namespace {

TermVector vector_over(std::string_view wiki_text, std::span<const std::string> refs,
                       const std::vector<std::size_t>& picked, const IdfTable& idf) {
  TermCounts counts;
  counts.add_document(wiki_text);
  for (auto i : picked) counts.add_document(refs[i]);
  return counts.weighted(idf);
}

}  // namespace

EventVector build_event_vector(std::string_view wiki_text, std::span<const std::string> reference_texts,
                               double sample_fraction, std::uint64_t rng_seed, const IdfTable& idf) {
  if (!(sample_fraction > 0 && sample_fraction <= 1)) throw Error("sample fraction must be in (0, 1]");
  EventVector out;
  out.sampled = sample_indices(reference_texts.size(), sample_fraction, repeat_seed(rng_seed, 0));
  out.vector = vector_over(wiki_text, reference_texts, out.sampled, idf);
  return out;
}

double content_threshold(std::string_view wiki_text, std::span<const std::string> refs,
                         const ThresholdOptions& options, const IdfTable& idf) {
  if (options.repeats < 1) throw ThresholdError("repeats must be at least 1");
  if (refs.size() < 2) throw ThresholdError("cannot split references");
  if (!(options.sample_fraction > 0 && options.sample_fraction <= 1))
    throw ThresholdError("sample fraction must be in (0, 1]");

  double sum = 0;
  for (int r = 0; r < options.repeats; ++r) {
    auto sampled = sample_indices(refs.size(), options.sample_fraction, repeat_seed(options.rng_seed, r));
    auto held_out = complement_indices(refs.size(), sampled);
    auto event = vector_over(wiki_text, refs, sampled, idf);
    if (options.mode == CandidateMode::Concatenated) {
      TermCounts counts;
      for (auto i : held_out) counts.add_document(refs[i]);
      sum += cosine(event, counts.weighted(idf));
    } else {
      double per_ref = 0;
      for (auto i : held_out) per_ref += cosine(event, build_term_vector(refs[i], idf));
      sum += held_out.empty() ? 0.0 : per_ref / static_cast<double>(held_out.size());
    }
  }
  return sum / options.repeats;
}

std::string DensityExtractor::extract(std::string_view input) const {
  struct Segment {
    std::string text;
    int inline_tags = 0;
  };
  std::vector<Segment> segments(1);
  std::string all_visible;
  int skipped = 0;
  auto is_skipped_tag = [](std::string_view name) {
    return name == "script" || name == "style" || name == "nav" || name == "footer" || name == "header" ||
           name == "aside" || name == "head" || name == "noscript" || name == "template" || name == "select";
  };
  for (const auto& t : html::tokenize(input)) {
    using Kind = html::Token::Kind;
    if (t.kind == Kind::Comment) continue;
    if (is_skipped_tag(t.name) && (t.kind == Kind::StartTag || t.kind == Kind::EndTag)) {
      if (t.kind == Kind::StartTag && !t.self_closing)
        ++skipped;
      else if (t.kind == Kind::EndTag && skipped > 0)
        --skipped;
      segments.emplace_back();
      continue;
    }
    if (skipped > 0) continue;
    if (t.kind == Kind::Text) {
      segments.back().text += t.text;
      all_visible += t.text;
    } else if (html::is_block_element(t.name)) {
      segments.emplace_back();
      all_visible += ' ';
    } else if (t.kind == Kind::StartTag) {
      ++segments.back().inline_tags;
    }
  }

  std::string kept;
  for (const auto& seg : segments) {
    auto text = str::collapse_whitespace(seg.text);
    if (text.empty()) continue;
    double density = static_cast<double>(text.size()) / (1.0 + seg.inline_tags);
    if (density > min_density_) {
      if (!kept.empty()) kept += ' ';
      kept += text;
    }
  }
  return kept.empty() ? str::collapse_whitespace(all_visible) : kept;
}

std::string extract_main_text(std::string_view html) { return DensityExtractor{}.extract(html); }

}  // namespace eventcrawl
