#pragma once

// Series and tables derived from a segmented document.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "textfract/corpus/document.hpp"
#include "textfract/corpus/segment.hpp"
#include "textfract/detail/ols.hpp"
#include "textfract/error.hpp"
#include "textfract/series.hpp"

namespace textfract::corpus {

enum class LengthUnit { Words, Characters };

inline const char* to_string(LengthUnit u) { return u == LengthUnit::Words ? "words" : "chars"; }

struct SeriesSource {
  std::string title;
  std::string source_hash;
  std::size_t from = 0;  // 1-based inclusive slice bounds into the full series
  std::size_t to = 0;
};

inline constexpr std::size_t kDefaultMinSentences = 5000;

struct SentenceLengthSeries {
  std::vector<std::uint32_t> values;
  LengthUnit unit = LengthUnit::Words;
  SeriesSource source;
  std::size_t min_sentences = kDefaultMinSentences;

  std::size_t size() const noexcept { return values.size(); }
  /// Below the threshold the series is still usable; callers report a warning.
  bool meets_minimum() const noexcept { return values.size() >= min_sentences; }

  Series to_series() const {
    return make_series(std::vector<double>(values.begin(), values.end()));
  }
};

inline SentenceLengthSeries sentence_length_series(const std::vector<Sentence>& sentences, LengthUnit unit,
                                                   SeriesSource source = {},
                                                   std::size_t min_sentences = kDefaultMinSentences) {
  if (sentences.empty()) throw Error(ErrorKind::EmptyInput, "no sentences to measure");
  SentenceLengthSeries out;
  out.unit = unit;
  out.min_sentences = min_sentences;
  out.values.reserve(sentences.size());
  for (const auto& s : sentences) {
    out.values.push_back(static_cast<std::uint32_t>(unit == LengthUnit::Words ? s.word_count : s.char_count));
  }
  out.source = std::move(source);
  out.source.from = 1;
  out.source.to = out.values.size();
  return out;
}

/// Contiguous sub-series [from, to], 1-based inclusive.
inline SentenceLengthSeries slice_series(const SentenceLengthSeries& series, std::size_t from, std::size_t to) {
  if (from < 1 || from > to || to > series.size()) {
    throw Error(ErrorKind::Bounds, "slice [" + std::to_string(from) + ", " + std::to_string(to) + "] outside 1.." +
                                       std::to_string(series.size()));
  }
  SentenceLengthSeries out = series;
  out.values.assign(series.values.begin() + static_cast<std::ptrdiff_t>(from - 1),
                    series.values.begin() + static_cast<std::ptrdiff_t>(to));
  out.source.from = series.source.from + from - 1;
  out.source.to = series.source.from + to - 1;
  return out;
}

struct RecurrenceSeries {
  std::string target_word;
  std::vector<std::uint32_t> gaps;
  SeriesSource source;

  Series to_series() const { return make_series(std::vector<double>(gaps.begin(), gaps.end())); }
};

/// Gaps, in words, between consecutive occurrences of `target`. Only Word
/// tokens advance the word index.
inline RecurrenceSeries word_recurrence_series(const Document& doc, const std::string& target, bool fold_case = true) {
  const std::string key = fold_case ? unicode::fold_case(target) : target;
  std::vector<std::size_t> hits;
  std::size_t word_index = 0;
  for (const auto& t : doc.tokens) {
    if (t.kind != TokenKind::Word) continue;
    if ((fold_case ? unicode::fold_case(t.surface) : t.surface) == key) hits.push_back(word_index);
    ++word_index;
  }
  if (hits.size() < 2) throw InsufficientOccurrencesError(target, hits.size());
  RecurrenceSeries out;
  out.target_word = target;
  out.source = {doc.title, doc.source_hash, 1, hits.size() - 1};
  out.gaps.reserve(hits.size() - 1);
  for (std::size_t i = 1; i < hits.size(); ++i) out.gaps.push_back(static_cast<std::uint32_t>(hits[i] - hits[i - 1]));
  return out;
}

/// Recurrence of sentence ends measured in words, with a virtual end marker
/// before the first word: gap j is then the word count of sentence j.
inline RecurrenceSeries sentence_end_recurrence(const Document& doc, const std::vector<Sentence>& sentences) {
  if (sentences.empty()) throw InsufficientOccurrencesError("<sentence end>", 0);
  RecurrenceSeries out;
  out.target_word = "<sentence end>";
  out.source = {doc.title, doc.source_hash, 1, sentences.size()};
  std::size_t word_index = 0;
  std::size_t last_end = 0;
  std::size_t si = 0;
  for (std::size_t i = 0; i < doc.tokens.size() && si < sentences.size(); ++i) {
    if (doc.tokens[i].kind == TokenKind::Word) ++word_index;
    if (i + 1 == sentences[si].end) {
      out.gaps.push_back(static_cast<std::uint32_t>(word_index - last_end));
      last_end = word_index;
      ++si;
    }
  }
  return out;
}

struct RankEntry {
  std::size_t rank = 0;
  std::string surface;
  std::size_t count = 0;
};

struct RankFrequencyTable {
  std::vector<RankEntry> entries;
  bool include_terminators = false;
  std::string pseudo_word;

  std::size_t total() const {
    std::size_t sum = 0;
    for (const auto& e : entries) sum += e.count;
    return sum;
  }
};

inline constexpr const char* kDefaultTerminatorPseudoWord = "⟨.⟩";

/// Zipf table; ties keep first-occurrence order. With `include_terminators`
/// every Terminator token counts toward one pseudo-word.
inline RankFrequencyTable rank_frequency(const Document& doc, bool include_terminators = false, bool fold_case = true,
                                         std::string pseudo_word = kDefaultTerminatorPseudoWord) {
  std::unordered_map<std::string, std::size_t> index;
  std::vector<RankEntry> entries;
  for (const auto& t : doc.tokens) {
    std::string key;
    if (t.kind == TokenKind::Word) {
      key = fold_case ? unicode::fold_case(t.surface) : t.surface;
    } else if (t.kind == TokenKind::Terminator && include_terminators) {
      key = pseudo_word;
    } else {
      continue;
    }
    auto [it, inserted] = index.try_emplace(key, entries.size());
    if (inserted) entries.push_back({0, key, 0});
    ++entries[it->second].count;
  }
  std::stable_sort(entries.begin(), entries.end(), [](const RankEntry& a, const RankEntry& b) { return a.count > b.count; });
  for (std::size_t r = 0; r < entries.size(); ++r) entries[r].rank = r + 1;
  return {std::move(entries), include_terminators, std::move(pseudo_word)};
}

struct ZipfFit {
  double slope = 0.0;
  double intercept = 0.0;   // log10 count at rank 1
  double residual_sd = 0.0; // of log10 count
  std::size_t rank_lo = 0;
  std::size_t rank_hi = 0;
};

/// Least-squares line of log10 count on log10 rank over [rank_lo, rank_hi].
inline ZipfFit fit_zipf(const RankFrequencyTable& table, std::size_t rank_lo = 10, std::size_t rank_hi = 1000) {
  std::vector<double> x, y;
  for (const auto& e : table.entries) {
    if (e.rank < rank_lo || e.rank > rank_hi) continue;
    x.push_back(std::log10(static_cast<double>(e.rank)));
    y.push_back(std::log10(static_cast<double>(e.count)));
  }
  const auto line = textfract::detail::fit_line(x, y);
  return {line.slope, line.intercept, std::sqrt(line.residual_variance), rank_lo, rank_hi};
}

}  // namespace textfract::corpus
