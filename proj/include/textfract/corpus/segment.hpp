#pragma once

// Orthographic sentence segmentation.
//
// A terminator ('.', '?', '!', or an ellipsis) closes a sentence except when
//   (a) a '.' follows an abbreviation listed in the lexicon,
//   (b) a '.' follows a single capital letter (an initial) or a dotted run
//       of them,
//   (c) it sits inside an open bracket or quotation and the next word is not
//       capitalized (configurable),
//   or it is an ellipsis not followed by whitespace and a capitalized word.
// At the end of the text or of a paragraph every terminator closes.
// Runs of consecutive terminators close one sentence; trailing closing quotes
// and brackets stay with the sentence they close.

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "textfract/corpus/document.hpp"
#include "textfract/error.hpp"

namespace textfract::corpus {

/// Abbreviations that do not end a sentence when followed by '.'.
///
/// File format: one entry per line, trailing '.' optional, '#' starts a
/// comment; matching ignores case. A line "!X" marks the single letter X as an ordinary word rather
/// than an initial (English "I").
class AbbreviationLexicon {
 public:
  AbbreviationLexicon() = default;

  static AbbreviationLexicon parse(std::string_view text, std::string language = {}) {
    AbbreviationLexicon lex;
    lex.language_ = std::move(language);
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const auto b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos) continue;
      const auto e = line.find_last_not_of(" \t\r");
      std::string entry = line.substr(b, e - b + 1);
      if (entry.starts_with('!')) {
        if (entry.size() > 1) lex.non_initials_.insert(entry.substr(1));
        continue;
      }
      while (entry.ends_with('.')) entry.pop_back();
      if (!entry.empty()) lex.entries_.insert(unicode::fold_case(entry));
    }
    return lex;
  }

  static AbbreviationLexicon load(const std::string& path, std::string language = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot read lexicon " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), std::move(language));
  }

  /// Case-insensitive; "Dr" and "dr" match the same entry.
  bool contains(const std::string& abbreviation) const {
    return entries_.count(unicode::fold_case(abbreviation)) > 0;
  }
  bool is_non_initial(const std::string& letter) const { return non_initials_.count(letter) > 0; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::string& language() const noexcept { return language_; }

  std::string canonical() const {
    std::string out = "lexicon[" + language_ + "]=";
    for (const auto& e : entries_) out += e + "|";
    out += ";non_initials=";
    for (const auto& e : non_initials_) out += e + "|";
    return out;
  }

 private:
  std::string language_;
  std::set<std::string> entries_;
  std::set<std::string> non_initials_;
};

struct SegmenterConfig {
  bool bracket_rule = true;            // rule (c)
  bool keep_unterminated_tail = false;

  std::string canonical() const {
    return std::string("bracket_rule=") + (bracket_rule ? "1" : "0") +
           ";keep_tail=" + (keep_unterminated_tail ? "1" : "0");
  }
};

struct Sentence {
  std::size_t begin = 0;  // token range [begin, end)
  std::size_t end = 0;
  std::size_t word_count = 0;
  std::size_t char_count = 0;  // code points over word surfaces
  bool terminated = true;
};

struct SegmentationReport {
  std::size_t sentences = 0;
  std::size_t lexicon_hits = 0;
  std::size_t initial_hits = 0;
  std::size_t bracket_suppressed = 0;
  std::size_t ellipsis_continuations = 0;
  std::size_t empty_sentences_skipped = 0;
  std::size_t dropped_tail_words = 0;
  bool tail_emitted = false;
};

struct Segmentation {
  std::vector<Sentence> sentences;
  SegmentationReport report;
};

namespace segment_detail {

inline bool is_capitalized_word(const Token& t) {
  return t.kind == TokenKind::Word && unicode::is_upper_start(unicode::first_code_point(t.surface));
}

/// "J", "J.R.R", "U.S.A": single capital letters joined by '.'.
inline bool is_initials(const std::string& surface, const AbbreviationLexicon& lexicon) {
  std::size_t parts = 0;
  std::size_t from = 0;
  while (from <= surface.size()) {
    const std::size_t dot = std::min(surface.find('.', from), surface.size());
    const std::string_view part(surface.data() + from, dot - from);
    if (unicode::code_point_count(part) != 1 || !unicode::is_upper_start(unicode::first_code_point(part))) return false;
    ++parts;
    from = dot + 1;
  }
  return parts > 1 || !lexicon.is_non_initial(surface);
}

struct QuoteState {
  int brackets = 0;
  int curly = 0;
  bool straight_open = false;

  bool open() const { return brackets > 0 || curly > 0 || straight_open; }
  void reset() { *this = QuoteState{}; }

  void update(const Token& t) {
    if (t.kind != TokenKind::Other) return;
    const UChar32 c = unicode::first_code_point(t.surface);
    switch (c) {
      case '(': case '[': case '{': ++brackets; return;
      case ')': case ']': case '}': if (brackets > 0) --brackets; return;
      case '"': straight_open = !straight_open; return;
      case 0x201C: case 0x00AB: case 0x201E: case 0x2039: ++curly; return;   // “ « „ ‹
      case 0x201D: case 0x00BB: case 0x203A: if (curly > 0) --curly; return;  // ” » ›
      default: return;
    }
  }
};

}  // namespace segment_detail

inline Segmentation segment_sentences(const Document& doc, const AbbreviationLexicon& lexicon,
                                      const SegmenterConfig& cfg = {}) {
  using segment_detail::is_capitalized_word;
  using segment_detail::is_initials;
  const auto& tk = doc.tokens;
  const std::size_t n = tk.size();
  Segmentation out;
  auto& rep = out.report;
  segment_detail::QuoteState quotes;

  std::size_t start = 0;
  auto close_sentence = [&](std::size_t end, bool terminated) {
    Sentence s{start, end, 0, 0, terminated};
    for (std::size_t i = start; i < end; ++i) {
      if (tk[i].kind == TokenKind::Word) {
        ++s.word_count;
        s.char_count += tk[i].length;
      }
    }
    if (s.word_count == 0) {
      ++rep.empty_sentences_skipped;
    } else {
      out.sentences.push_back(s);
    }
    start = end;
  };
  // first word after a terminator run; null at a further terminator, a
  // paragraph break or the end of the text
  auto next_word = [&](std::size_t from) -> const Token* {
    for (std::size_t j = from; j < n; ++j) {
      if (tk[j].paragraph_start || tk[j].kind == TokenKind::Terminator) return nullptr;
      if (tk[j].kind == TokenKind::Word) return &tk[j];
    }
    return nullptr;
  };

  std::size_t i = 0;
  while (i < n) {
    const Token& t = tk[i];
    if (t.paragraph_start) quotes.reset();
    if (t.kind != TokenKind::Terminator) {
      quotes.update(t);
      ++i;
      continue;
    }
    std::size_t run_end = i + 1;
    while (run_end < n && tk[run_end].kind == TokenKind::Terminator && !tk[run_end].paragraph_start) ++run_end;
    const bool single_period = run_end == i + 1 && t.surface == ".";

    bool ends = true;
    if (single_period && i > 0 && tk[i - 1].kind == TokenKind::Word && !t.space_before) {
      const std::string& prev = tk[i - 1].surface;
      if (lexicon.contains(prev)) {
        ends = false;
        ++rep.lexicon_hits;
      } else if (is_initials(prev, lexicon)) {
        ends = false;
        ++rep.initial_hits;
      }
    }
    const Token* following = next_word(run_end);
    if (ends && is_ellipsis(tk[run_end - 1]) && following) {
      const bool spaced = tk[run_end].space_before;
      if (!spaced || !is_capitalized_word(*following)) {
        ends = false;
        ++rep.ellipsis_continuations;
      }
    }
    if (ends && cfg.bracket_rule && quotes.open() && following && !is_capitalized_word(*following)) {
      ends = false;
      ++rep.bracket_suppressed;
    }
    if (!ends) {
      i = run_end;
      continue;
    }
    // closing quotes and brackets attached to the terminator belong to this sentence
    std::size_t end = run_end;
    while (end < n && tk[end].kind == TokenKind::Other && !tk[end].paragraph_start) {
      const UChar32 c = unicode::first_code_point(tk[end].surface);
      const bool closer = unicode::is_closing_punct(c) || (c == '"' && quotes.straight_open) ||
                          (c == '\'' && !tk[end].space_before);
      if (!closer) break;
      quotes.update(tk[end]);
      ++end;
    }
    close_sentence(end, true);
    i = end;
  }

  if (start < n) {
    std::size_t tail_words = 0;
    for (std::size_t j = start; j < n; ++j) tail_words += tk[j].kind == TokenKind::Word ? 1 : 0;
    if (tail_words > 0) {
      if (cfg.keep_unterminated_tail) {
        close_sentence(n, false);
        rep.tail_emitted = true;
      } else {
        rep.dropped_tail_words = tail_words;
      }
    }
  }
  rep.sentences = out.sentences.size();
  return out;
}

}  // namespace textfract::corpus
