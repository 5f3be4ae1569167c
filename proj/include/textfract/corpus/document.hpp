#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "textfract/corpus/unicode.hpp"
#include "textfract/detail/digest.hpp"

namespace textfract::corpus {

enum class TokenKind { Word, Terminator, Other };

inline const char* to_string(TokenKind k) {
  switch (k) {
    case TokenKind::Word: return "word";
    case TokenKind::Terminator: return "terminator";
    case TokenKind::Other: return "other";
  }
  return "?";
}

struct Token {
  TokenKind kind = TokenKind::Other;
  std::string surface;         // UTF-8
  std::size_t position = 0;    // index in Document::tokens
  std::size_t length = 0;      // code points
  bool space_before = false;   // whitespace separates it from the previous token
  bool paragraph_start = false;  // preceded by a blank line (or first token)
};

struct TokenizerConfig {
  NormalizationForm normalization = NormalizationForm::NFC;
  /// Joined into a word only between two word characters.
  std::u32string connectors = U"'’ʼ-‐‑";
  /// Treated like letters.
  std::u32string extra_word_chars;
  /// Single-character sentence enders; a run of two or more '.' is an ellipsis.
  std::u32string terminators = U".?!…";

  std::string canonical() const {
    std::string out = "normalization=" + std::string(to_string(normalization));
    auto cps = [](const std::u32string& s) {
      std::string r;
      for (char32_t c : s) r = unicode::append_utf8(std::move(r), static_cast<UChar32>(c));
      return r;
    };
    out += ";connectors=" + cps(connectors);
    out += ";extra_word_chars=" + cps(extra_word_chars);
    out += ";terminators=" + cps(terminators);
    return out;
  }
};

struct Document {
  std::string title;
  std::string language_tag;
  std::vector<Token> tokens;
  std::string source_hash;  // SHA-256 of the raw input bytes

  std::size_t word_count() const {
    return static_cast<std::size_t>(std::count_if(tokens.begin(), tokens.end(),
                                                  [](const Token& t) { return t.kind == TokenKind::Word; }));
  }
};

/// True for "...", "…" and similar ellipsis terminators.
inline bool is_ellipsis(const Token& t) {
  return t.kind == TokenKind::Terminator && (t.surface == "…" || t.surface.size() >= 2);
}

/// Split normalized text into words, sentence terminators and other marks.
///
/// Words are maximal runs of letters, digits and configured extra characters,
/// with connectors (apostrophes, hyphens) kept when flanked by word characters,
/// '.' or ',' kept between two digits and '.' kept between two letters
/// ("e.g", "U.S.A"; a trailing '.' stays a separate token). Every other non-space code point is
/// its own token, except that adjacent '.' characters form one ellipsis token.
inline Document tokenize(std::string_view raw, const TokenizerConfig& cfg = {}, std::string title = {},
                         std::string language_tag = {}) {
  Document doc;
  doc.title = std::move(title);
  doc.language_tag = std::move(language_tag);
  doc.source_hash = detail::sha256_hex(raw);

  const icu::UnicodeString text = unicode::decode(raw, cfg.normalization);
  std::u32string cps;
  cps.reserve(static_cast<std::size_t>(text.length()));
  for (std::int32_t i = 0; i < text.length();) {
    const UChar32 c = text.char32At(i);
    cps.push_back(static_cast<char32_t>(c));
    i += U16_LENGTH(c);
  }

  auto contains = [](const std::u32string& set, char32_t c) { return set.find(c) != std::u32string::npos; };
  auto is_word_char = [&](char32_t c) {
    return unicode::is_letter_like(static_cast<UChar32>(c)) || unicode::is_digit(static_cast<UChar32>(c)) ||
           contains(cfg.extra_word_chars, c);
  };
  auto is_digit_at = [&](std::size_t i) { return i < cps.size() && unicode::is_digit(static_cast<UChar32>(cps[i])); };
  auto is_letter_at = [&](std::size_t i) {
    return i < cps.size() && unicode::is_letter_like(static_cast<UChar32>(cps[i]));
  };

  bool space_before = false;
  bool paragraph_start = true;
  std::size_t newlines = 0;
  auto emit = [&](TokenKind kind, std::size_t from, std::size_t to) {
    Token t;
    t.kind = kind;
    for (std::size_t i = from; i < to; ++i) t.surface = unicode::append_utf8(std::move(t.surface), static_cast<UChar32>(cps[i]));
    t.length = to - from;
    t.position = doc.tokens.size();
    t.space_before = space_before;
    t.paragraph_start = paragraph_start;
    doc.tokens.push_back(std::move(t));
    space_before = false;
    paragraph_start = false;
    newlines = 0;
  };

  std::size_t i = 0;
  while (i < cps.size()) {
    const char32_t c = cps[i];
    if (unicode::is_space(static_cast<UChar32>(c))) {
      space_before = true;
      if (c == U'\n') {
        if (++newlines >= 2) paragraph_start = true;
      }
      ++i;
      continue;
    }
    if (is_word_char(c)) {
      std::size_t j = i + 1;
      while (j < cps.size()) {
        if (is_word_char(cps[j])) {
          ++j;
        } else if (j + 1 < cps.size() && contains(cfg.connectors, cps[j]) && is_word_char(cps[j + 1])) {
          j += 2;
        } else if ((cps[j] == U'.' || cps[j] == U',') && is_digit_at(j - 1) && is_digit_at(j + 1)) {
          j += 2;
        } else if (cps[j] == U'.' && is_letter_at(j - 1) && is_letter_at(j + 1)) {
          j += 2;
        } else {
          break;
        }
      }
      emit(TokenKind::Word, i, j);
      i = j;
      continue;
    }
    if (c == U'.') {
      std::size_t j = i + 1;
      while (j < cps.size() && cps[j] == U'.') ++j;
      emit(contains(cfg.terminators, U'.') ? TokenKind::Terminator : TokenKind::Other, i, j);
      i = j;
      continue;
    }
    emit(contains(cfg.terminators, c) ? TokenKind::Terminator : TokenKind::Other, i, i + 1);
    ++i;
  }
  return doc;
}

}  // namespace textfract::corpus
