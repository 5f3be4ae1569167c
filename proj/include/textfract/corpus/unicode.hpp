#pragma once

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "textfract/error.hpp"

namespace textfract::corpus {

enum class NormalizationForm { None, NFC, NFKC };

inline const char* to_string(NormalizationForm f) {
  switch (f) {
    case NormalizationForm::None: return "none";
    case NormalizationForm::NFC: return "NFC";
    case NormalizationForm::NFKC: return "NFKC";
  }
  return "?";
}

namespace unicode {

/// Throws DecodingError at the first ill-formed byte sequence.
inline void validate_utf8(std::string_view bytes) {
  const auto* s = reinterpret_cast<const std::uint8_t*>(bytes.data());
  const auto length = static_cast<std::int32_t>(bytes.size());
  std::int32_t i = 0;
  while (i < length) {
    const std::int32_t start = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) throw DecodingError(static_cast<std::size_t>(start));
  }
}

/// Decode (optionally dropping a byte-order mark) and normalize.
inline icu::UnicodeString decode(std::string_view bytes, NormalizationForm form) {
  validate_utf8(bytes);
  if (bytes.starts_with("\xEF\xBB\xBF")) bytes.remove_prefix(3);
  icu::UnicodeString text = icu::UnicodeString::fromUTF8(icu::StringPiece(bytes.data(), static_cast<std::int32_t>(bytes.size())));
  if (form == NormalizationForm::None) return text;
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = form == NormalizationForm::NFC ? icu::Normalizer2::getNFCInstance(status)
                                                                 : icu::Normalizer2::getNFKCInstance(status);
  if (U_FAILURE(status)) throw Error(ErrorKind::Decoding, "ICU normalizer unavailable");
  icu::UnicodeString out = norm->normalize(text, status);
  if (U_FAILURE(status)) throw Error(ErrorKind::Decoding, "normalization failed");
  return out;
}

inline std::string to_utf8(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

inline std::string append_utf8(std::string out, UChar32 c) {
  icu::UnicodeString(c).toUTF8String(out);
  return out;
}

/// Full Unicode case folding.
inline std::string fold_case(std::string_view utf8) {
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<std::int32_t>(utf8.size())));
  s.foldCase();
  return to_utf8(s);
}

inline bool is_letter_like(UChar32 c) {
  if (u_hasBinaryProperty(c, UCHAR_ALPHABETIC)) return true;
  const auto type = static_cast<UCharCategory>(u_charType(c));
  return type == U_NON_SPACING_MARK || type == U_COMBINING_SPACING_MARK || type == U_ENCLOSING_MARK;
}

inline bool is_digit(UChar32 c) { return u_isdigit(c) != 0; }

inline bool is_space(UChar32 c) { return u_isUWhiteSpace(c) != 0; }

inline bool is_upper_start(UChar32 c) { return u_isupper(c) || u_istitle(c); }

inline bool is_closing_punct(UChar32 c) {
  const auto type = static_cast<UCharCategory>(u_charType(c));
  return type == U_END_PUNCTUATION || type == U_FINAL_PUNCTUATION;
}

inline bool is_opening_punct(UChar32 c) {
  const auto type = static_cast<UCharCategory>(u_charType(c));
  return type == U_START_PUNCTUATION || type == U_INITIAL_PUNCTUATION;
}

/// First code point of a UTF-8 string, or U_SENTINEL when empty.
inline UChar32 first_code_point(std::string_view utf8) {
  if (utf8.empty()) return U_SENTINEL;
  std::int32_t i = 0;
  UChar32 c;
  U8_NEXT(reinterpret_cast<const std::uint8_t*>(utf8.data()), i, static_cast<std::int32_t>(utf8.size()), c);
  return c;
}

inline std::size_t code_point_count(std::string_view utf8) {
  std::size_t n = 0;
  for (char ch : utf8) {
    if ((static_cast<unsigned char>(ch) & 0xC0) != 0x80) ++n;
  }
  return n;
}

}  // namespace unicode
}  // namespace textfract::corpus
