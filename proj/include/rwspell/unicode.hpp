#pragma once

// UTF-8 helpers on top of ICU. Everything above this layer works on
// std::string (UTF-8 bytes) and asks here for code-point level facts.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <unicode/uchar.h>
#include <unicode/utf8.h>

namespace rwspell::unicode {

using CodePoint = char32_t;

// Decodes one code point starting at byte offset `pos`; advances `pos`.
// Ill-formed sequences decode to U+FFFD and consume one byte.
inline CodePoint next_code_point(std::string_view s, std::size_t& pos) {
  int32_t i = static_cast<int32_t>(pos);
  const auto len = static_cast<int32_t>(s.size());
  UChar32 c = 0;
  U8_NEXT(reinterpret_cast<const uint8_t*>(s.data()), i, len, c);
  pos = static_cast<std::size_t>(i);
  return c < 0 ? CodePoint{0xFFFD} : static_cast<CodePoint>(c);
}

inline std::u32string decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) out.push_back(next_code_point(s, pos));
  return out;
}

inline void append_utf8(std::string& out, CodePoint c) {
  uint8_t buf[U8_MAX_LENGTH];
  int32_t n = 0;
  UBool err = false;
  U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), err);
  if (err) {
    out += "\xEF\xBF\xBD";
    return;
  }
  out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
}

inline std::string encode(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size());
  for (CodePoint c : cps) append_utf8(out, c);
  return out;
}

// Byte offsets of every code point boundary, including s.size().
inline std::vector<std::size_t> boundaries(std::string_view s) {
  std::vector<std::size_t> b;
  b.reserve(s.size() + 1);
  std::size_t pos = 0;
  while (pos < s.size()) {
    b.push_back(pos);
    next_code_point(s, pos);
  }
  b.push_back(s.size());
  return b;
}

inline bool is_alpha(CodePoint c) { return u_isUAlphabetic(static_cast<UChar32>(c)) != 0; }

inline bool is_ascii_digit(CodePoint c) { return c >= U'0' && c <= U'9'; }

inline bool is_space(CodePoint c) { return u_isUWhiteSpace(static_cast<UChar32>(c)) != 0; }

inline bool is_upper(CodePoint c) { return u_isUUppercase(static_cast<UChar32>(c)) != 0; }

inline bool is_lower(CodePoint c) { return u_isULowercase(static_cast<UChar32>(c)) != 0; }

// Letters, digits and combining marks stay inside words; anything else
// is punctuation for tokenization purposes.
inline bool is_word_char(CodePoint c) {
  if (is_alpha(c) || is_ascii_digit(c)) return true;
  const auto cat = u_charType(static_cast<UChar32>(c));
  return cat == U_DECIMAL_DIGIT_NUMBER || cat == U_NON_SPACING_MARK ||
         cat == U_COMBINING_SPACING_MARK || cat == U_ENCLOSING_MARK;
}

inline bool is_apostrophe(CodePoint c) { return c == U'\'' || c == U'’'; }

inline bool contains_alpha(std::string_view s) {
  std::size_t pos = 0;
  while (pos < s.size())
    if (is_alpha(next_code_point(s, pos))) return true;
  return false;
}

}  // namespace rwspell::unicode
