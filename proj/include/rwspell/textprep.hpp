#pragma once

// Sentence segmentation, tokenization and digit regularization.
//
// Tokens are always byte substrings of the text they came from (before
// digit regularization), so every token carries its source offsets.

#include <algorithm>
#include <cstddef>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rwspell/error.hpp"
#include "rwspell/unicode.hpp"

namespace rwspell::textprep {

enum class TokenKind { word, punctuation, digit_class, other };

struct Token {
  std::string surface;
  TokenKind kind = TokenKind::word;
  std::size_t begin = 0;  // byte offsets into the tokenized text
  std::size_t end = 0;
};

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const Span&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;
  Span source_span;
};

/// Period-stripped abbreviation forms ("Dr", "e.g", "U.S").
class AbbreviationLexicon {
 public:
  AbbreviationLexicon() = default;
  AbbreviationLexicon(std::initializer_list<std::string> forms) {
    for (const auto& f : forms) add(f);
  }

  static AbbreviationLexicon english_defaults() {
    return AbbreviationLexicon{
        "Mr",   "Mrs",  "Ms",   "Dr",   "Prof", "Rev",  "Hon",  "St",   "Sr",   "Jr",
        "Gen",  "Col",  "Capt", "Lt",   "Sgt",  "Gov",  "Sen",  "Rep",  "Pres", "Mt",
        "Ft",   "Ave",  "Blvd", "Rd",   "Inc",  "Ltd",  "Co",   "Corp", "Bros", "vs",
        "etc",  "e.g",  "i.e",  "cf",   "al",   "approx", "ca", "viz",  "Jan",  "Feb",
        "Mar",  "Apr",  "Jun",  "Jul",  "Aug",  "Sep",  "Sept", "Oct",  "Nov",  "Dec",
        "No",   "Nos",  "Vol",  "vol",  "pp",   "p",    "ed",   "eds",  "Fig",  "fig",
        "U.S",  "U.K",  "U.N",  "a.m",  "p.m",  "A.D",  "B.C",  "Ph.D", "M.D",  "B.A",
        "M.A",  "Esq",  "Messrs"};
  }

  /// One form per line; a trailing period is optional and ignored.
  static AbbreviationLexicon load(std::istream& in) {
    AbbreviationLexicon lex;
    std::string line;
    while (std::getline(in, line)) {
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
        line.pop_back();
      std::size_t b = line.find_first_not_of(" \t");
      if (b == std::string::npos || line[b] == '#') continue;
      lex.add(line.substr(b));
    }
    return lex;
  }

  void add(std::string form) {
    while (!form.empty() && form.back() == '.') form.pop_back();
    if (!form.empty()) forms_.insert(std::move(form));
  }

  void merge(const AbbreviationLexicon& other) { forms_.insert(other.forms_.begin(), other.forms_.end()); }

  bool contains(std::string_view stem) const { return forms_.count(std::string(stem)) != 0; }
  std::size_t size() const { return forms_.size(); }
  const std::set<std::string>& forms() const { return forms_; }

 private:
  std::set<std::string> forms_;
};

namespace detail {

struct Chunk {
  std::size_t begin;
  std::size_t end;
  bool after_blank_line;  // a paragraph break precedes this chunk
};

inline std::vector<Chunk> chunks(std::string_view text) {
  std::vector<Chunk> out;
  std::size_t pos = 0;
  int newlines = 0;
  while (pos < text.size()) {
    std::size_t start = pos;
    unicode::CodePoint c = unicode::next_code_point(text, pos);
    if (unicode::is_space(c)) {
      if (c == U'\n') ++newlines;
      continue;
    }
    std::size_t end = pos;
    while (pos < text.size()) {
      std::size_t probe = pos;
      if (unicode::is_space(unicode::next_code_point(text, probe))) break;
      pos = end = probe;
    }
    out.push_back({start, end, newlines >= 2});
    newlines = 0;
  }
  return out;
}

inline bool is_opener(unicode::CodePoint c) {
  switch (c) {
    case U'"': case U'\'': case U'(': case U'[': case U'{':
    case U'“': case U'‘': case U'«': case U'`':
      return true;
    default:
      return false;
  }
}

inline bool is_closer(unicode::CodePoint c) {
  switch (c) {
    case U'"': case U'\'': case U')': case U']': case U'}':
    case U'”': case U'’': case U'»':
      return true;
    default:
      return false;
  }
}

inline std::u32string_view strip_openers(std::u32string_view s) {
  while (!s.empty() && is_opener(s.front())) s.remove_prefix(1);
  return s;
}

inline std::u32string_view strip_closers(std::u32string_view s) {
  while (!s.empty() && is_closer(s.back())) s.remove_suffix(1);
  return s;
}

inline bool single_capital(std::u32string_view stem) {
  return stem.size() == 1 && unicode::is_upper(stem[0]);
}

inline bool starts_lowercase(std::u32string_view chunk) {
  chunk = strip_openers(chunk);
  return !chunk.empty() && unicode::is_lower(chunk.front());
}

inline bool starts_uppercase_or_digit(std::u32string_view chunk) {
  chunk = strip_openers(chunk);
  return !chunk.empty() && (unicode::is_upper(chunk.front()) || unicode::is_ascii_digit(chunk.front()));
}

// Stem of a chunk that ends in a single period, e.g. "(Dr." -> "Dr".
// Empty when the chunk does not end in exactly one period.
inline std::u32string_view period_stem(std::u32string_view chunk) {
  auto core = strip_openers(chunk);
  if (core.size() < 2 || core.back() != U'.' || core[core.size() - 2] == U'.') return {};
  core.remove_suffix(1);
  return core;
}

inline bool abbreviation_like(std::u32string_view stem) {
  if (stem.empty() || stem.size() > 12) return false;
  bool alpha = false;
  for (auto c : stem) {
    if (unicode::is_alpha(c)) alpha = true;
    else if (c != U'.') return false;
  }
  return alpha;
}

inline bool ends_sentence(std::u32string_view chunk, const std::u32string* next,
                          const AbbreviationLexicon& lex) {
  if (next == nullptr) return true;
  auto core = strip_closers(chunk);
  if (core.empty()) return false;
  const auto last = core.back();
  if (last == U'?' || last == U'!') return true;
  if (last != U'.') return false;
  if (core.size() >= 2 && core[core.size() - 2] == U'.') {
    // ellipsis: only a boundary when the next word looks like a new sentence
    return starts_uppercase_or_digit(*next);
  }
  auto stem = strip_openers(core.substr(0, core.size() - 1));
  if (!stem.empty()) {
    if (lex.contains(unicode::encode(stem))) return false;
    if (single_capital(stem)) return false;
  }
  if (starts_lowercase(*next)) return false;
  return true;
}

}  // namespace detail

/// Learns extra abbreviations from a document: a period-final form is an
/// abbreviation when it is followed by a lowercase word at least twice.
inline AbbreviationLexicon learn_abbreviations(std::string_view doc, std::size_t min_count = 2) {
  const auto ch = detail::chunks(doc);
  std::map<std::u32string, std::size_t> mid_sentence;
  for (std::size_t i = 0; i + 1 < ch.size(); ++i) {
    if (ch[i + 1].after_blank_line) continue;
    auto cur = unicode::decode(doc.substr(ch[i].begin, ch[i].end - ch[i].begin));
    auto stem = detail::period_stem(cur);
    if (!detail::abbreviation_like(stem)) continue;
    auto next = unicode::decode(doc.substr(ch[i + 1].begin, ch[i + 1].end - ch[i + 1].begin));
    if (detail::starts_lowercase(next)) ++mid_sentence[std::u32string(stem)];
  }
  AbbreviationLexicon lex;
  for (const auto& [stem, n] : mid_sentence)
    if (n >= min_count) lex.add(unicode::encode(stem));
  return lex;
}

/// Splits a document into sentence spans (byte offsets). Blank lines are
/// hard boundaries; `?` and `!` always end a sentence; a final period ends
/// one unless it closes an abbreviation, an initial, or is followed by a
/// lowercase word.
inline std::vector<Span> segment_sentences(std::string_view doc, const AbbreviationLexicon& lex) {
  const auto ch = detail::chunks(doc);
  if (ch.empty()) throw EmptyInputError("document contains no non-whitespace text");

  std::vector<std::u32string> decoded;
  decoded.reserve(ch.size());
  for (const auto& c : ch) decoded.push_back(unicode::decode(doc.substr(c.begin, c.end - c.begin)));

  std::vector<Span> spans;
  std::size_t start = ch[0].begin;
  for (std::size_t i = 0; i < ch.size(); ++i) {
    const bool has_next = i + 1 < ch.size() && !ch[i + 1].after_blank_line;
    const std::u32string* next = has_next ? &decoded[i + 1] : nullptr;
    if (detail::ends_sentence(decoded[i], next, lex)) {
      spans.push_back({start, ch[i].end});
      if (i + 1 < ch.size()) start = ch[i + 1].begin;
    }
  }
  return spans;
}

namespace detail {

inline TokenKind classify(std::u32string_view cps) {
  bool word = false;
  bool punct_only = true;
  for (auto c : cps) {
    if (unicode::is_word_char(c)) word = true;
    const auto cat = u_charType(static_cast<UChar32>(c));
    const bool punct = cat == U_DASH_PUNCTUATION || cat == U_START_PUNCTUATION ||
                       cat == U_END_PUNCTUATION || cat == U_CONNECTOR_PUNCTUATION ||
                       cat == U_OTHER_PUNCTUATION || cat == U_INITIAL_PUNCTUATION ||
                       cat == U_FINAL_PUNCTUATION;
    if (!punct) punct_only = false;
  }
  if (word) return TokenKind::word;
  return punct_only ? TokenKind::punctuation : TokenKind::other;
}

inline std::u32string lower_ascii(std::u32string_view s) {
  std::u32string out(s);
  for (auto& c : out)
    if (c >= U'A' && c <= U'Z') c = c - U'A' + U'a';
    else if (c == U'’') c = U'\'';
  return out;
}

// Returns the split point of a contraction inside a word run, or npos.
inline std::size_t contraction_split(std::u32string_view run) {
  std::size_t apos = std::u32string_view::npos;
  for (std::size_t i = run.size(); i-- > 0;)
    if (unicode::is_apostrophe(run[i])) {
      apos = i;
      break;
    }
  if (apos == std::u32string_view::npos || apos == 0) return std::u32string_view::npos;
  const auto suffix = lower_ascii(run.substr(apos));
  static const std::u32string kSuffixes[] = {U"'s", U"'ll", U"'re", U"'ve", U"'d", U"'m"};
  for (const auto& s : kSuffixes)
    if (suffix == s) return apos;
  if (suffix == U"'t" && apos >= 2 && (run[apos - 1] == U'n' || run[apos - 1] == U'N'))
    return apos - 1;
  return std::u32string_view::npos;
}

}  // namespace detail

/// Tokenizes one sentence. Punctuation is isolated to single characters,
/// except inter-numeric commas/periods, ellipses, abbreviation/initial
/// periods, and contraction suffixes ("do" + "n't").
inline std::vector<Token> tokenize(std::string_view text,
                                   const AbbreviationLexicon& lex = AbbreviationLexicon::english_defaults()) {
  std::vector<Token> out;
  const auto cps = unicode::decode(text);
  const auto off = unicode::boundaries(text);
  const std::size_t n = cps.size();

  auto emit = [&](std::size_t b, std::size_t e) {
    std::u32string_view v(cps.data() + b, e - b);
    out.push_back({std::string(text.substr(off[b], off[e] - off[b])), detail::classify(v), off[b], off[e]});
  };
  auto word_at = [&](std::size_t i) { return i < n && unicode::is_word_char(cps[i]); };

  std::size_t i = 0;
  while (i < n) {
    const auto c = cps[i];
    if (unicode::is_space(c)) {
      ++i;
      continue;
    }
    if (unicode::is_word_char(c)) {
      std::size_t j = i + 1;
      while (j < n) {
        if (unicode::is_word_char(cps[j])) {
          ++j;
          continue;
        }
        const bool between_digits = j > i && unicode::is_ascii_digit(cps[j - 1]) && j + 1 < n &&
                                    unicode::is_ascii_digit(cps[j + 1]);
        if ((cps[j] == U',' || cps[j] == U'.') && between_digits) {
          ++j;
          continue;
        }
        // "U.S", "e.g": single letters joined by periods
        if (cps[j] == U'.' && word_at(j + 1) && unicode::is_alpha(cps[j - 1]) &&
            (j - 1 == i || cps[j - 2] == U'.') && (j + 2 >= n || !unicode::is_word_char(cps[j + 2]))) {
          j += 2;
          continue;
        }
        if (unicode::is_apostrophe(cps[j]) && word_at(j + 1)) {
          ++j;
          continue;
        }
        break;
      }
      std::size_t run_end = j;
      if (j < n && cps[j] == U'.' && !(j + 1 < n && cps[j + 1] == U'.')) {
        std::u32string_view run(cps.data() + i, j - i);
        bool dotted = run.find(U'.') != std::u32string_view::npos &&
                      std::none_of(run.begin(), run.end(), unicode::is_ascii_digit);
        if (lex.contains(unicode::encode(run)) || detail::single_capital(run) || dotted) run_end = j + 1;
      }
      std::u32string_view run(cps.data() + i, j - i);
      const auto split = run_end == j ? detail::contraction_split(run) : std::u32string_view::npos;
      if (split != std::u32string_view::npos) {
        emit(i, i + split);
        emit(i + split, j);
      } else {
        emit(i, run_end);
      }
      i = run_end;
      continue;
    }
    if (c == U'.') {
      std::size_t j = i;
      while (j < n && cps[j] == U'.') ++j;
      emit(i, j);  // "." or an ellipsis
      i = j;
      continue;
    }
    if (unicode::is_apostrophe(c) && i > 0 && word_at(i + 1) && !unicode::is_space(cps[i - 1])) {
      // suffix glued to a non-word char, e.g. ")'s"
      std::size_t j = i + 1;
      while (word_at(j)) ++j;
      auto suffix = detail::lower_ascii(std::u32string_view(cps.data() + i, j - i));
      if (suffix == U"'s" || suffix == U"'ll" || suffix == U"'re" || suffix == U"'ve" || suffix == U"'d" ||
          suffix == U"'m") {
        emit(i, j);
        i = j;
        continue;
      }
    }
    emit(i, i + 1);
    ++i;
  }
  return out;
}

inline bool is_digit_class(std::string_view s) {
  if (s.size() < 4 || s.front() != '<' || s.back() != '>' || s[1] != 'd') return false;
  auto body = s.substr(2, s.size() - 3);
  if (body == "9+") return true;
  return body.size() == 1 && body[0] >= '1' && body[0] <= '8';
}

inline std::string digit_class_token(std::size_t digits) {
  return digits >= 9 ? std::string("<d9+>") : "<d" + std::to_string(digits) + ">";
}

/// Replaces all-digit tokens with "<dN>" (N = digit count, 9+ collapsed).
inline std::vector<Token> regularize_digits(std::vector<Token> tokens) {
  for (auto& t : tokens) {
    if (t.surface.empty()) continue;
    const bool all_digits =
        std::all_of(t.surface.begin(), t.surface.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
    if (all_digits) {
      t.surface = digit_class_token(t.surface.size());
      t.kind = TokenKind::digit_class;
    }
  }
  return tokens;
}

/// Full pipeline for one document: learned + supplied abbreviations,
/// segmentation, tokenization, digit regularization.
inline std::vector<Sentence> prepare_document(std::string_view doc, const AbbreviationLexicon& base_lex,
                                              bool learn = true) {
  AbbreviationLexicon lex = base_lex;
  if (learn) lex.merge(learn_abbreviations(doc));
  std::vector<Sentence> out;
  for (const auto& span : segment_sentences(doc, lex)) {
    auto toks = tokenize(doc.substr(span.begin, span.end - span.begin), lex);
    for (auto& t : toks) {
      t.begin += span.begin;
      t.end += span.begin;
    }
    toks = regularize_digits(std::move(toks));
    if (!toks.empty()) out.push_back({std::move(toks), span});
  }
  return out;
}

}  // namespace rwspell::textprep
