#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rwspell/corpus_io.hpp"
#include "rwspell/error.hpp"
#include "rwspell/unicode.hpp"

namespace rwspell {

inline constexpr std::string_view kBeginMarker = "<s>";
inline constexpr std::string_view kEndMarker = "</s>";
inline constexpr std::string_view kUnknownMarker = "<unk>";

inline bool is_reserved(std::string_view t) {
  return t == kBeginMarker || t == kEndMarker || t == kUnknownMarker;
}

/// A real word has at least one alphabetic character and no characters
/// other than letters, apostrophes and periods.
inline bool is_realword_form(std::string_view t) {
  if (t.empty() || is_reserved(t)) return false;
  bool alpha = false;
  std::size_t pos = 0;
  while (pos < t.size()) {
    const auto c = unicode::next_code_point(t, pos);
    if (unicode::is_alpha(c)) alpha = true;
    else if (!unicode::is_apostrophe(c) && c != U'.') return false;
  }
  return alpha;
}

inline uint64_t fnv1a(std::string_view s, uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Identity of a base vocabulary: hash over its sorted members.
inline uint64_t vocabulary_fingerprint(const std::vector<std::string>& sorted_words) {
  uint64_t h = 1469598103934665603ULL;
  for (const auto& w : sorted_words) {
    h = fnv1a(w, h);
    h = fnv1a(std::string_view("\n", 1), h);
  }
  return h;
}

struct VocabStats {
  std::size_t type_count = 0;
  std::size_t hapax_count = 0;
  double hapax_pct = 0.0;
  uint64_t token_count = 0;
};

class Vocabulary {
 public:
  Vocabulary() = default;

  static Vocabulary build(const Corpus& corpus) {
    Vocabulary v;
    for (const auto& s : corpus)
      for (const auto& t : s) v.add(t);
    v.finalize();
    return v;
  }

  static Vocabulary from_counts(std::unordered_map<std::string, uint64_t> counts) {
    Vocabulary v;
    v.counts_ = std::move(counts);
    v.finalize();
    return v;
  }

  void add(std::string_view token, uint64_t n = 1) {
    if (is_reserved(token)) return;
    counts_[std::string(token)] += n;
  }

  /// Recomputes the derived sets. Throws when nothing was counted.
  void finalize() {
    if (counts_.empty()) throw EmptyInputError("empty corpus: no tokens to build a vocabulary from");
    base_.clear();
    realword_.clear();
    realword_lookup_.clear();
    total_ = 0;
    hapax_ = 0;
    for (const auto& [t, n] : counts_) {
      total_ += n;
      if (n == 1) ++hapax_;
      if (n >= 2) base_.push_back(t);
    }
    std::sort(base_.begin(), base_.end());
    for (const auto& t : base_)
      if (is_realword_form(t)) realword_.push_back(t);
    realword_lookup_.insert(realword_.begin(), realword_.end());
    base_lookup_ = std::unordered_set<std::string>(base_.begin(), base_.end());
    fingerprint_ = vocabulary_fingerprint(base_);
  }

  /// Count additivity: merged counts, derived sets recomputed.
  void merge(const Vocabulary& other) {
    for (const auto& [t, n] : other.counts_) counts_[t] += n;
    finalize();
  }

  uint64_t count(std::string_view t) const {
    auto it = counts_.find(std::string(t));
    return it == counts_.end() ? 0 : it->second;
  }

  bool in_base(std::string_view t) const { return base_lookup_.count(std::string(t)) != 0; }
  bool is_realword(std::string_view t) const { return realword_lookup_.count(std::string(t)) != 0; }

  const std::unordered_map<std::string, uint64_t>& counts() const { return counts_; }
  const std::vector<std::string>& base_set() const { return base_; }
  const std::vector<std::string>& realword_set() const { return realword_; }
  uint64_t total_tokens() const { return total_; }
  std::size_t hapax_count() const { return hapax_; }
  uint64_t fingerprint() const { return fingerprint_; }

  std::vector<std::string> hapax_set() const {
    std::vector<std::string> out;
    for (const auto& [t, n] : counts_)
      if (n == 1) out.push_back(t);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// "token<TAB>count" lines, sorted bytewise by token.
  void save(std::ostream& out) const {
    std::vector<std::pair<std::string_view, uint64_t>> rows(counts_.begin(), counts_.end());
    std::sort(rows.begin(), rows.end());
    for (const auto& [t, n] : rows) out << t << '\t' << n << '\n';
  }

  static Vocabulary load(std::istream& in) {
    std::unordered_map<std::string, uint64_t> counts;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const auto tab = line.rfind('\t');
      if (tab == std::string::npos || tab == 0) throw ParseError(lineno, "expected token<TAB>count");
      uint64_t n = 0;
      try {
        std::size_t used = 0;
        n = std::stoull(line.substr(tab + 1), &used);
        if (used != line.size() - tab - 1) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ParseError(lineno, "bad count");
      }
      counts[line.substr(0, tab)] += n;
    }
    return from_counts(std::move(counts));
  }

 private:
  std::unordered_map<std::string, uint64_t> counts_;
  std::vector<std::string> base_;
  std::vector<std::string> realword_;
  std::unordered_set<std::string> base_lookup_;
  std::unordered_set<std::string> realword_lookup_;
  uint64_t total_ = 0;
  std::size_t hapax_ = 0;
  uint64_t fingerprint_ = 0;
};

/// Real-word subset of an arbitrary token set.
inline std::vector<std::string> derive_realword_vocab(const std::vector<std::string>& base) {
  std::vector<std::string> out;
  for (const auto& t : base)
    if (is_realword_form(t)) out.push_back(t);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline VocabStats vocab_stats(const Vocabulary& v) {
  VocabStats s;
  s.type_count = v.counts().size();
  s.hapax_count = v.hapax_count();
  s.token_count = v.total_tokens();
  s.hapax_pct = s.type_count == 0 ? 0.0 : static_cast<double>(s.hapax_count) / static_cast<double>(s.type_count);
  return s;
}

}  // namespace rwspell
