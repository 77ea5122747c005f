#pragma once

// Damerau-Levenshtein (optimal string alignment) distance over Unicode
// scalar values, and the distance-1 neighborhoods of the real-word
// vocabulary.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rwspell/error.hpp"
#include "rwspell/unicode.hpp"
#include "rwspell/vocab.hpp"

namespace rwspell {

inline std::size_t dl_distance(std::u32string_view a, std::u32string_view b) {
  const std::size_t n = a.size(), m = b.size();
  if (n == 0) return m;
  if (m == 0) return n;
  // three rolling rows: i-2, i-1, i
  std::vector<std::size_t> r0(m + 1), r1(m + 1), r2(m + 1);
  for (std::size_t j = 0; j <= m; ++j) r1[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    r2[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      std::size_t v = std::min({r1[j] + 1, r2[j - 1] + 1, r1[j - 1] + cost});
      if (i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1]) v = std::min(v, r0[j - 2] + 1);
      r2[j] = v;
    }
    std::swap(r0, r1);
    std::swap(r1, r2);
  }
  return r1[m];
}

inline std::size_t dl_distance(std::string_view a, std::string_view b) {
  return dl_distance(std::u32string_view(unicode::decode(a)), std::u32string_view(unicode::decode(b)));
}

/// True iff the OSA distance is exactly 1, without filling a full table.
inline bool dl_distance_is_one(std::u32string_view a, std::u32string_view b) {
  if (a.size() > b.size()) std::swap(a, b);
  const std::size_t n = a.size(), m = b.size();
  if (m - n > 1) return false;
  std::size_t p = 0;
  while (p < n && a[p] == b[p]) ++p;
  if (n == m) {
    if (p == n) return false;  // identical
    if (a.substr(p + 1) == b.substr(p + 1)) return true;  // substitution
    return p + 1 < n && a[p] == b[p + 1] && a[p + 1] == b[p] && a.substr(p + 2) == b.substr(p + 2);
  }
  return a.substr(p) == b.substr(p + 1);  // b has one extra code point
}

/// Precomputed distance-1 neighborhoods over a real-word vocabulary.
/// Candidate pairs are found through shared single-deletion signatures
/// and then confirmed with an exact distance check.
class ConfusionIndex {
 public:
  ConfusionIndex() = default;

  static ConfusionIndex build(const Vocabulary& v) { return build(v.realword_set(), v.fingerprint()); }

  static ConfusionIndex build(std::vector<std::string> realwords, uint64_t fingerprint = 0) {
    ConfusionIndex ci;
    std::sort(realwords.begin(), realwords.end());
    realwords.erase(std::unique(realwords.begin(), realwords.end()), realwords.end());
    ci.fingerprint_ = fingerprint;
    ci.words_ = std::move(realwords);
    ci.decoded_.reserve(ci.words_.size());
    for (uint32_t i = 0; i < ci.words_.size(); ++i) {
      ci.ids_.emplace(ci.words_[i], i);
      ci.decoded_.push_back(unicode::decode(ci.words_[i]));
      for (auto& key : signatures(ci.decoded_.back())) ci.buckets_[std::move(key)].push_back(i);
    }
    ci.neighbors_.resize(ci.words_.size());
    for (uint32_t i = 0; i < ci.words_.size(); ++i) ci.neighbors_[i] = ci.scan(ci.decoded_[i], i);
    return ci;
  }

  /// Neighborhood of a vocabulary word (empty for non-members).
  const std::vector<uint32_t>& neighborhood_ids(std::string_view w) const {
    static const std::vector<uint32_t> kEmpty;
    auto it = ids_.find(std::string(w));
    return it == ids_.end() ? kEmpty : neighbors_[it->second];
  }

  const std::vector<uint32_t>& neighborhood(uint32_t id) const { return neighbors_.at(id); }

  /// Id of a vocabulary word, or UINT32_MAX.
  uint32_t id(std::string_view w) const {
    auto it = ids_.find(std::string(w));
    return it == ids_.end() ? UINT32_MAX : it->second;
  }

  /// Real words at distance 1 from `w`; `w` need not be in the vocabulary.
  std::vector<std::string> variations(std::string_view w) const {
    std::vector<uint32_t> ids;
    if (auto it = ids_.find(std::string(w)); it != ids_.end()) {
      ids = neighbors_[it->second];
    } else {
      ids = scan(unicode::decode(w), UINT32_MAX);
    }
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (auto id : ids) out.push_back(words_[id]);
    return out;
  }

  std::size_t variation_count(std::string_view w) const {
    if (auto it = ids_.find(std::string(w)); it != ids_.end()) return neighbors_[it->second].size();
    return scan(unicode::decode(w), UINT32_MAX).size();
  }

  bool contains(std::string_view w) const { return ids_.count(std::string(w)) != 0; }
  const std::vector<std::string>& words() const { return words_; }
  const std::string& word(uint32_t id) const { return words_.at(id); }
  uint64_t vocabulary_fingerprint() const { return fingerprint_; }

  /// "word<TAB>v1,v2,..." for every real word, sorted.
  void save(std::ostream& out) const {
    out << "#fingerprint\t" << fingerprint_ << '\n';
    for (uint32_t i = 0; i < words_.size(); ++i) {
      out << words_[i] << '\t';
      for (std::size_t k = 0; k < neighbors_[i].size(); ++k) out << (k ? "," : "") << words_[neighbors_[i][k]];
      out << '\n';
    }
  }

  /// Loads a saved index. Only the word column is trusted: neighborhoods
  /// are regenerated and must agree with the file.
  static ConfusionIndex load(std::istream& in) {
    std::vector<std::string> words;
    std::vector<std::pair<std::size_t, std::string>> lists;
    uint64_t fingerprint = 0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos) throw ParseError(lineno, "expected word<TAB>variations");
      if (line.compare(0, tab, "#fingerprint") == 0) {
        try {
          fingerprint = std::stoull(line.substr(tab + 1));
        } catch (const std::exception&) {
          throw ParseError(lineno, "bad fingerprint");
        }
        continue;
      }
      words.push_back(line.substr(0, tab));
      lists.emplace_back(lineno, line.substr(tab + 1));
    }
    auto ci = build(words, fingerprint);
    for (std::size_t k = 0; k < words.size(); ++k) {
      std::string expect;
      const auto& nb = ci.neighborhood_ids(words[k]);
      for (std::size_t j = 0; j < nb.size(); ++j) expect += (j ? "," : "") + ci.words_[nb[j]];
      if (expect != lists[k].second) throw ParseError(lists[k].first, "neighborhood of '" + words[k] + "' is stale");
    }
    return ci;
  }

 private:
  static std::vector<std::string> signatures(const std::u32string& w) {
    std::vector<std::string> keys;
    keys.reserve(w.size() + 1);
    keys.push_back(unicode::encode(w));
    for (std::size_t i = 0; i < w.size(); ++i) {
      std::u32string d = w;
      d.erase(i, 1);
      keys.push_back(unicode::encode(d));
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys;
  }

  std::vector<uint32_t> scan(const std::u32string& w, uint32_t self) const {
    std::vector<uint32_t> cand;
    for (const auto& key : signatures(w)) {
      auto it = buckets_.find(key);
      if (it == buckets_.end()) continue;
      cand.insert(cand.end(), it->second.begin(), it->second.end());
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    std::vector<uint32_t> out;
    for (auto id : cand)
      if (id != self && dl_distance_is_one(w, decoded_[id])) out.push_back(id);
    return out;  // ids are assigned in sorted word order
  }

  std::vector<std::string> words_;
  std::vector<std::u32string> decoded_;
  std::unordered_map<std::string, uint32_t> ids_;
  std::unordered_map<std::string, std::vector<uint32_t>> buckets_;
  std::vector<std::vector<uint32_t>> neighbors_;
  uint64_t fingerprint_ = 0;
};

}  // namespace rwspell
