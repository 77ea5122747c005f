#pragma once

// Backoff trigram model with modified Kneser-Ney discounting.
//
// Sentences are padded "<s> <s> w1 .. wn </s>". Tokens outside the base
// vocabulary are counted as <unk>. The highest order uses raw counts;
// lower orders use continuation counts (number of distinct left
// extensions), except n-grams starting with <s>, which keep raw counts.
// Each context keeps its discounted mass for the next lower order through
// a backoff weight; the unigram distribution hands its discounted mass out
// uniformly over the whole vocabulary, so <unk> is never zero.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rwspell/corpus_io.hpp"
#include "rwspell/error.hpp"
#include "rwspell/vocab.hpp"

namespace rwspell {

using WordId = uint32_t;

inline constexpr double kLogZero = -99.0;

inline double to_log10(double p) { return p > 0.0 ? std::max(kLogZero, std::log10(p)) : kLogZero; }

struct KnDiscount {
  std::array<double, 3> d{0.5, 0.5, 0.5};  // D1, D2, D3+
  bool fallback = true;

  double operator()(uint64_t count) const {
    if (count == 0) return 0.0;
    const double dd = d[std::min<uint64_t>(count, 3) - 1];
    return std::min(dd, static_cast<double>(count));
  }
};

/// Modified KN discounts from counts-of-counts n1..n4. Falls back to a
/// single absolute discount of 0.5 when any n_i is zero or a discount
/// comes out non-positive.
inline KnDiscount kn_discount(const std::array<uint64_t, 4>& n) {
  KnDiscount k;
  if (n[0] == 0 || n[1] == 0 || n[2] == 0 || n[3] == 0) return k;
  const double n1 = static_cast<double>(n[0]), n2 = static_cast<double>(n[1]);
  const double n3 = static_cast<double>(n[2]), n4 = static_cast<double>(n[3]);
  const double y = n1 / (n1 + 2.0 * n2);
  const std::array<double, 3> d{1.0 - 2.0 * y * n2 / n1, 2.0 - 3.0 * y * n3 / n2, 3.0 - 4.0 * y * n4 / n3};
  if (d[0] <= 0.0 || d[1] <= 0.0 || d[2] <= 0.0) return k;
  k.d = d;
  k.fallback = false;
  return k;
}

class TrigramModel {
 public:
  static constexpr int kOrder = 3;
  static constexpr WordId kBos = 0;
  static constexpr WordId kEos = 1;
  static constexpr WordId kUnk = 2;

  struct Entry {
    double prob = kLogZero;  // log10
    double bow = 0.0;        // log10
  };

  TrigramModel() { reset_vocab({}); }

  // --- queries --------------------------------------------------------

  /// Id of a token; anything outside the model vocabulary maps to <unk>.
  WordId id(std::string_view w) const {
    auto it = ids_.find(std::string(w));
    return it == ids_.end() ? kUnk : it->second;
  }

  bool contains(std::string_view w) const { return ids_.count(std::string(w)) != 0; }
  const std::string& word(WordId id) const { return words_.at(id); }
  std::size_t vocab_size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }

  /// log10 P(w | h1 h2) following the backoff chain.
  double logprob(WordId h1, WordId h2, WordId w) const {
    if (auto it = tri_.find(key3(h1, h2, w)); it != tri_.end()) return it->second;
    double bo = 0.0;
    if (auto it = bi_.find(key2(h1, h2)); it != bi_.end()) bo += it->second.bow;
    if (auto it = bi_.find(key2(h2, w)); it != bi_.end()) return bo + it->second.prob;
    return bo + uni_[h2].bow + uni_[w].prob;
  }

  double logprob_word(std::string_view h1, std::string_view h2, std::string_view w) const {
    return logprob(id(h1), id(h2), id(w));
  }

  /// log10 probability of a sentence including the end-marker term.
  double logprob_sentence(const TokenSeq& s) const {
    WordId a = kBos, b = kBos;
    double total = 0.0;
    for (const auto& t : s) {
      const WordId c = id(t);
      total += logprob(a, b, c);
      a = b;
      b = c;
    }
    return total + logprob(a, b, kEos);
  }

  // --- raw tables -------------------------------------------------------

  std::size_t ngram_count(int order) const {
    switch (order) {
      case 1: return uni_.size();
      case 2: return bi_.size();
      case 3: return tri_.size();
      default: return 0;
    }
  }

  const Entry& unigram(WordId w) const { return uni_.at(w); }
  const Entry* bigram(WordId a, WordId b) const {
    auto it = bi_.find(key2(a, b));
    return it == bi_.end() ? nullptr : &it->second;
  }
  const double* trigram(WordId a, WordId b, WordId c) const {
    auto it = tri_.find(key3(a, b, c));
    return it == tri_.end() ? nullptr : &it->second;
  }
  /// Drops a stored trigram and refits the backoff weight of its context
  /// so the context stays normalized.
  bool erase_trigram(WordId a, WordId b, WordId c) {
    if (tri_.erase(key3(a, b, c)) == 0) return false;
    auto lower = [&](WordId w) {
      if (auto it = bi_.find(key2(b, w)); it != bi_.end()) return it->second.prob;
      return uni_[b].bow + uni_[w].prob;
    };
    double sum_p = 0.0, sum_lower = 0.0;
    for (WordId w = 0; w < words_.size(); ++w)
      if (auto it = tri_.find(key3(a, b, w)); it != tri_.end()) {
        sum_p += std::pow(10.0, it->second);
        sum_lower += std::pow(10.0, lower(w));
      }
    bi_[key2(a, b)].bow = to_log10((1.0 - sum_p) / (1.0 - sum_lower));
    return true;
  }

  /// Identity of the base vocabulary the model was trained on.
  uint64_t vocabulary_fingerprint() const {
    std::vector<std::string> base;
    for (const auto& w : words_)
      if (!is_reserved(w)) base.push_back(w);
    std::sort(base.begin(), base.end());
    return rwspell::vocabulary_fingerprint(base);
  }

  const std::array<KnDiscount, 3>& discounts() const { return discounts_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  // --- training ---------------------------------------------------------

  static TrigramModel train(const Corpus& corpus, const Vocabulary& vocab);

  // --- ARPA -------------------------------------------------------------

  void export_arpa(std::ostream& out) const;
  static TrigramModel import_arpa(std::istream& in);

  std::string to_arpa() const {
    std::ostringstream os;
    export_arpa(os);
    return os.str();
  }

 private:
  static constexpr unsigned kIdBits = 21;
  static constexpr uint64_t kIdMask = (uint64_t{1} << kIdBits) - 1;

  static uint64_t key2(WordId a, WordId b) { return (uint64_t{a} << kIdBits) | b; }
  static uint64_t key3(WordId a, WordId b, WordId c) {
    return (uint64_t{a} << (2 * kIdBits)) | (uint64_t{b} << kIdBits) | c;
  }

  void reset_vocab(const std::vector<std::string>& base_words) {
    words_ = {std::string(kBeginMarker), std::string(kEndMarker), std::string(kUnknownMarker)};
    for (const auto& w : base_words)
      if (!is_reserved(w)) words_.push_back(w);
    if (words_.size() > kIdMask) throw Error("vocabulary too large for trigram key packing");
    ids_.clear();
    for (WordId i = 0; i < words_.size(); ++i) ids_.emplace(words_[i], i);
    uni_.assign(words_.size(), Entry{});
    bi_.clear();
    tri_.clear();
  }

  std::string ngram_text(std::initializer_list<WordId> ids) const {
    std::string s;
    for (auto id : ids) {
      if (!s.empty()) s += ' ';
      s += words_[id];
    }
    return s;
  }

  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> ids_;
  std::vector<Entry> uni_;
  std::unordered_map<uint64_t, Entry> bi_;
  std::unordered_map<uint64_t, double> tri_;
  std::array<KnDiscount, 3> discounts_{};
  std::vector<std::string> warnings_;
};

namespace detail {

template <class Map>
std::array<uint64_t, 4> counts_of_counts(const Map& m) {
  std::array<uint64_t, 4> n{};
  for (const auto& [k, c] : m)
    if (c >= 1 && c <= 4) ++n[c - 1];
  return n;
}

inline std::string format_logprob(double v) {
  if (v == 0.0) v = 0.0;  // no negative zero
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

}  // namespace detail

inline TrigramModel TrigramModel::train(const Corpus& corpus, const Vocabulary& vocab) {
  if (token_count(corpus) == 0) throw EmptyInputError("empty training corpus");
  TrigramModel m;
  m.reset_vocab(vocab.base_set());
  const WordId V = static_cast<WordId>(m.words_.size());

  // raw trigram counts over padded sentences
  std::unordered_map<uint64_t, uint64_t> c3;
  for (const auto& s : corpus) {
    WordId a = kBos, b = kBos;
    for (std::size_t i = 0; i <= s.size(); ++i) {
      const WordId c = i < s.size() ? m.id(s[i]) : kEos;
      ++c3[key3(a, b, c)];
      a = b;
      b = c;
    }
  }

  // lower-order counts: continuation counts, raw after <s>
  std::unordered_map<uint64_t, uint64_t> a2;
  for (const auto& [k, c] : c3) {
    const WordId v = static_cast<WordId>((k >> kIdBits) & kIdMask);
    const WordId w = static_cast<WordId>(k & kIdMask);
    a2[key2(v, w)] += v == kBos ? c : 1;
  }
  std::vector<uint64_t> a1(V, 0);
  for (const auto& [k, c] : a2) ++a1[k & kIdMask];

  std::unordered_map<WordId, uint64_t> a1_nonzero;
  for (WordId w = 0; w < V; ++w)
    if (a1[w] > 0) a1_nonzero.emplace(w, a1[w]);

  m.discounts_[0] = kn_discount(detail::counts_of_counts(a1_nonzero));
  m.discounts_[1] = kn_discount(detail::counts_of_counts(a2));
  m.discounts_[2] = kn_discount(detail::counts_of_counts(c3));
  for (int o = 0; o < 3; ++o)
    if (m.discounts_[o].fallback)
      m.warnings_.push_back("order " + std::to_string(o + 1) +
                            ": counts-of-counts too sparse for modified KN, using absolute discount 0.5");

  // unigrams: discounted continuation counts plus a uniform share of the
  // discounted mass for every predictable word (all but <s>)
  std::vector<double> p1(V, 0.0);
  {
    double total = 0.0;
    for (WordId w = 1; w < V; ++w) total += static_cast<double>(a1[w]);
    double leftover = 0.0;
    for (WordId w = 1; w < V; ++w) {
      const double d = m.discounts_[0](a1[w]);
      p1[w] = (static_cast<double>(a1[w]) - d) / total;
      leftover += d / total;
    }
    const double share = leftover / static_cast<double>(V - 1);
    for (WordId w = 1; w < V; ++w) p1[w] += share;
  }
  for (WordId w = 0; w < V; ++w) m.uni_[w].prob = w == kBos ? kLogZero : to_log10(p1[w]);

  // groups sorted by context, then predicted word
  auto grouped = [](const std::unordered_map<uint64_t, uint64_t>& src) {
    std::vector<std::pair<uint64_t, uint64_t>> v(src.begin(), src.end());
    std::sort(v.begin(), v.end());
    return v;
  };

  // bigrams
  std::vector<double> bow1(V, 1.0);
  std::unordered_map<uint64_t, double> p2;
  p2.reserve(a2.size());
  {
    const auto rows = grouped(a2);
    for (std::size_t i = 0; i < rows.size();) {
      const uint64_t ctx = rows[i].first >> kIdBits;
      std::size_t j = i;
      double total = 0.0;
      while (j < rows.size() && (rows[j].first >> kIdBits) == ctx) total += static_cast<double>(rows[j++].second);
      double sum_p = 0.0, sum_lower = 0.0;
      for (std::size_t k = i; k < j; ++k) {
        const double p = (static_cast<double>(rows[k].second) - m.discounts_[1](rows[k].second)) / total;
        p2[rows[k].first] = p;
        sum_p += p;
        sum_lower += p1[rows[k].first & kIdMask];
      }
      double bow = 1.0;
      if (1.0 - sum_lower > 1e-12) {
        bow = (1.0 - sum_p) / (1.0 - sum_lower);
      } else {
        for (std::size_t k = i; k < j; ++k) p2[rows[k].first] /= sum_p;
      }
      bow1[ctx] = bow;
      i = j;
    }
  }
  for (WordId w = 0; w < V; ++w) m.uni_[w].bow = to_log10(bow1[w]);

  auto p2_backoff = [&](WordId v, WordId w) {
    auto it = p2.find(key2(v, w));
    return it != p2.end() ? it->second : bow1[v] * p1[w];
  };

  // trigrams; the (<s>,<s>) context gets a placeholder bigram to carry its weight
  std::unordered_map<uint64_t, double> bow2;
  {
    const auto rows = grouped(c3);
    for (std::size_t i = 0; i < rows.size();) {
      const uint64_t ctx = rows[i].first >> kIdBits;
      const WordId v = static_cast<WordId>(ctx & kIdMask);
      std::size_t j = i;
      double total = 0.0;
      while (j < rows.size() && (rows[j].first >> kIdBits) == ctx) total += static_cast<double>(rows[j++].second);
      double sum_p = 0.0, sum_lower = 0.0;
      std::vector<double> probs;
      probs.reserve(j - i);
      for (std::size_t k = i; k < j; ++k) {
        const double p = (static_cast<double>(rows[k].second) - m.discounts_[2](rows[k].second)) / total;
        probs.push_back(p);
        sum_p += p;
        sum_lower += p2_backoff(v, static_cast<WordId>(rows[k].first & kIdMask));
      }
      double bow = 1.0;
      if (1.0 - sum_lower > 1e-12) {
        bow = (1.0 - sum_p) / (1.0 - sum_lower);
      } else {
        for (auto& p : probs) p /= sum_p;
      }
      for (std::size_t k = i; k < j; ++k) m.tri_.emplace(rows[k].first, to_log10(probs[k - i]));
      bow2[ctx] = bow;
      i = j;
    }
  }

  m.bi_.reserve(p2.size() + 1);
  for (const auto& [k, p] : p2) m.bi_[k].prob = to_log10(p);
  m.bi_[key2(kBos, kBos)].prob = kLogZero;
  for (const auto& [ctx, bow] : bow2) m.bi_[ctx].bow = to_log10(bow);
  return m;
}

inline void TrigramModel::export_arpa(std::ostream& out) const {
  struct Row {
    std::string text;
    std::string line;
  };
  auto sorted = [](std::vector<Row>& rows) {
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.text < b.text; });
  };

  std::vector<Row> r1, r2, r3;
  r1.reserve(uni_.size());
  for (WordId w = 0; w < uni_.size(); ++w) {
    const auto text = words_[w];
    r1.push_back({text, detail::format_logprob(uni_[w].prob) + '\t' + text + '\t' +
                            detail::format_logprob(uni_[w].bow)});
  }
  r2.reserve(bi_.size());
  for (const auto& [k, e] : bi_) {
    const auto text = ngram_text({static_cast<WordId>(k >> kIdBits), static_cast<WordId>(k & kIdMask)});
    r2.push_back({text, detail::format_logprob(e.prob) + '\t' + text + '\t' + detail::format_logprob(e.bow)});
  }
  r3.reserve(tri_.size());
  for (const auto& [k, p] : tri_) {
    const auto text = ngram_text({static_cast<WordId>(k >> (2 * kIdBits)),
                                  static_cast<WordId>((k >> kIdBits) & kIdMask), static_cast<WordId>(k & kIdMask)});
    r3.push_back({text, detail::format_logprob(p) + '\t' + text});
  }
  sorted(r1);
  sorted(r2);
  sorted(r3);

  out << "\n\\data\\\n";
  out << "ngram 1=" << r1.size() << '\n';
  out << "ngram 2=" << r2.size() << '\n';
  out << "ngram 3=" << r3.size() << '\n';
  const std::vector<Row>* sections[] = {&r1, &r2, &r3};
  for (int o = 0; o < 3; ++o) {
    out << "\n\\" << (o + 1) << "-grams:\n";
    for (const auto& row : *sections[o]) out << row.line << '\n';
  }
  out << "\n\\end\\\n";
}

inline TrigramModel TrigramModel::import_arpa(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };
  auto blank = [&] { return line.find_first_not_of(" \t") == std::string::npos; };

  while (next_line() && blank()) {
  }
  if (line != "\\data\\") throw ParseError(lineno, "expected \\data\\ header");

  std::array<std::size_t, 3> declared{};
  std::array<std::size_t, 3> declared_at{};
  std::array<bool, 3> seen{};
  while (next_line()) {
    if (blank()) continue;
    if (line.rfind("ngram ", 0) != 0) break;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "malformed ngram count line");
    int order = 0;
    std::size_t count = 0;
    try {
      order = std::stoi(line.substr(6, eq - 6));
      count = std::stoull(line.substr(eq + 1));
    } catch (const std::exception&) {
      throw ParseError(lineno, "malformed ngram count line");
    }
    if (order < 1 || order > 3) throw ParseError(lineno, "unsupported n-gram order " + std::to_string(order));
    declared[order - 1] = count;
    declared_at[order - 1] = lineno;
    seen[order - 1] = true;
  }
  if (!seen[0]) throw ParseError(lineno, "missing ngram 1 count");

  struct RawRow {
    double prob;
    std::vector<std::string> words;
    double bow;
    std::size_t line;
  };
  std::array<std::vector<RawRow>, 3> rows;

  int order = 0;
  bool ended = false;
  do {
    if (blank()) continue;
    if (line == "\\end\\") {
      ended = true;
      break;
    }
    if (line.size() > 1 && line[0] == '\\') {
      const auto dash = line.find("-grams:");
      int o = 0;
      try {
        o = std::stoi(line.substr(1, dash == std::string::npos ? 0 : dash - 1));
      } catch (const std::exception&) {
        o = 0;
      }
      if (dash == std::string::npos || o < 1 || o > 3 || dash + 7 != line.size())
        throw ParseError(lineno, "malformed section header: " + line);
      if (o != order + 1) throw ParseError(lineno, "n-gram sections out of order");
      order = o;
      continue;
    }
    if (order == 0) throw ParseError(lineno, "n-gram entry outside a section");
    std::vector<std::string> fields;
    {
      std::size_t pos = 0;
      while (pos <= line.size()) {
        const auto tab = line.find('\t', pos);
        fields.push_back(line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos));
        if (tab == std::string::npos) break;
        pos = tab + 1;
      }
    }
    RawRow row{0.0, {}, 0.0, lineno};
    if (fields.size() == 1) {
      // whitespace separated fallback
      auto toks = split_tokens(line);
      if (toks.size() < static_cast<std::size_t>(order) + 1) throw ParseError(lineno, "malformed n-gram entry");
      fields.assign(1, toks[0]);
      std::string ng;
      for (int k = 0; k < order; ++k) ng += (k ? " " : "") + toks[1 + k];
      fields.push_back(ng);
      if (toks.size() > static_cast<std::size_t>(order) + 1) fields.push_back(toks[order + 1]);
    }
    if (fields.size() < 2 || fields.size() > 3) throw ParseError(lineno, "malformed n-gram entry");
    try {
      row.prob = std::stod(fields[0]);
      if (fields.size() == 3) row.bow = std::stod(fields[2]);
    } catch (const std::exception&) {
      throw ParseError(lineno, "bad number in n-gram entry");
    }
    row.words = split_tokens(fields[1]);
    if (row.words.size() != static_cast<std::size_t>(order))
      throw ParseError(lineno, "n-gram length does not match section order");
    rows[order - 1].push_back(std::move(row));
  } while (next_line());
  if (!ended) throw ParseError(lineno, "missing \\end\\ marker");

  for (int o = 0; o < 3; ++o) {
    if (seen[o] && rows[o].size() != declared[o])
      throw ParseError(declared_at[o], "declared ngram " + std::to_string(o + 1) + "=" + std::to_string(declared[o]) +
                                   " but found " + std::to_string(rows[o].size()));
  }

  std::vector<std::string> base;
  for (const auto& r : rows[0])
    if (!is_reserved(r.words[0])) base.push_back(r.words[0]);
  std::sort(base.begin(), base.end());
  if (std::adjacent_find(base.begin(), base.end()) != base.end())
    throw ParseError(lineno, "duplicate unigram entry");

  TrigramModel m;
  m.reset_vocab(base);
  for (auto& e : m.uni_) e = Entry{kLogZero, 0.0};
  for (const auto& r : rows[0]) m.uni_[m.ids_.at(r.words[0])] = Entry{r.prob, r.bow};

  auto lookup = [&](const std::string& w, std::size_t ln) {
    auto it = m.ids_.find(w);
    if (it == m.ids_.end()) throw ParseError(ln, "word not in unigram section: " + w);
    return it->second;
  };
  for (const auto& r : rows[1])
    m.bi_[key2(lookup(r.words[0], r.line), lookup(r.words[1], r.line))] = Entry{r.prob, r.bow};
  for (const auto& r : rows[2])
    m.tri_[key3(lookup(r.words[0], r.line), lookup(r.words[1], r.line), lookup(r.words[2], r.line))] = r.prob;
  return m;
}

}  // namespace rwspell
