#pragma once

// Synthetic real-word error corpus.
//
// Stream discipline (std::mt19937_64 seeded with cfg.seed):
//   * one draw per token; the token is considered iff draw % r == 0
//   * one more draw per replacement; the variation index is draw % |Var|
// Considered tokens that are not eligible consume no second draw.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "rwspell/confusion.hpp"
#include "rwspell/corpus_io.hpp"
#include "rwspell/error.hpp"
#include "rwspell/vocab.hpp"

namespace rwspell {

struct CorruptionConfig {
  uint64_t rate_denominator = 200;
  uint64_t seed = 1;

  double alpha() const { return 1.0 - 1.0 / static_cast<double>(rate_denominator); }
};

struct CorruptionRecord {
  std::size_t sentence_id = 0;
  std::size_t position = 0;
  std::string original;
  std::string error;

  bool operator==(const CorruptionRecord&) const = default;
};

struct CorruptionResult {
  Corpus corrupted;
  std::vector<CorruptionRecord> records;
  std::size_t considered = 0;
  std::size_t eligible_tokens = 0;  // eligible tokens seen, considered or not
};

inline bool corruption_eligible(const std::string& token, const Vocabulary& v, const ConfusionIndex& ci) {
  return v.is_realword(token) && !ci.neighborhood_ids(token).empty();
}

inline CorruptionResult corrupt_corpus(const Corpus& sentences, const Vocabulary& v, const ConfusionIndex& ci,
                                       const CorruptionConfig& cfg) {
  if (cfg.rate_denominator == 0) throw ConfigError("rate denominator must be >= 1");
  CorruptionResult res;
  res.corrupted = sentences;
  std::mt19937_64 rng(cfg.seed);
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    for (std::size_t i = 0; i < sentences[s].size(); ++i) {
      const auto& tok = sentences[s][i];
      const bool eligible = corruption_eligible(tok, v, ci);
      if (eligible) ++res.eligible_tokens;
      if (rng() % cfg.rate_denominator != 0) continue;
      ++res.considered;
      if (!eligible) continue;
      const auto& nb = ci.neighborhood_ids(tok);
      const auto& replacement = ci.word(nb[rng() % nb.size()]);
      res.corrupted[s][i] = replacement;
      res.records.push_back({s, i, tok, replacement});
    }
  }
  return res;
}

struct MultiErrorCensus {
  std::size_t sentences_total = 0;
  std::size_t sentences_with_errors = 0;
  std::size_t sentences_with_multiple_errors = 0;
};

inline MultiErrorCensus multi_error_census(const std::vector<CorruptionRecord>& records, const Corpus& sentences) {
  std::map<std::size_t, std::size_t> per_sentence;
  for (const auto& r : records) ++per_sentence[r.sentence_id];
  MultiErrorCensus c;
  c.sentences_total = sentences.size();
  c.sentences_with_errors = per_sentence.size();
  for (const auto& [id, n] : per_sentence)
    if (n > 1) ++c.sentences_with_multiple_errors;
  return c;
}

/// "sentence_id<TAB>position<TAB>original<TAB>error"
inline void write_records(std::ostream& out, const std::vector<CorruptionRecord>& records) {
  for (const auto& r : records)
    out << r.sentence_id << '\t' << r.position << '\t' << r.original << '\t' << r.error << '\n';
}

inline std::vector<CorruptionRecord> read_records(std::istream& in) {
  std::vector<CorruptionRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t pos = 0;
    while (true) {
      const auto tab = line.find('\t', pos);
      f.push_back(line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos));
      if (tab == std::string::npos) break;
      pos = tab + 1;
    }
    if (f.size() != 4) throw ParseError(lineno, "expected 4 tab-separated fields");
    CorruptionRecord r;
    try {
      r.sentence_id = std::stoull(f[0]);
      r.position = std::stoull(f[1]);
    } catch (const std::exception&) {
      throw ParseError(lineno, "bad sentence id or position");
    }
    r.original = f[2];
    r.error = f[3];
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace rwspell
