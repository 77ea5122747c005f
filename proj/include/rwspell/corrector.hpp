#pragma once

// Noisy-channel real-word corrector.
//
// Hidden states are pairs (previous intended word, intended word), so a
// transition (a,b) -> (b,c) is scored by the trigram P(c | a b) plus the
// emission of the observed token from c. After each position only the t
// best states survive. Ties (exact score equality) are broken towards the
// lexicographically smaller (word, prev_word).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "rwspell/confusion.hpp"
#include "rwspell/corpus_io.hpp"
#include "rwspell/error.hpp"
#include "rwspell/lm.hpp"
#include "rwspell/vocab.hpp"

namespace rwspell {

struct ChannelParams {
  double beta = 0.995;  // P(observed == intended)

  void validate() const {
    if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("beta must be in (0, 1]");
  }
};

struct DecoderConfig {
  static constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();
  std::size_t beam = 3;

  void validate() const {
    if (beam == 0) throw ConfigError("beam width must be >= 1");
  }
};

inline constexpr double kStructuralZero = -std::numeric_limits<double>::infinity();

/// {w} plus its variations for real words; anything else is only ever
/// itself.
inline std::vector<std::string> candidate_intended(const std::string& w, const ConfusionIndex& ci) {
  std::vector<std::string> out{w};
  if (ci.contains(w)) {
    for (auto id : ci.neighborhood_ids(w)) out.push_back(ci.word(id));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::string> candidate_intended(const std::string& w, const ConfusionIndex& ci,
                                                   const Vocabulary& v) {
  if (!v.is_realword(w)) return {w};
  return candidate_intended(w, ci);
}

/// log10 P(observed | intended). Unreachable pairs, and every substitution
/// when beta == 1, return kStructuralZero.
inline double emission_logprob(const std::string& intended, const std::string& observed, const ConfusionIndex& ci,
                               const ChannelParams& cp) {
  if (intended == observed) return std::log10(cp.beta);
  const auto& nb = ci.neighborhood_ids(intended);
  if (nb.empty() || cp.beta >= 1.0) return kStructuralZero;
  const bool reachable =
      std::any_of(nb.begin(), nb.end(), [&](uint32_t id) { return ci.word(id) == observed; });
  if (!reachable) return kStructuralZero;
  return std::log10((1.0 - cp.beta) / static_cast<double>(nb.size()));
}

struct Correction {
  TokenSeq words;
  double score = 0.0;  // log10 of LM path probability times emissions
};

class Decoder {
 public:
  Decoder(const TrigramModel& model, const ConfusionIndex& index, ChannelParams cp, DecoderConfig dc)
      : model_(model), index_(index), cp_(cp), dc_(dc) {
    cp_.validate();
    dc_.validate();
  }

  const ChannelParams& channel() const { return cp_; }
  const DecoderConfig& config() const { return dc_; }

  Correction correct(const TokenSeq& observed) const {
    if (observed.empty()) throw EmptyInputError("cannot decode an empty sentence");
    const std::size_t n = observed.size();

    // Candidates are the observed word and, for real words, its
    // variations; distance 1 is symmetric, so every variation reaches the
    // observed word and its emission only depends on |Var(variation)|.
    const double keep = std::log10(cp_.beta);
    std::vector<std::vector<Candidate>> cands(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto& out = cands[i];
      out.push_back({observed[i], model_.id(observed[i]), keep});
      const uint32_t obs = index_.id(observed[i]);
      if (obs != UINT32_MAX && cp_.beta < 1.0) {
        for (uint32_t v : index_.neighborhood(obs)) {
          const auto& w = index_.word(v);
          const double em =
              std::log10((1.0 - cp_.beta) / static_cast<double>(index_.neighborhood(v).size()));
          out.push_back({w, model_.id(w), em});
        }
      }
      std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) { return a.word < b.word; });
    }

    // lattice[i]: surviving states at position i
    std::vector<std::vector<State>> lattice(n);
    for (uint32_t c = 0; c < cands[0].size(); ++c) {
      const double s = model_.logprob(TrigramModel::kBos, TrigramModel::kBos, cands[0][c].id) + cands[0][c].emission;
      lattice[0].push_back({kNone, c, s, kNone});
    }
    prune(lattice[0]);

    for (std::size_t i = 1; i < n; ++i) {
      const auto& prev_states = lattice[i - 1];
      const auto& cur = cands[i];
      const auto& prv = cands[i - 1];
      const std::size_t width = cur.size();
      // best state per (prev candidate, current candidate)
      std::vector<State> best(prv.size() * width, State{kNone, kNone, kStructuralZero, kNone});
      for (uint32_t p = 0; p < prev_states.size(); ++p) {
        const State& ps = prev_states[p];
        const WordId a = ps.prev == kNone ? TrigramModel::kBos : cands[i - 2][ps.prev].id;
        const WordId b = prv[ps.cand].id;
        for (uint32_t c = 0; c < width; ++c) {
          const double s = ps.score + model_.logprob(a, b, cur[c].id) + cur[c].emission;
          State& slot = best[ps.cand * width + c];
          if (slot.back == kNone || s > slot.score ||
              (s == slot.score && state_less(ps, prev_states[slot.back]))) {
            slot = {ps.cand, c, s, p};
          }
        }
      }
      for (auto& st : best)
        if (st.back != kNone) lattice[i].push_back(st);
      prune(lattice[i]);
    }

    // end-of-sentence term
    const auto& last = lattice[n - 1];
    std::size_t best_idx = 0;
    double best_score = kStructuralZero;
    for (std::size_t k = 0; k < last.size(); ++k) {
      const State& st = last[k];
      const WordId a = st.prev == kNone ? TrigramModel::kBos : cands[n - 2][st.prev].id;
      const double s = st.score + model_.logprob(a, cands[n - 1][st.cand].id, TrigramModel::kEos);
      if (k == 0 || s > best_score || (s == best_score && state_less(st, last[best_idx]))) {
        best_score = s;
        best_idx = k;
      }
    }

    Correction out;
    out.score = best_score;
    out.words.resize(n);
    std::size_t k = best_idx;
    for (std::size_t i = n; i-- > 0;) {
      const State& st = lattice[i][k];
      out.words[i] = cands[i][st.cand].word;
      k = st.back;
    }
    return out;
  }

 private:
  static constexpr uint32_t kNone = UINT32_MAX;

  struct Candidate {
    std::string word;
    WordId id;
    double emission;
  };

  struct State {
    uint32_t prev;  // candidate index at i-1, kNone for <s>
    uint32_t cand;  // candidate index at i
    double score;
    uint32_t back;  // index into lattice[i-1]
  };

  // Candidate indices follow lexicographic word order, so comparing
  // (cand, prev) indices compares (word, prev_word).
  static bool state_less(const State& x, const State& y) {
    if (x.cand != y.cand) return x.cand < y.cand;
    if (x.prev == y.prev) return false;
    if (x.prev == kNone) return true;
    if (y.prev == kNone) return false;
    return x.prev < y.prev;
  }

  void prune(std::vector<State>& states) const {
    if (states.size() <= 1) return;
    auto better = [](const State& x, const State& y) {
      if (x.score != y.score) return x.score > y.score;
      return state_less(x, y);
    };
    if (dc_.beam < states.size()) {
      std::partial_sort(states.begin(), states.begin() + static_cast<std::ptrdiff_t>(dc_.beam), states.end(), better);
      states.resize(dc_.beam);
    } else {
      std::sort(states.begin(), states.end(), better);
    }
  }

  const TrigramModel& model_;
  const ConfusionIndex& index_;
  ChannelParams cp_;
  DecoderConfig dc_;
};

inline Correction viterbi_correct(const TokenSeq& s, const TrigramModel& m, const ConfusionIndex& ci,
                                  const ChannelParams& cp, const DecoderConfig& dc) {
  return Decoder(m, ci, cp, dc).correct(s);
}

struct Change {
  std::size_t sentence_id = 0;
  std::size_t position = 0;
  std::string observed;
  std::string proposed;

  bool operator==(const Change&) const = default;
};

struct CorpusCorrection {
  Corpus corrected;
  std::vector<Change> changes;
};

/// Decodes every sentence independently. `threads` > 1 splits the corpus
/// into interleaved shards; the output does not depend on it.
inline CorpusCorrection correct_corpus(const Corpus& sentences, const TrigramModel& m, const ConfusionIndex& ci,
                                       const ChannelParams& cp, const DecoderConfig& dc, unsigned threads = 1) {
  if (ci.vocabulary_fingerprint() != 0 && ci.vocabulary_fingerprint() != m.vocabulary_fingerprint())
    throw ConfigError("language model and confusion index were built from different vocabularies");
  const Decoder dec(m, ci, cp, dc);
  CorpusCorrection out;
  out.corrected.resize(sentences.size());
  auto work = [&](std::size_t shard, std::size_t stride) {
    for (std::size_t s = shard; s < sentences.size(); s += stride)
      out.corrected[s] = sentences[s].empty() ? TokenSeq{} : dec.correct(sentences[s]).words;
  };
  threads = std::max(1u, threads);
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }
  for (std::size_t s = 0; s < sentences.size(); ++s)
    for (std::size_t i = 0; i < sentences[s].size(); ++i)
      if (out.corrected[s][i] != sentences[s][i]) out.changes.push_back({s, i, sentences[s][i], out.corrected[s][i]});
  return out;
}

/// "sentence_id<TAB>position<TAB>observed<TAB>proposed"
inline void write_changes(std::ostream& out, const std::vector<Change>& changes) {
  for (const auto& c : changes) out << c.sentence_id << '\t' << c.position << '\t' << c.observed << '\t' << c.proposed << '\n';
}

}  // namespace rwspell
