#pragma once

// Token-level evaluation over aligned (original, observed, corrected)
// triples, and the original-vs-altered discrimination test.

#include <cstdint>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rwspell/corpus_io.hpp"
#include "rwspell/corruptor.hpp"
#include "rwspell/error.hpp"
#include "rwspell/lm.hpp"

namespace rwspell {

enum class Outcome { tn, fp, tp, fn, mc };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::tn: return "TN";
    case Outcome::fp: return "FP";
    case Outcome::tp: return "TP";
    case Outcome::fn: return "FN";
    case Outcome::mc: return "MC";
  }
  return "?";
}

/// (x,x,x) TN, (x,x,y) FP, (x,y,x) TP, (x,y,y) FN, (x,y,z) MC
inline Outcome classify_outcome(const std::string& original, const std::string& observed,
                                const std::string& corrected) {
  if (original == observed) return corrected == observed ? Outcome::tn : Outcome::fp;
  if (corrected == original) return Outcome::tp;
  if (corrected == observed) return Outcome::fn;
  return Outcome::mc;
}

struct OutcomeCounts {
  uint64_t tn = 0, fp = 0, tp = 0, fn = 0, mc = 0;

  void add(Outcome o) {
    switch (o) {
      case Outcome::tn: ++tn; break;
      case Outcome::fp: ++fp; break;
      case Outcome::tp: ++tp; break;
      case Outcome::fn: ++fn; break;
      case Outcome::mc: ++mc; break;
    }
  }

  uint64_t total() const { return tn + fp + tp + fn + mc; }

  OutcomeCounts& operator+=(const OutcomeCounts& o) {
    tn += o.tn;
    fp += o.fp;
    tp += o.tp;
    fn += o.fn;
    mc += o.mc;
    return *this;
  }

  bool operator==(const OutcomeCounts&) const = default;
};

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct RunParams {
  double beta = 0.0;
  std::size_t beam = 0;
  uint64_t rate = 0;
};

struct EvalReport {
  PRF detection;
  PRF correction;
  double accuracy = 0.0;
  OutcomeCounts counts;
  RunParams params;
};

inline double safe_ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

inline PRF make_prf(double p, double r) { return {p, r, p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r)}; }

/// Correction: P = TP/(TP+FP), R = TP/(TP+FN+MC).
/// Detection counts MC as a hit: P = (TP+MC)/(TP+MC+FP), R = (TP+MC)/(TP+MC+FN).
/// Accuracy = (TN+TP)/total. Undefined ratios are 0.
inline EvalReport compute_metrics(const OutcomeCounts& c, RunParams params = {}) {
  const double tn = static_cast<double>(c.tn), fp = static_cast<double>(c.fp), tp = static_cast<double>(c.tp);
  const double fn = static_cast<double>(c.fn), mc = static_cast<double>(c.mc);
  EvalReport r;
  r.counts = c;
  r.params = params;
  r.correction = make_prf(safe_ratio(tp, tp + fp), safe_ratio(tp, tp + fn + mc));
  r.detection = make_prf(safe_ratio(tp + mc, tp + mc + fp), safe_ratio(tp + mc, tp + mc + fn));
  r.accuracy = safe_ratio(tn + tp, static_cast<double>(c.total()));
  return r;
}

/// Classifies every token position. Sentence counts and lengths must match.
inline OutcomeCounts count_outcomes(const Corpus& original, const Corpus& observed, const Corpus& corrected) {
  if (original.size() != observed.size() || original.size() != corrected.size())
    throw AlignmentError(std::min({original.size(), observed.size(), corrected.size()}),
                         "corpora have different sentence counts");
  OutcomeCounts c;
  for (std::size_t s = 0; s < original.size(); ++s) {
    if (original[s].size() != observed[s].size() || original[s].size() != corrected[s].size())
      throw AlignmentError(s, "token counts differ between original, observed and corrected");
    for (std::size_t i = 0; i < original[s].size(); ++i)
      c.add(classify_outcome(original[s][i], observed[s][i], corrected[s][i]));
  }
  return c;
}

inline EvalReport evaluate_run(const Corpus& original, const Corpus& observed, const Corpus& corrected,
                               RunParams params = {}) {
  return compute_metrics(count_outcomes(original, observed, corrected), params);
}

/// Checks that the gold records describe exactly the differences between
/// the original and observed corpora.
inline void check_records(const Corpus& original, const Corpus& observed,
                          const std::vector<CorruptionRecord>& records) {
  if (original.size() != observed.size()) throw AlignmentError(0, "sentence counts differ");
  std::size_t diffs = 0;
  for (std::size_t s = 0; s < original.size(); ++s) {
    if (original[s].size() != observed[s].size()) throw AlignmentError(s, "token counts differ");
    for (std::size_t i = 0; i < original[s].size(); ++i) diffs += original[s][i] != observed[s][i];
  }
  for (const auto& r : records) {
    if (r.sentence_id >= original.size() || r.position >= original[r.sentence_id].size())
      throw AlignmentError(r.sentence_id, "record position out of range");
    if (original[r.sentence_id][r.position] != r.original || observed[r.sentence_id][r.position] != r.error)
      throw AlignmentError(r.sentence_id, "record does not match corpora at position " + std::to_string(r.position));
  }
  if (diffs != records.size()) throw AlignmentError(0, "records do not cover every altered token");
}

// --- discrimination ---------------------------------------------------------

enum class BotdChoice { original, altered, tie };

inline BotdChoice botd_discriminate(const TrigramModel& m, const TokenSeq& original, const TokenSeq& altered) {
  if (original == altered) throw Error("discrimination pair must differ");
  const double a = m.logprob_sentence(original);
  const double b = m.logprob_sentence(altered);
  if (a > b) return BotdChoice::original;
  if (b > a) return BotdChoice::altered;
  return BotdChoice::tie;
}

struct BotdPair {
  std::size_t sentence_id = 0;
  TokenSeq original;
  TokenSeq altered;
};

/// One pair per corrupted sentence, carrying all of its errors.
inline std::vector<BotdPair> botd_pairs(const Corpus& original, const std::vector<CorruptionRecord>& records) {
  std::map<std::size_t, TokenSeq> altered;
  for (const auto& r : records) {
    if (r.sentence_id >= original.size() || r.position >= original[r.sentence_id].size())
      throw AlignmentError(r.sentence_id, "record position out of range");
    auto it = altered.try_emplace(r.sentence_id, original[r.sentence_id]).first;
    it->second[r.position] = r.error;
  }
  std::vector<BotdPair> pairs;
  for (auto& [id, alt] : altered) pairs.push_back({id, original[id], std::move(alt)});
  return pairs;
}

struct BotdResult {
  std::size_t pairs = 0;
  std::size_t chose_original = 0;
  std::size_t chose_altered = 0;
  std::size_t ties = 0;
  double accuracy = 0.0;
};

/// Ties count as failures.
inline BotdResult botd_accuracy(const TrigramModel& m, const std::vector<BotdPair>& pairs) {
  if (pairs.empty()) throw EmptyInputError("no discrimination pairs");
  BotdResult r;
  r.pairs = pairs.size();
  for (const auto& p : pairs) {
    switch (botd_discriminate(m, p.original, p.altered)) {
      case BotdChoice::original: ++r.chose_original; break;
      case BotdChoice::altered: ++r.chose_altered; break;
      case BotdChoice::tie: ++r.ties; break;
    }
  }
  r.accuracy = static_cast<double>(r.chose_original) / static_cast<double>(r.pairs);
  return r;
}

// --- reporting --------------------------------------------------------------

inline nlohmann::json to_json(const PRF& p) {
  return {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
}

inline nlohmann::json to_json(const EvalReport& r) {
  return {{"detection", to_json(r.detection)},
          {"correction", to_json(r.correction)},
          {"accuracy", r.accuracy},
          {"counts", {{"tn", r.counts.tn}, {"fp", r.counts.fp}, {"tp", r.counts.tp}, {"fn", r.counts.fn}, {"mc", r.counts.mc}}},
          {"params", {{"beta", r.params.beta}, {"beam", r.params.beam}, {"rate", r.params.rate}}}};
}

inline nlohmann::json to_json(const BotdResult& r) {
  return {{"pairs", r.pairs},
          {"chose_original", r.chose_original},
          {"chose_altered", r.chose_altered},
          {"ties", r.ties},
          {"accuracy", r.accuracy}};
}

/// Table with detection P/R/F, correction P/R/F and accuracy per row.
inline void write_table(std::ostream& out, const std::vector<EvalReport>& rows) {
  auto f3 = [](double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(3) << v;
    return os.str();
  };
  out << std::left << std::setw(8) << "t" << std::setw(10) << "beta" << "| " << std::setw(7) << "det P"
      << std::setw(7) << "det R" << std::setw(7) << "det F" << "| " << std::setw(7) << "cor P" << std::setw(7)
      << "cor R" << std::setw(7) << "cor F" << "| accuracy\n";
  for (const auto& r : rows) {
    std::ostringstream beta;
    beta << r.params.beta;
    const std::string t = r.params.beam == static_cast<std::size_t>(-1) ? "inf" : std::to_string(r.params.beam);
    out << std::left << std::setw(8) << t << std::setw(10) << beta.str() << "| " << std::setw(7)
        << f3(r.detection.precision) << std::setw(7) << f3(r.detection.recall) << std::setw(7) << f3(r.detection.f1)
        << "| " << std::setw(7) << f3(r.correction.precision) << std::setw(7) << f3(r.correction.recall)
        << std::setw(7) << f3(r.correction.f1) << "| " << f3(r.accuracy) << '\n';
  }
}

}  // namespace rwspell
