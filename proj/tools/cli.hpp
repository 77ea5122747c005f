#pragma once

// Subcommand implementations for the rwspell tool. Each command reads and
// writes the interchange formats and returns a JSON summary; main() only
// wires flags to these functions.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rwspell/rwspell.hpp"

namespace rwspell::cli {

namespace fs = std::filesystem;
using nlohmann::json;

/// Error tagged with the pipeline stage that failed.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what) : Error(what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

inline std::string read_file(const std::string& path, const std::string& stage) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StageError(stage, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline std::ofstream open_out(const std::string& path, const std::string& stage) {
  if (const auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StageError(stage, "cannot write " + path);
  return out;
}

inline void write_json(const std::string& path, const json& j, const std::string& stage) {
  if (path.empty()) return;
  auto out = open_out(path, stage);
  out << j.dump(2) << '\n';
}

inline Corpus load_corpus(const std::string& path, const std::string& stage) {
  std::ifstream in(path);
  if (!in) throw StageError(stage, "cannot read corpus " + path);
  return read_corpus(in);
}

inline Vocabulary load_vocab(const std::string& path, const std::string& stage) {
  std::ifstream in(path);
  if (!in) throw StageError(stage, "cannot read vocabulary " + path);
  return Vocabulary::load(in);
}

inline TrigramModel load_model(const std::string& path, const std::string& stage) {
  std::ifstream in(path);
  if (!in) throw StageError(stage, "cannot read model " + path);
  return TrigramModel::import_arpa(in);
}

/// Index from a saved file when given, otherwise rebuilt from the vocabulary.
inline ConfusionIndex load_index(const std::string& index_path, const Vocabulary& v, const std::string& stage) {
  if (index_path.empty() || !fs::exists(index_path)) return ConfusionIndex::build(v);
  std::ifstream in(index_path);
  auto ci = ConfusionIndex::load(in);
  if (ci.vocabulary_fingerprint() != v.fingerprint())
    throw StageError(stage, "confusion index " + index_path + " does not match the vocabulary");
  return ci;
}

// --- prepare -----------------------------------------------------------------

struct PrepareOptions {
  std::vector<std::string> inputs;  // files or directories
  std::string out;
  std::string abbreviations;  // optional lexicon file; defaults are built in
  bool learn_abbreviations = true;
};

inline std::vector<std::string> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<std::string> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<std::string> dir;
      for (const auto& e : fs::directory_iterator(in))
        if (e.is_regular_file()) dir.push_back(e.path().string());
      std::sort(dir.begin(), dir.end());
      files.insert(files.end(), dir.begin(), dir.end());
    } else if (fs::is_regular_file(in)) {
      files.push_back(in);
    } else {
      throw StageError("prepare", "no such input: " + in);
    }
  }
  return files;
}

inline Corpus prepare_files(const std::vector<std::string>& files, const textprep::AbbreviationLexicon& lex,
                            bool learn) {
  Corpus corpus;
  for (const auto& f : files) {
    const auto text = read_file(f, "prepare");
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    for (auto& s : textprep::prepare_document(text, lex, learn)) {
      TokenSeq toks;
      toks.reserve(s.tokens.size());
      for (auto& t : s.tokens) toks.push_back(std::move(t.surface));
      corpus.push_back(std::move(toks));
    }
  }
  return corpus;
}

inline json cmd_prepare(const PrepareOptions& o) {
  const auto files = expand_inputs(o.inputs);
  if (files.empty()) throw StageError("prepare", "no input documents");
  auto lex = textprep::AbbreviationLexicon::english_defaults();
  if (!o.abbreviations.empty()) {
    std::ifstream in(o.abbreviations);
    if (!in) throw StageError("prepare", "cannot read abbreviation lexicon " + o.abbreviations);
    lex.merge(textprep::AbbreviationLexicon::load(in));
  }
  const auto corpus = prepare_files(files, lex, o.learn_abbreviations);
  if (corpus.empty()) throw StageError("prepare", "input documents contain no text");
  auto out = open_out(o.out, "prepare");
  write_corpus(out, corpus);
  return {{"files", files.size()}, {"sentences", corpus.size()}, {"tokens", token_count(corpus)}};
}

// --- train / stats -------------------------------------------------------------

struct TrainOptions {
  std::string corpus;
  std::string model;
  std::string vocab;
  std::string index;  // optional
};

inline json cmd_train(const TrainOptions& o) {
  const auto corpus = load_corpus(o.corpus, "train");
  if (token_count(corpus) == 0) throw StageError("train", "empty corpus " + o.corpus);
  const auto vocab = Vocabulary::build(corpus);
  const auto model = TrigramModel::train(corpus, vocab);
  {
    auto out = open_out(o.vocab, "train");
    vocab.save(out);
  }
  {
    auto out = open_out(o.model, "train");
    model.export_arpa(out);
  }
  if (!o.index.empty()) {
    auto out = open_out(o.index, "train");
    ConfusionIndex::build(vocab).save(out);
  }
  json warnings = json::array();
  for (const auto& w : model.warnings()) warnings.push_back(w);
  return {{"sentences", corpus.size()},
          {"tokens", vocab.total_tokens()},
          {"base_vocabulary", vocab.base_set().size()},
          {"realword_vocabulary", vocab.realword_set().size()},
          {"ngrams", {model.ngram_count(1), model.ngram_count(2), model.ngram_count(3)}},
          {"warnings", warnings}};
}

struct StatsOptions {
  std::string vocab;   // either a vocabulary file
  std::string corpus;  // or a tokenized corpus
  std::string out;
};

inline json cmd_stats(const StatsOptions& o) {
  Vocabulary v;
  if (!o.vocab.empty()) v = load_vocab(o.vocab, "stats");
  else if (!o.corpus.empty()) v = Vocabulary::build(load_corpus(o.corpus, "stats"));
  else throw StageError("stats", "need --vocab or --corpus");
  const auto s = vocab_stats(v);
  json j = {{"type_count", s.type_count},
            {"hapax_count", s.hapax_count},
            {"hapax_pct", s.hapax_pct},
            {"token_count", s.token_count},
            {"base_vocabulary", v.base_set().size()},
            {"realword_vocabulary", v.realword_set().size()}};
  write_json(o.out, j, "stats");
  return j;
}

// --- corrupt -------------------------------------------------------------------

struct CorruptOptions {
  std::string corpus;
  std::string vocab;
  std::string index;
  uint64_t rate = 200;
  uint64_t seed = 1;
  std::string out;
  std::string records;
  std::string census;  // optional JSON
};

inline json cmd_corrupt(const CorruptOptions& o) {
  if (o.rate == 0) throw StageError("corrupt", "--rate must be >= 1");
  const auto corpus = load_corpus(o.corpus, "corrupt");
  const auto vocab = load_vocab(o.vocab, "corrupt");
  const auto ci = load_index(o.index, vocab, "corrupt");
  const auto res = corrupt_corpus(corpus, vocab, ci, {o.rate, o.seed});
  {
    auto out = open_out(o.out, "corrupt");
    write_corpus(out, res.corrupted);
  }
  {
    auto out = open_out(o.records, "corrupt");
    write_records(out, res.records);
  }
  const auto census = multi_error_census(res.records, corpus);
  json j = {{"rate", o.rate},
            {"seed", o.seed},
            {"tokens", token_count(corpus)},
            {"eligible_tokens", res.eligible_tokens},
            {"considered", res.considered},
            {"replacements", res.records.size()},
            {"sentences_total", census.sentences_total},
            {"sentences_with_errors", census.sentences_with_errors},
            {"sentences_with_multiple_errors", census.sentences_with_multiple_errors}};
  write_json(o.census, j, "corrupt");
  return j;
}

// --- botd ----------------------------------------------------------------------

struct BotdOptions {
  std::string model;
  std::string original;
  std::string records;
  std::string out;
};

inline json cmd_botd(const BotdOptions& o) {
  const auto model = load_model(o.model, "botd");
  const auto original = load_corpus(o.original, "botd");
  std::ifstream rin(o.records);
  if (!rin) throw StageError("botd", "cannot read records " + o.records);
  const auto pairs = botd_pairs(original, read_records(rin));
  if (pairs.empty()) throw StageError("botd", "records contain no altered sentences");
  const auto j = to_json(botd_accuracy(model, pairs));
  write_json(o.out, j, "botd");
  return j;
}

// --- correct / evaluate / sweep ----------------------------------------------------

inline std::size_t parse_beam(const std::string& s) {
  if (s == "inf" || s == "unbounded") return DecoderConfig::kUnbounded;
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || v == 0) throw ConfigError("beam width must be a positive integer or 'inf': " + s);
  return static_cast<std::size_t>(v);
}

struct CorrectOptions {
  std::string observed;
  std::string model;
  std::string vocab;
  std::string index;
  double beta = 0.995;
  std::string beam = "3";
  std::string out;
  std::string changes;
  unsigned threads = 1;
};

inline json cmd_correct(const CorrectOptions& o) {
  const auto model = load_model(o.model, "correct");
  const auto vocab = load_vocab(o.vocab, "correct");
  const auto ci = load_index(o.index, vocab, "correct");
  const auto observed = load_corpus(o.observed, "correct");
  ChannelParams cp{o.beta};
  DecoderConfig dc{parse_beam(o.beam)};
  const auto res = correct_corpus(observed, model, ci, cp, dc, o.threads);
  {
    auto out = open_out(o.out, "correct");
    write_corpus(out, res.corrected);
  }
  if (!o.changes.empty()) {
    auto out = open_out(o.changes, "correct");
    write_changes(out, res.changes);
  }
  return {{"sentences", observed.size()}, {"changes", res.changes.size()}, {"beta", o.beta}, {"beam", o.beam}};
}

struct EvaluateOptions {
  std::string original;
  std::string observed;
  std::string corrected;
  std::string records;  // optional consistency check
  std::string out;
  double beta = 0.0;
  std::string beam = "0";
  uint64_t rate = 0;
};

inline json cmd_evaluate(const EvaluateOptions& o, std::ostream* table = nullptr) {
  const auto original = load_corpus(o.original, "evaluate");
  const auto observed = load_corpus(o.observed, "evaluate");
  const auto corrected = load_corpus(o.corrected, "evaluate");
  if (!o.records.empty()) {
    std::ifstream rin(o.records);
    if (!rin) throw StageError("evaluate", "cannot read records " + o.records);
    check_records(original, observed, read_records(rin));
  }
  const std::size_t beam = o.beam == "0" ? 0 : parse_beam(o.beam);
  const auto report = evaluate_run(original, observed, corrected, {o.beta, beam, o.rate});
  if (table) write_table(*table, {report});
  const auto j = to_json(report);
  write_json(o.out, j, "evaluate");
  return j;
}

struct SweepOptions {
  std::string original;
  std::string observed;
  std::string model;
  std::string vocab;
  std::string index;
  std::vector<double> betas;
  std::vector<std::string> beams;
  uint64_t rate = 0;
  std::string out;
  unsigned threads = 1;
};

inline std::vector<EvalReport> run_sweep(const Corpus& original, const Corpus& observed, const TrigramModel& model,
                                         const ConfusionIndex& ci, const std::vector<std::size_t>& beams,
                                         const std::vector<double>& betas, uint64_t rate, unsigned threads) {
  if (beams.empty() || betas.empty()) throw ConfigError("sweep grid is empty");
  struct Cell {
    std::size_t beam;
    double beta;
  };
  std::vector<Cell> cells;
  for (auto t : beams)
    for (auto b : betas) cells.push_back({t, b});
  for (const auto& c : cells) {
    ChannelParams{c.beta}.validate();
    DecoderConfig{c.beam}.validate();
  }
  auto run = [&](const Cell& c) {
    const auto corrected = correct_corpus(observed, model, ci, {c.beta}, {c.beam}).corrected;
    return evaluate_run(original, observed, corrected, {c.beta, c.beam, rate});
  };
  std::vector<EvalReport> rows(cells.size());
  threads = std::max(1u, threads);
  for (std::size_t start = 0; start < cells.size(); start += threads) {
    std::vector<std::future<EvalReport>> batch;
    for (std::size_t k = start; k < std::min(cells.size(), start + threads); ++k)
      batch.push_back(std::async(threads == 1 ? std::launch::deferred : std::launch::async, run, cells[k]));
    for (std::size_t k = 0; k < batch.size(); ++k) rows[start + k] = batch[k].get();
  }
  return rows;
}

inline json cmd_sweep(const SweepOptions& o, std::ostream* table = nullptr) {
  if (o.betas.empty() || o.beams.empty()) throw StageError("sweep", "empty (beam x beta) grid");
  std::vector<std::size_t> beams;
  for (const auto& b : o.beams) beams.push_back(parse_beam(b));
  const auto model = load_model(o.model, "sweep");
  const auto vocab = load_vocab(o.vocab, "sweep");
  const auto ci = load_index(o.index, vocab, "sweep");
  const auto original = load_corpus(o.original, "sweep");
  const auto observed = load_corpus(o.observed, "sweep");
  const auto rows = run_sweep(original, observed, model, ci, beams, o.betas, o.rate, o.threads);
  if (table) write_table(*table, rows);
  json j = {{"rows", json::array()}};
  for (const auto& r : rows) j["rows"].push_back(to_json(r));
  write_json(o.out, j, "sweep");
  return j;
}

}  // namespace rwspell::cli
