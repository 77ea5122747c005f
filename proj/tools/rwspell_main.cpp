// rwspell: command-line driver for the real-word spelling pipeline.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli.hpp"

namespace {

void print_summary(const std::string& cmd, const nlohmann::json& j) {
  std::cout << cmd << ": " << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  using namespace rwspell::cli;

  CLI::App app{"Real-word spelling error toolkit: trigram LM, noisy-channel corrector, evaluation"};
  app.set_config("--config", "", "TOML config; keys are the long flag names, per-command keys under [command]");
  app.require_subcommand(1);

  PrepareOptions prep;
  auto* c_prep = app.add_subcommand("prepare", "segment, tokenize and regularize raw text");
  c_prep->add_option("inputs", prep.inputs, "input files or directories")->required();
  c_prep->add_option("--out", prep.out, "tokenized corpus, one sentence per line")->required();
  c_prep->add_option("--abbrev", prep.abbreviations, "extra abbreviation lexicon");
  c_prep->add_flag("!--no-learn", prep.learn_abbreviations, "do not learn abbreviations from the input");

  TrainOptions train;
  auto* c_train = app.add_subcommand("train", "build the vocabulary and trigram model");
  c_train->add_option("corpus", train.corpus)->required();
  c_train->add_option("--model", train.model, "ARPA output")->required();
  c_train->add_option("--vocab", train.vocab, "vocabulary output (token<TAB>count)")->required();
  c_train->add_option("--index", train.index, "optional confusion index output");

  StatsOptions stats;
  auto* c_stats = app.add_subcommand("stats", "type/token/hapax statistics");
  c_stats->add_option("--vocab", stats.vocab);
  c_stats->add_option("--corpus", stats.corpus);
  c_stats->add_option("--out", stats.out, "JSON report");

  CorruptOptions corrupt;
  auto* c_corrupt = app.add_subcommand("corrupt", "inject real-word errors");
  c_corrupt->add_option("corpus", corrupt.corpus)->required();
  c_corrupt->add_option("--vocab", corrupt.vocab)->required();
  c_corrupt->add_option("--index", corrupt.index);
  c_corrupt->add_option("--rate", corrupt.rate, "error chance is 1 in RATE")->check(CLI::PositiveNumber);
  c_corrupt->add_option("--seed", corrupt.seed);
  c_corrupt->add_option("--out", corrupt.out, "corrupted corpus")->required();
  c_corrupt->add_option("--records", corrupt.records, "gold records TSV")->required();
  c_corrupt->add_option("--census", corrupt.census, "JSON census report");

  BotdOptions botd;
  auto* c_botd = app.add_subcommand("botd", "original-vs-altered discrimination accuracy");
  c_botd->add_option("--model", botd.model)->required();
  c_botd->add_option("--original", botd.original)->required();
  c_botd->add_option("--records", botd.records)->required();
  c_botd->add_option("--out", botd.out, "JSON report");

  CorrectOptions correct;
  auto* c_correct = app.add_subcommand("correct", "decode the most probable intended sentences");
  c_correct->add_option("observed", correct.observed)->required();
  c_correct->add_option("--model", correct.model)->required();
  c_correct->add_option("--vocab", correct.vocab)->required();
  c_correct->add_option("--index", correct.index);
  c_correct->add_option("--beta", correct.beta)->check(CLI::Range(0.0, 1.0));
  c_correct->add_option("--beam", correct.beam, "states kept per position (or 'inf')");
  c_correct->add_option("--out", correct.out, "corrected corpus")->required();
  c_correct->add_option("--changes", correct.changes, "change list TSV");
  c_correct->add_option("--threads", correct.threads);

  EvaluateOptions eval;
  auto* c_eval = app.add_subcommand("evaluate", "detection/correction precision, recall, F and accuracy");
  c_eval->add_option("--original", eval.original)->required();
  c_eval->add_option("--observed", eval.observed)->required();
  c_eval->add_option("--corrected", eval.corrected)->required();
  c_eval->add_option("--records", eval.records, "verify gold records against the corpora");
  c_eval->add_option("--out", eval.out, "JSON report");
  c_eval->add_option("--beta", eval.beta, "label only");
  c_eval->add_option("--beam", eval.beam, "label only");
  c_eval->add_option("--rate", eval.rate, "label only");

  SweepOptions sweep;
  auto* c_sweep = app.add_subcommand("sweep", "correct + evaluate over a (beam x beta) grid");
  c_sweep->add_option("--original", sweep.original)->required();
  c_sweep->add_option("--observed", sweep.observed)->required();
  c_sweep->add_option("--model", sweep.model)->required();
  c_sweep->add_option("--vocab", sweep.vocab)->required();
  c_sweep->add_option("--index", sweep.index);
  c_sweep->add_option("--beta", sweep.betas)->required()->delimiter(',');
  c_sweep->add_option("--beam", sweep.beams)->required()->delimiter(',');
  c_sweep->add_option("--rate", sweep.rate, "label only");
  c_sweep->add_option("--out", sweep.out, "JSON report");
  c_sweep->add_option("--threads", sweep.threads);

  CLI11_PARSE(app, argc, argv);

  std::string stage = app.get_subcommands().front()->get_name();
  try {
    if (*c_prep) print_summary(stage, cmd_prepare(prep));
    else if (*c_train) print_summary(stage, cmd_train(train));
    else if (*c_stats) print_summary(stage, cmd_stats(stats));
    else if (*c_corrupt) print_summary(stage, cmd_corrupt(corrupt));
    else if (*c_botd) print_summary(stage, cmd_botd(botd));
    else if (*c_correct) print_summary(stage, cmd_correct(correct));
    else if (*c_eval) print_summary(stage, cmd_evaluate(eval, &std::cout));
    else if (*c_sweep) print_summary(stage, cmd_sweep(sweep, &std::cout));
  } catch (const StageError& e) {
    std::cerr << "rwspell " << e.stage() << ": error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "rwspell " << stage << ": error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
