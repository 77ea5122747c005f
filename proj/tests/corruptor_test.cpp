#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "rwspell/corruptor.hpp"
#include "test_util.hpp"

using namespace rwspell;

namespace {

struct Fixture {
  Corpus corpus;
  Vocabulary vocab;
  ConfusionIndex ci;

  explicit Fixture(std::size_t sentences, uint64_t seed = 1) {
    std::mt19937_64 rng(seed);
    auto words = testkit::random_words(120, rng, "abcd", 4);
    words.push_back("<d4>");
    words.push_back(",");
    corpus = testkit::markov_corpus(words, sentences, rng);
    vocab = Vocabulary::build(corpus);
    ci = ConfusionIndex::build(vocab);
  }
};

std::string dump(const CorruptionResult& r) {
  std::ostringstream os;
  write_corpus(os, r.corrupted);
  write_records(os, r.records);
  return os.str();
}

}  // namespace

TEST(Corrupt, ZeroRateProxyIsIdentity) {
  Fixture f(20);
  const auto r = corrupt_corpus(f.corpus, f.vocab, f.ci, {UINT64_MAX, 3});
  EXPECT_EQ(r.corrupted, f.corpus);
  EXPECT_TRUE(r.records.empty());
}

TEST(Corrupt, ZeroDenominatorRejected) {
  Fixture f(2);
  EXPECT_THROW(corrupt_corpus(f.corpus, f.vocab, f.ci, {0, 1}), ConfigError);
}

TEST(Corrupt, RecordsAreValid) {
  Fixture f(2000);
  const auto r = corrupt_corpus(f.corpus, f.vocab, f.ci, {20, 9});
  ASSERT_FALSE(r.records.empty());
  for (const auto& rec : r.records) {
    EXPECT_EQ(dl_distance(rec.original, rec.error), 1u);
    EXPECT_TRUE(f.vocab.is_realword(rec.original));
    EXPECT_TRUE(f.vocab.is_realword(rec.error));
    EXPECT_NE(rec.original, "<d4>");
    EXPECT_EQ(f.corpus[rec.sentence_id][rec.position], rec.original);
    EXPECT_EQ(r.corrupted[rec.sentence_id][rec.position], rec.error);
  }
}

TEST(Corrupt, AlignmentPreserved) {
  Fixture f(500);
  const auto r = corrupt_corpus(f.corpus, f.vocab, f.ci, {5, 2});
  ASSERT_EQ(r.corrupted.size(), f.corpus.size());
  std::size_t diffs = 0;
  for (std::size_t s = 0; s < f.corpus.size(); ++s) {
    ASSERT_EQ(r.corrupted[s].size(), f.corpus[s].size());
    for (std::size_t i = 0; i < f.corpus[s].size(); ++i) diffs += r.corrupted[s][i] != f.corpus[s][i];
  }
  EXPECT_EQ(diffs, r.records.size());
}

TEST(Corrupt, SameSeedSameBytes) {
  Fixture f(500);
  const auto a = corrupt_corpus(f.corpus, f.vocab, f.ci, {10, 77});
  const auto b = corrupt_corpus(f.corpus, f.vocab, f.ci, {10, 77});
  const auto c = corrupt_corpus(f.corpus, f.vocab, f.ci, {10, 78});
  EXPECT_EQ(dump(a), dump(b));
  EXPECT_NE(dump(a), dump(c));
}

// Follows the documented stream discipline with a separate generator.
TEST(Corrupt, StreamDiscipline) {
  Fixture f(300);
  const CorruptionConfig cfg{7, 123};
  const auto r = corrupt_corpus(f.corpus, f.vocab, f.ci, cfg);
  std::mt19937_64 rng(cfg.seed);
  std::vector<CorruptionRecord> want;
  for (std::size_t s = 0; s < f.corpus.size(); ++s)
    for (std::size_t i = 0; i < f.corpus[s].size(); ++i) {
      if (rng() % cfg.rate_denominator != 0) continue;
      const auto var = f.ci.variations(f.corpus[s][i]);
      if (!f.vocab.is_realword(f.corpus[s][i]) || var.empty()) continue;
      want.push_back({s, i, f.corpus[s][i], var[rng() % var.size()]});
    }
  EXPECT_EQ(r.records, want);
}

TEST(Corrupt, RateOneConsidersEverything) {
  Fixture f(50);
  const auto r = corrupt_corpus(f.corpus, f.vocab, f.ci, {1, 4});
  EXPECT_EQ(r.considered, token_count(f.corpus));
  EXPECT_EQ(r.records.size(), r.eligible_tokens);
  for (std::size_t s = 0; s < f.corpus.size(); ++s)
    for (std::size_t i = 0; i < f.corpus[s].size(); ++i)
      EXPECT_EQ(r.corrupted[s][i] != f.corpus[s][i], corruption_eligible(f.corpus[s][i], f.vocab, f.ci));
}

TEST(Corrupt, BinomialReplacementCount) {
  Fixture f(20000, 3);
  const auto r = corrupt_corpus(f.corpus, f.vocab, f.ci, {50, 1234});
  const double n = static_cast<double>(r.eligible_tokens), p = 1.0 / 50;
  ASSERT_GT(n, 50000);
  EXPECT_LE(std::abs(static_cast<double>(r.records.size()) - n * p), 3 * std::sqrt(n * p * (1 - p)));
}

TEST(Corrupt, MultipleErrorsPerSentenceOccur) {
  Fixture f(3000, 5);
  const auto r = corrupt_corpus(f.corpus, f.vocab, f.ci, {20, 5});
  const auto census = multi_error_census(r.records, f.corpus);
  EXPECT_GT(census.sentences_with_multiple_errors, 0u);
  bool adjacent = false;
  for (std::size_t k = 1; k < r.records.size(); ++k)
    adjacent |= r.records[k].sentence_id == r.records[k - 1].sentence_id &&
                r.records[k].position == r.records[k - 1].position + 1;
  EXPECT_TRUE(adjacent);
}

TEST(Census, Examples) {
  const Corpus five(5, TokenSeq{"a", "b", "c", "d", "e"});
  auto c = multi_error_census({}, five);
  EXPECT_EQ(c.sentences_total, 5u);
  EXPECT_EQ(c.sentences_with_errors, 0u);
  EXPECT_EQ(c.sentences_with_multiple_errors, 0u);
  c = multi_error_census({{3, 1, "b", "x"}, {3, 4, "e", "y"}, {0, 0, "a", "z"}}, five);
  EXPECT_EQ(c.sentences_with_errors, 2u);
  EXPECT_EQ(c.sentences_with_multiple_errors, 1u);
}

TEST(Records, TsvRoundTrip) {
  const std::vector<CorruptionRecord> recs{{0, 2, "the", "then"}, {7, 0, "Zoë", "Zoe"}};
  std::ostringstream os;
  write_records(os, recs);
  EXPECT_EQ(os.str(), "0\t2\tthe\tthen\n7\t0\tZoë\tZoe\n");
  std::istringstream is(os.str());
  EXPECT_EQ(read_records(is), recs);
  std::istringstream bad("0\t2\tthe\n");
  EXPECT_THROW(read_records(bad), ParseError);
}

TEST(Config, Alpha) { EXPECT_DOUBLE_EQ((CorruptionConfig{200, 1}.alpha()), 0.995); }
