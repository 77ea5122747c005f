#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "oracles/kn_oracle.hpp"
#include "rwspell/lm.hpp"
#include "test_util.hpp"

using namespace rwspell;

namespace {

double p(double lp) { return std::pow(10.0, lp); }

struct Tiny {
  Corpus corpus = Corpus(10, TokenSeq{"a", "b"});
  Vocabulary vocab = Vocabulary::build(corpus);
  TrigramModel m = TrigramModel::train(corpus, vocab);
};

std::vector<std::string> predictable(const TrigramModel& m) {
  std::vector<std::string> out;
  for (const auto& w : m.words())
    if (w != "<s>") out.push_back(w);
  return out;
}

double mass(const TrigramModel& m, WordId h1, WordId h2) {
  double s = 0;
  for (WordId w = 1; w < m.vocab_size(); ++w) s += p(m.logprob(h1, h2, w));
  return s;
}

}  // namespace

// Values worked out by hand from the count tables of "a b" x 10; every
// order has too few distinct counts for modified KN and uses D = 0.5.
TEST(TinyModel, HandDerivedValues) {
  Tiny t;
  const auto& m = t.m;
  for (const auto& d : m.discounts()) EXPECT_TRUE(d.fallback);
  EXPECT_EQ(m.warnings().size(), 3u);

  EXPECT_NEAR(p(m.logprob_word("<s>", "<s>", "a")), 0.95, 1e-12);
  EXPECT_NEAR(p(m.logprob_word("<s>", "a", "b")), 0.95, 1e-12);
  EXPECT_NEAR(p(m.logprob_word("a", "b", "</s>")), 0.95, 1e-12);
  EXPECT_NEAR(p(m.unigram(m.id("a")).prob), 7.0 / 24, 1e-12);
  EXPECT_NEAR(p(m.unigram(m.id("</s>")).prob), 7.0 / 24, 1e-12);
  EXPECT_NEAR(p(m.unigram(TrigramModel::kUnk).prob), 1.0 / 8, 1e-12);
  EXPECT_NEAR(p(m.bigram(m.id("<s>"), m.id("a"))->prob), 0.95, 1e-12);
  EXPECT_NEAR(p(m.bigram(m.id("a"), m.id("b"))->prob), 0.5, 1e-12);
  EXPECT_NEAR(p(m.unigram(m.id("<s>")).bow), 0.05 / (17.0 / 24), 1e-12);
  EXPECT_NEAR(p(m.unigram(m.id("a")).bow), 12.0 / 17, 1e-12);
  EXPECT_NEAR(p(m.unigram(m.id("b")).bow), 12.0 / 17, 1e-12);
  EXPECT_NEAR(p(m.bigram(m.id("<s>"), m.id("<s>"))->bow), 1.0, 1e-12);
  EXPECT_NEAR(p(m.bigram(m.id("<s>"), m.id("a"))->bow), 0.1, 1e-12);
  EXPECT_NEAR(p(m.bigram(m.id("a"), m.id("b"))->bow), 0.1, 1e-12);

  // unseen context (<s>, b): bigram (b, a) unstored, so bow(b) * P(a)
  EXPECT_NEAR(p(m.logprob_word("<s>", "b", "a")), 7.0 / 34, 1e-12);
  EXPECT_NEAR(m.logprob_sentence({"a", "b"}), 3 * std::log10(0.95), 1e-12);
}

TEST(TinyModel, UnknownWordsMapToUnk) {
  Tiny t;
  EXPECT_EQ(t.m.logprob_word("a", "b", "zebra"), t.m.logprob_word("a", "b", "<unk>"));
  EXPECT_EQ(t.m.logprob_sentence({"a", "zebra"}), t.m.logprob_sentence({"a", "quagga"}));
  EXPECT_GT(t.m.unigram(TrigramModel::kUnk).prob, kLogZero);
}

TEST(Backoff, PathsFollowDefinition) {
  Tiny t;
  const auto& m = t.m;
  const WordId s = TrigramModel::kBos, a = m.id("a"), b = m.id("b");
  // stored trigram
  EXPECT_EQ(m.logprob(s, a, b), *m.trigram(s, a, b));
  // unstored trigram, stored bigram (h2, w)
  EXPECT_EQ(m.logprob(a, b, b), m.bigram(a, b)->bow + m.unigram(b).bow + m.unigram(b).prob);
  EXPECT_EQ(m.logprob(s, s, b), m.bigram(s, s)->bow + m.unigram(s).bow + m.unigram(b).prob);
  EXPECT_EQ(m.logprob(b, a, b), m.bigram(a, b)->prob);
  EXPECT_EQ(m.logprob(s, a, a), m.bigram(s, a)->bow + m.unigram(a).bow + m.unigram(a).prob);
}

TEST(Backoff, SingleTokenSentence) {
  Tiny t;
  const auto& m = t.m;
  EXPECT_DOUBLE_EQ(m.logprob_sentence({"b"}), m.logprob_word("<s>", "<s>", "b") + m.logprob_word("<s>", "b", "</s>"));
}

TEST(Discount, ModifiedKnFormula) {
  const auto d = kn_discount({10, 5, 3, 2});
  const double y = 10.0 / 20.0;
  EXPECT_FALSE(d.fallback);
  EXPECT_DOUBLE_EQ(d.d[0], 1 - 2 * y * 5 / 10);
  EXPECT_DOUBLE_EQ(d.d[1], 2 - 3 * y * 3 / 5);
  EXPECT_DOUBLE_EQ(d.d[2], 3 - 4 * y * 2 / 3);
  EXPECT_TRUE(kn_discount({10, 0, 3, 2}).fallback);
  EXPECT_TRUE(kn_discount({1, 1, 10, 1}).fallback);  // D2 <= 0
  EXPECT_EQ(kn_discount({10, 0, 3, 2}).d[0], 0.5);
}

TEST(Train, EmptyCorpusThrows) {
  Vocabulary v = Vocabulary::from_counts({{"a", 2}});
  EXPECT_THROW(TrigramModel::train(Corpus{}, v), EmptyInputError);
}

// Cross-check against the independent map-based implementation.
TEST(Oracle, MatchesIndependentImplementation) {
  std::size_t modified = 0;
  for (uint64_t seed = 1; seed <= 30; ++seed) {
    std::mt19937_64 rng(seed);
    const auto words = testkit::random_words(6 + seed % 6, rng, "abcd", 2);
    auto corpus = testkit::markov_corpus(words, 40, rng, 1, 6);
    while (token_count(corpus) > 200) corpus.pop_back();
    const auto v = Vocabulary::build(corpus);
    const auto m = TrigramModel::train(corpus, v);
    for (const auto& d : m.discounts()) modified += !d.fallback;

    std::set<std::string> base(v.base_set().begin(), v.base_set().end());
    const oracle::KneserNeyOracle o(corpus, base);
    std::vector<std::string> hist = predictable(m);
    hist.push_back("<s>");
    for (const auto& u : hist)
      for (const auto& h : hist)
        for (const auto& w : predictable(m)) {
          const double got = p(m.logprob_word(u, h, w));
          const double want = o.p3(u, h, w);
          ASSERT_NEAR(got, want, 1e-10) << "seed " << seed << " P(" << w << "|" << u << " " << h << ")";
        }
  }
  EXPECT_GT(modified, 0u) << "fixtures never exercised the modified KN discounts";
}

TEST(Normalization, RandomHistories) {
  std::mt19937_64 rng(21);
  const auto words = testkit::random_words(80, rng, "abcdefg", 3);
  const auto corpus = testkit::markov_corpus(words, 400, rng);
  const auto m = TrigramModel::train(corpus, Vocabulary::build(corpus));
  for (int k = 0; k < 300; ++k) {
    const WordId h1 = rng() % m.vocab_size(), h2 = rng() % m.vocab_size();
    ASSERT_NEAR(mass(m, h1, h2), 1.0, 1e-6) << m.word(h1) << " " << m.word(h2);
  }
  EXPECT_NEAR(mass(m, TrigramModel::kBos, TrigramModel::kBos), 1.0, 1e-6);
}

TEST(Normalization, SaturatedContext) {
  // "x" is always followed by one of every predictable word
  Corpus c;
  for (int r = 0; r < 3; ++r) {
    c.push_back({"x", "y"});
    c.push_back({"x", "z"});
    c.push_back({"x"});
    c.push_back({"y", "x", "q"});
    c.push_back({"x", "x", "z", "q"});
  }
  c.push_back({"x", "<unk>"});
  const auto m = TrigramModel::train(c, Vocabulary::build(c));
  for (WordId h1 = 0; h1 < m.vocab_size(); ++h1)
    for (WordId h2 = 0; h2 < m.vocab_size(); ++h2) EXPECT_NEAR(mass(m, h1, h2), 1.0, 1e-9);
}

// Duplicating a sentence that contains a trigram never lowers that
// trigram's conditional probability.
TEST(Property, MonotoneDataSupport) {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed);
    const auto words = testkit::random_words(12, rng, "abc", 2);
    auto corpus = testkit::markov_corpus(words, 60, rng, 2, 8);
    const auto& s = corpus[rng() % corpus.size()];
    const std::size_t i = rng() % s.size();
    const std::string u = i >= 2 ? s[i - 2] : "<s>", h = i >= 1 ? s[i - 1] : "<s>", w = s[i];
    const auto m0 = TrigramModel::train(corpus, Vocabulary::build(corpus));
    const double before = m0.logprob_word(u, h, w);
    const auto copy = s;
    for (int k = 0; k < 3; ++k) corpus.push_back(copy);
    const auto m1 = TrigramModel::train(corpus, Vocabulary::build(corpus));
    EXPECT_GE(m1.logprob_word(u, h, w), before - 1e-12) << "seed " << seed;
  }
}

// Dropping a stored trigram and scoring it by backoff must not claim more
// than the mass it held plus the context's leftover mass.
TEST(Property, BackoffConsistency) {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed);
    const auto words = testkit::random_words(15, rng, "abcd", 2);
    const auto corpus = testkit::markov_corpus(words, 80, rng, 2, 8);
    auto m = TrigramModel::train(corpus, Vocabulary::build(corpus));
    for (int k = 0; k < 20; ++k) {
      const auto& s = corpus[rng() % corpus.size()];
      const std::size_t i = rng() % s.size();
      const WordId u = i >= 2 ? m.id(s[i - 2]) : TrigramModel::kBos;
      const WordId h = i >= 1 ? m.id(s[i - 1]) : TrigramModel::kBos;
      const WordId w = m.id(s[i]);
      const double* stored = m.trigram(u, h, w);
      if (stored == nullptr) continue;
      double others = 0.0;
      for (WordId x = 1; x < m.vocab_size(); ++x)
        if (x != w && m.trigram(u, h, x) != nullptr) others += std::pow(10.0, *m.trigram(u, h, x));
      auto copy = m;
      ASSERT_TRUE(copy.erase_trigram(u, h, w));
      EXPECT_EQ(copy.trigram(u, h, w), nullptr);
      EXPECT_LE(std::pow(10.0, copy.logprob(u, h, w)), 1.0 - others + 1e-12) << "seed " << seed;
      EXPECT_NEAR(mass(copy, u, h), 1.0, 1e-9);
    }
  }
}

TEST(Arpa, TinyModelText) {
  Tiny t;
  const std::string text = t.m.to_arpa();
  EXPECT_NE(text.find("\\data\\\nngram 1=5\nngram 2=4\nngram 3=3\n"), std::string::npos) << text;
  EXPECT_NE(text.find("-0.022276\t<s> <s> a\n"), std::string::npos) << text;
  EXPECT_NE(text.find("-99.000000\t<s> <s>\t0.000000\n"), std::string::npos) << text;
  EXPECT_NE(text.find("-0.903090\t<unk>\t0.000000\n"), std::string::npos) << text;
  EXPECT_NE(text.find("\n\\end\\\n"), std::string::npos);
}

TEST(Arpa, RoundTrip) {
  std::mt19937_64 rng(8);
  const auto words = testkit::random_words(50, rng, "abcdef", 3);
  const auto corpus = testkit::markov_corpus(words, 300, rng);
  const auto m = TrigramModel::train(corpus, Vocabulary::build(corpus));
  const auto first = m.to_arpa();
  std::istringstream in(first);
  const auto back = TrigramModel::import_arpa(in);
  EXPECT_EQ(back.to_arpa(), first);
  EXPECT_EQ(back.vocabulary_fingerprint(), m.vocabulary_fingerprint());
  double worst = 0;
  for (WordId a = 0; a < m.vocab_size(); ++a)
    for (WordId b = 0; b < m.vocab_size(); b += 3)
      for (WordId c = 1; c < m.vocab_size(); c += 2) {
        const auto ia = back.id(m.word(a)), ib = back.id(m.word(b)), ic = back.id(m.word(c));
        worst = std::max(worst, std::abs(back.logprob(ia, ib, ic) - m.logprob(a, b, c)));
      }
  EXPECT_LE(worst, 1e-4);
}

TEST(Arpa, AcceptsSpaceSeparatedEntries) {
  std::istringstream in(
      "\\data\\\nngram 1=3\n\n\\1-grams:\n-0.5 a -0.1\n-0.3 </s>\n-99 <s> -0.2\n\n\\end\\\n");
  const auto m = TrigramModel::import_arpa(in);
  EXPECT_DOUBLE_EQ(m.unigram(m.id("a")).prob, -0.5);
  EXPECT_DOUBLE_EQ(m.unigram(m.id("a")).bow, -0.1);
}

namespace {

std::size_t arpa_error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    TrigramModel::import_arpa(in);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(Arpa, MalformedInputsNameTheLine) {
  Tiny t;
  const std::string good = t.m.to_arpa();
  ASSERT_EQ(arpa_error_line(good), 0u);

  auto replace = [&](const std::string& from, const std::string& to) {
    std::string s = good;
    s.replace(s.find(from), from.size(), to);
    return s;
  };
  EXPECT_EQ(arpa_error_line(replace("ngram 1=5", "ngram 1=6")), 3u);
  EXPECT_EQ(arpa_error_line(replace("\\2-grams:", "\\2-gram:")), 14u);
  EXPECT_EQ(arpa_error_line(replace("\\2-grams:", "\\3-grams:")), 14u);
  EXPECT_EQ(arpa_error_line(replace("\\data\\", "data")), 2u);
  EXPECT_EQ(arpa_error_line(replace("\\end\\\n", "")), 24u);
  EXPECT_EQ(arpa_error_line(replace("\t<s> <s> a", "\t<s> a")), 21u);
  EXPECT_EQ(arpa_error_line(replace("\t<s> <s> a", "\t<s> <s> zz")), 21u);
  EXPECT_EQ(arpa_error_line(replace("-0.022276", "x.y")), 16u);
}

TEST(Arpa, TrainedModelIsByteStable) {
  Tiny a, b;
  EXPECT_EQ(a.m.to_arpa(), b.m.to_arpa());
}
