#include <gtest/gtest.h>

#include <random>
#include <string>
#include <vector>

#include "rwspell/textprep.hpp"
#include "rwspell/unicode.hpp"

namespace tp = rwspell::textprep;

namespace {

std::vector<std::string> surfaces(const std::vector<tp::Token>& toks) {
  std::vector<std::string> out;
  for (const auto& t : toks) out.push_back(t.surface);
  return out;
}

std::vector<std::string> toks(std::string_view s) { return surfaces(tp::tokenize(s)); }

std::vector<std::string> sentences(std::string_view doc, const tp::AbbreviationLexicon& lex =
                                                             tp::AbbreviationLexicon::english_defaults()) {
  std::vector<std::string> out;
  for (auto sp : tp::segment_sentences(doc, lex)) out.emplace_back(doc.substr(sp.begin, sp.end - sp.begin));
  return out;
}

using V = std::vector<std::string>;

}  // namespace

TEST(Segment, TwoPlainSentences) {
  EXPECT_EQ(sentences("He left. She stayed."), (V{"He left.", "She stayed."}));
}

TEST(Segment, AbbreviationAndInitials) {
  EXPECT_EQ(sentences("Dr. Smith met J. R. Jones."), (V{"Dr. Smith met J. R. Jones."}));
}

TEST(Segment, DecimalNumberThenPeriod) {
  EXPECT_EQ(sentences("Pi is 3.14. Done."), (V{"Pi is 3.14.", "Done."}));
}

TEST(Segment, QuestionAndExclamation) {
  EXPECT_EQ(sentences("Why? because! fine."), (V{"Why?", "because!", "fine."}));
  EXPECT_EQ(sentences("\"Stop!\" he said."), (V{"\"Stop!\"", "he said."}));
}

TEST(Segment, LowercaseFollowerKeepsSentence) {
  EXPECT_EQ(sentences("It costs 5 approx. and more. Then."), (V{"It costs 5 approx. and more.", "Then."}));
  EXPECT_EQ(sentences("the end. and more"), (V{"the end. and more"}));
}

TEST(Segment, Ellipsis) {
  EXPECT_EQ(sentences("Wait... go home."), (V{"Wait... go home."}));
  EXPECT_EQ(sentences("Wait... Go home."), (V{"Wait...", "Go home."}));
}

TEST(Segment, BlankLineIsBoundary) {
  EXPECT_EQ(sentences("no period here\n\nnext line"), (V{"no period here", "next line"}));
}

TEST(Segment, EmptyDocumentThrows) {
  EXPECT_THROW(sentences(""), rwspell::EmptyInputError);
  EXPECT_THROW(sentences(" \n\t\n "), rwspell::EmptyInputError);
}

TEST(Segment, SpansMonotoneAndInBounds) {
  const std::string doc = "One. Two three? Four!\n\nFive Mr. Six. Seven...";
  const auto spans = tp::segment_sentences(doc, tp::AbbreviationLexicon::english_defaults());
  std::size_t last = 0;
  for (auto sp : spans) {
    EXPECT_LE(last, sp.begin);
    EXPECT_LT(sp.begin, sp.end);
    EXPECT_LE(sp.end, doc.size());
    last = sp.end;
  }
}

TEST(Tokenize, Contractions) {
  EXPECT_EQ(toks("don't stop"), (V{"do", "n't", "stop"}));
  EXPECT_EQ(toks("can't"), (V{"ca", "n't"}));
  EXPECT_EQ(toks("John's we'll they're I've she'd I'm"),
            (V{"John", "'s", "we", "'ll", "they", "'re", "I", "'ve", "she", "'d", "I", "'m"}));
  EXPECT_EQ(toks("o'clock rock'n'roll"), (V{"o'clock", "rock'n'roll"}));
  EXPECT_EQ(toks("DON'T"), (V{"DO", "N'T"}));
}

TEST(Tokenize, CurlyApostrophe) {
  EXPECT_EQ(toks("don’t"), (V{"do", "n’t"}));
}

TEST(Tokenize, InterNumericPunctuation) {
  EXPECT_EQ(toks("1,234.56 dollars,"), (V{"1,234.56", "dollars", ","}));
  EXPECT_EQ(toks("3.14."), (V{"3.14", "."}));
}

TEST(Tokenize, Ellipsis) {
  EXPECT_EQ(toks("Wait... go!"), (V{"Wait", "...", "go", "!"}));
  EXPECT_EQ(toks("so...."), (V{"so", "...."}));
}

TEST(Tokenize, AbbreviationPeriods) {
  EXPECT_EQ(toks("Dr. Smith"), (V{"Dr.", "Smith"}));
  EXPECT_EQ(toks("J. R. Jones."), (V{"J.", "R.", "Jones", "."}));
  EXPECT_EQ(toks("the U.S. army"), (V{"the", "U.S.", "army"}));
  EXPECT_EQ(toks("e.g. this"), (V{"e.g.", "this"}));
}

TEST(Tokenize, PunctuationIsolated) {
  EXPECT_EQ(toks("(yes), \"no\";"), (V{"(", "yes", ")", ",", "\"", "no", "\"", ";"}));
  EXPECT_EQ(toks("x-ray"), (V{"x", "-", "ray"}));
}

TEST(Tokenize, UnicodeLetters) {
  EXPECT_EQ(toks("Zoë met José."), (V{"Zoë", "met", "José", "."}));
}

TEST(Tokenize, Kinds) {
  const auto t = tp::tokenize("Go 42 , !");
  ASSERT_EQ(t.size(), 4u);
  EXPECT_EQ(t[0].kind, tp::TokenKind::word);
  EXPECT_EQ(t[2].kind, tp::TokenKind::punctuation);
}

TEST(Digits, Regularize) {
  auto reg = [](V in) {
    std::vector<tp::Token> t;
    for (auto& s : in) t.push_back({s, tp::TokenKind::word, 0, 0});
    return surfaces(tp::regularize_digits(t));
  };
  EXPECT_EQ(reg({"in", "1984"}), (V{"in", "<d4>"}));
  EXPECT_EQ(reg({"1,234.56"}), (V{"1,234.56"}));
  EXPECT_EQ(reg({"007"}), (V{"<d3>"}));
  EXPECT_EQ(reg({"B-52", "52nd"}), (V{"B-52", "52nd"}));
  EXPECT_EQ(reg({"1234567890"}), (V{"<d9+>"}));
}

TEST(Digits, KindMatchesPattern) {
  const auto t = tp::regularize_digits(tp::tokenize("in 1984 and 12 x"));
  for (const auto& tok : t) EXPECT_EQ(tok.kind == tp::TokenKind::digit_class, tp::is_digit_class(tok.surface));
}

TEST(Digits, Idempotent) {
  const auto once = tp::regularize_digits(tp::tokenize("in 1984 there were 12,000 and 7 of 1234567890"));
  const auto twice = tp::regularize_digits(once);
  EXPECT_EQ(surfaces(once), surfaces(twice));
}

TEST(Abbreviations, LexiconStripsPeriod) {
  tp::AbbreviationLexicon lex;
  lex.add("Zz.");
  EXPECT_TRUE(lex.contains("Zz"));
  EXPECT_FALSE(lex.contains("Yy"));
}

TEST(Abbreviations, LearnedFromMidSentenceUse) {
  const std::string doc = "See Fol. one here. Then Fol. two there. End.";
  const auto learned = tp::learn_abbreviations(doc);
  EXPECT_TRUE(learned.contains("Fol"));
  EXPECT_FALSE(learned.contains("here"));
  // a single occurrence is not enough
  EXPECT_FALSE(tp::learn_abbreviations("See Fol. one here. End.").contains("Fol"));
}

TEST(Prepare, LearnedAbbreviationsAffectSegmentation) {
  const std::string doc = "See Fol. one here. Then Fol. two there.";
  const auto with = tp::prepare_document(doc, tp::AbbreviationLexicon{}, true);
  ASSERT_EQ(with.size(), 2u);
  EXPECT_EQ(surfaces(with[0].tokens), (V{"See", "Fol.", "one", "here", "."}));
}

TEST(Prepare, OffsetsPointIntoDocument) {
  const std::string doc = "In 1984 Dr. Who left.\nHe didn't return!";
  const auto ss = tp::prepare_document(doc, tp::AbbreviationLexicon::english_defaults());
  ASSERT_EQ(ss.size(), 2u);
  for (const auto& s : ss)
    for (const auto& t : s.tokens) {
      ASSERT_LE(t.end, doc.size());
      if (t.kind != tp::TokenKind::digit_class) {
        EXPECT_EQ(doc.substr(t.begin, t.end - t.begin), t.surface);
      }
    }
  EXPECT_EQ(surfaces(ss[0].tokens), (V{"In", "<d4>", "Dr.", "Who", "left", "."}));
  EXPECT_EQ(surfaces(ss[1].tokens), (V{"He", "did", "n't", "return", "!"}));
}

// Random text over a mixed alphabet: every non-space code point is covered
// by exactly one token span, tokens carry no whitespace, and output is
// deterministic.
TEST(TokenizeProperty, CoverageAndNoWhitespace) {
  const std::vector<std::string> pieces = {"a", "b", "Z", "é", "1", "2", ".", ",", "'", "’", "-", "!",
                                           "?", "(", ")", " ", " ", "\n", "\"", "s", "t", "n", "Mr", "..."};
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 500; ++iter) {
    std::string text;
    const int len = 1 + static_cast<int>(rng() % 30);
    for (int k = 0; k < len; ++k) text += pieces[rng() % pieces.size()];
    const auto t = tp::tokenize(text);
    EXPECT_EQ(surfaces(t), surfaces(tp::tokenize(text)));
    std::vector<int> covered(text.size(), 0);
    for (const auto& tok : t) {
      ASSERT_FALSE(tok.surface.empty());
      for (char c : tok.surface) ASSERT_FALSE(c == ' ' || c == '\n' || c == '\t') << text;
      ASSERT_EQ(text.substr(tok.begin, tok.end - tok.begin), tok.surface);
      for (auto i = tok.begin; i < tok.end; ++i) ++covered[i];
    }
    for (std::size_t i = 0; i < text.size(); ++i) {
      const bool space = text[i] == ' ' || text[i] == '\n';
      ASSERT_EQ(covered[i], space ? 0 : 1) << "text=[" << text << "] byte " << i;
    }
  }
}
