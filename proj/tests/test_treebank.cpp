#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "deptx/treebank.hpp"
#include "support/fixtures.hpp"

namespace {

using namespace deptx;
using deptx::testing::from_heads;
using deptx::testing::kTCatConllu;
using deptx::testing::t_cat;

TEST(ParseConllu, SingleTokenSentence) {
  auto trees = parse_conllu(std::string_view("1\tHi\thi\tINTJ\t_\t_\t0\troot\t_\t_\n\n"));
  ASSERT_EQ(trees.size(), 1u);
  ASSERT_EQ(trees[0].size(), 1u);
  EXPECT_EQ(trees[0].at(1).form, "Hi");
  EXPECT_EQ(trees[0].at(1).head, 0);
  EXPECT_EQ(trees[0].sentence_id, "1");
}

TEST(ParseConllu, SkipsMultiwordRangesAndEmptyNodes) {
  const char* text =
      "1\tI\tI\tPRON\t_\t_\t4\tnsubj\t_\t_\n"
      "2\tjust\tjust\tADV\t_\t_\t4\tadvmod\t_\t_\n"
      "3-4\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n"
      "3\tdo\tdo\tAUX\t_\t_\t4\taux\t_\t_\n"
      "4\tnot\tnot\tPART\t_\t_\t0\troot\t_\t_\n"
      "4.1\tgo\tgo\tVERB\t_\t_\t_\t_\t4:conj\t_\n"
      "\n";
  auto trees = parse_conllu(std::string_view(text));
  ASSERT_EQ(trees.size(), 1u);
  ASSERT_EQ(trees[0].size(), 4u);
  EXPECT_EQ(trees[0].at(3).form, "do");
  EXPECT_EQ(trees[0].at(4).form, "not");
  EXPECT_TRUE(validate_tree(trees[0]).ok());
}

TEST(ParseConllu, LemmaUnderscoreFallsBackToForm) {
  auto trees = parse_conllu(std::string_view("1\tcats\t_\tNOUN\t_\t_\t0\troot\t_\t_\n"));
  ASSERT_EQ(trees.size(), 1u);
  EXPECT_EQ(trees[0].at(1).lemma, "cats");
  EXPECT_FALSE(trees[0].at(1).upos.has_value() && trees[0].at(1).upos->empty());
}

TEST(ParseConllu, SentenceIdFromCommentOrCounter) {
  std::string text = std::string("# sent_id = first\n1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n\n") +
                     "# sent_idx = nope\n1\tb\tb\tX\t_\t_\t0\troot\t_\t_\n\n";
  auto trees = parse_conllu(std::string_view(text));
  ASSERT_EQ(trees.size(), 2u);
  EXPECT_EQ(trees[0].sentence_id, "first");
  EXPECT_EQ(trees[1].sentence_id, "2");
}

TEST(ParseConllu, WrongColumnCountReportsLine) {
  const char* text = "# c\n1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n2\tb\tb\tX\t_\t0\troot\t_\t_\n";
  try {
    parse_conllu(std::string_view(text));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ParseConllu, NonIntegerHeadIsParseError) {
  EXPECT_THROW(parse_conllu(std::string_view("1\ta\ta\tX\t_\t_\tx\troot\t_\t_\n")), ParseError);
}

TEST(ParseConllu, MissingFinalBlankLine) {
  auto trees = parse_conllu(std::string_view("1\ta\ta\tX\t_\t_\t0\troot\t_\t_"));
  ASSERT_EQ(trees.size(), 1u);
}

TEST(ParseConllu, TCatRoundTrips) {
  auto trees = parse_conllu(std::string_view(kTCatConllu));
  ASSERT_EQ(trees.size(), 1u);
  EXPECT_EQ(trees[0], t_cat());
  auto again = parse_conllu(std::string_view(serialize_conllu(trees)));
  EXPECT_EQ(again, trees);
}

TEST(ParseConllu, RandomTreesRoundTrip) {
  std::mt19937_64 rng(11);
  std::vector<DepTree> corpus;
  for (int i = 0; i < 50; ++i)
    corpus.push_back(deptx::testing::random_tree(rng, 1 + i % 12, deptx::testing::ud_relations(),
                                                 "s" + std::to_string(i)));
  EXPECT_EQ(parse_conllu(std::string_view(serialize_conllu(corpus))), corpus);
}

TEST(ValidateTree, TCatIsOk) { EXPECT_TRUE(validate_tree(t_cat()).ok()); }

TEST(ValidateTree, CycleAndNoRoot) {
  auto r = validate_tree(from_heads({2, 1}, {"dep", "dep"}));
  EXPECT_TRUE(r.has(ViolationKind::kCycle));
  EXPECT_TRUE(r.has(ViolationKind::kNoRoot));
  EXPECT_FALSE(r.ok());
}

TEST(ValidateTree, MultipleRoots) {
  auto r = validate_tree(from_heads({0, 0}, {"", ""}));
  EXPECT_TRUE(r.has(ViolationKind::kMultipleRoots));
  EXPECT_EQ(to_string(ViolationKind::kMultipleRoots), "multiple roots");
}

TEST(ValidateTree, ViolationNames) {
  EXPECT_EQ(to_string(ViolationKind::kCycle), "cycle");
  EXPECT_EQ(to_string(ViolationKind::kNoRoot), "no root");
}

TEST(ValidateTree, OtherInvariants) {
  auto t = t_cat();
  t.tokens[2].head = 9;
  EXPECT_FALSE(validate_tree(t).ok());

  t = t_cat();
  t.tokens[0].head = 1;
  EXPECT_FALSE(validate_tree(t).ok());

  t = t_cat();
  t.tokens[3].index = 7;
  EXPECT_FALSE(validate_tree(t).ok());

  t = t_cat();
  t.tokens[0].form.clear();
  EXPECT_FALSE(validate_tree(t).ok());

  t = t_cat();
  t.tokens[0].deprel.clear();
  EXPECT_FALSE(validate_tree(t).ok());

  EXPECT_FALSE(validate_tree(DepTree{}).ok());
}

TEST(IsProjective, Fixtures) {
  EXPECT_TRUE(is_projective(t_cat()));
  EXPECT_TRUE(deptx::testing::crossing_free(t_cat()));
  EXPECT_FALSE(is_projective(deptx::testing::non_projective()));
  EXPECT_FALSE(deptx::testing::crossing_free(deptx::testing::non_projective()));
  EXPECT_TRUE(is_projective(deptx::testing::single_token()));
}

TEST(IsProjective, InvalidTreeIsPreconditionError) {
  EXPECT_THROW(is_projective(from_heads({2, 1}, {"dep", "dep"})), PreconditionError);
}

TEST(IsProjective, AgreesWithCrossingOracle) {
  std::mt19937_64 rng(2024);
  int nonproj = 0;
  for (int i = 0; i < 1000; ++i) {
    auto t = deptx::testing::random_tree(rng, 1 + i % 10, {"dep"});
    const bool expected = deptx::testing::crossing_free(t);
    ASSERT_EQ(is_projective(t), expected) << serialize_conllu({t});
    nonproj += !expected;
  }
  EXPECT_GT(nonproj, 100);
}

TEST(IsProjective, ExhaustiveUpToSixTokens) {
  for (int n = 1; n <= 6; ++n) {
    std::vector<int> heads(static_cast<std::size_t>(n), 0);
    // Every head vector in {0..n}^n; keep the valid trees.
    while (true) {
      auto t = from_heads(heads, std::vector<std::string>(static_cast<std::size_t>(n), "dep"));
      if (validate_tree(t).ok()) {
        ASSERT_EQ(is_projective(t), deptx::testing::crossing_free(t));
      }
      std::size_t k = 0;
      while (k < heads.size() && ++heads[k] > n) heads[k++] = 0;
      if (k == heads.size()) break;
    }
  }
}

TEST(StripSubtypes, DropsColonSuffix) {
  auto t = t_cat();
  t.tokens[3].deprel = "obj:lvc";
  auto s = strip_subtypes(t);
  EXPECT_EQ(s.at(4).deprel, "obj");
  EXPECT_EQ(s.at(1).deprel, "nsubj");
}

}  // namespace
