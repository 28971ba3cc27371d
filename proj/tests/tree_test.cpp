#include <gtest/gtest.h>

#include <set>
#include <string>

#include "enumerate.hpp"
#include "treeseq/tree.hpp"

using namespace treeseq;

namespace {

Tree parse(const std::string& s) { return parse_bracketed(s, {.allow_chains = true}); }

ErrorKind kind_of(const std::string& s, std::size_t* offset = nullptr) {
  try {
    parse_bracketed(s);
  } catch (const Error& e) {
    if (offset) *offset = e.offset().value_or(999);
    return e.kind();
  }
  ADD_FAILURE() << "no error for " << s;
  return ErrorKind::MalformedInput;
}

}  // namespace

TEST(Parse, TwoLeaves) {
  Tree t = parse_bracketed("(S (DT the) (NN toy))");
  EXPECT_EQ(t, Tree::node("S", {Tree::leaf("the", "DT"), Tree::leaf("toy", "NN")}));
}

TEST(Parse, UnaryChainIsNested) {
  Tree t = parse_bracketed("(S (X (Y (T1 w1))) (T2 w2))");
  ASSERT_EQ(t.children.size(), 2u);
  const Tree& x = t.children[0];
  EXPECT_EQ(x.label, "X");
  ASSERT_EQ(x.children.size(), 1u);
  EXPECT_EQ(x.children[0].label, "Y");
  ASSERT_EQ(x.children[0].children.size(), 1u);
  EXPECT_EQ(x.children[0].children[0], Tree::leaf("w1", "T1"));
}

TEST(Parse, WhitespaceAndWrapper) {
  EXPECT_EQ(parse_bracketed("  ( (S (A a)\t(B b)) ) "),
            parse_bracketed("(S (A a) (B b))"));
}

TEST(Parse, SingleLeaf) {
  EXPECT_EQ(parse_bracketed("(DT the)"), Tree::leaf("the", "DT"));
}

TEST(ParseErrors, Unbalanced) {
  std::size_t off = 0;
  EXPECT_EQ(kind_of("(S (DT the)", &off), ErrorKind::UnbalancedBrackets);
  EXPECT_EQ(off, 0u);
  EXPECT_EQ(kind_of("(S (DT the) (NN toy)))", &off), ErrorKind::UnbalancedBrackets);
  EXPECT_EQ(off, 21u);
}

TEST(ParseErrors, Empty) {
  EXPECT_EQ(kind_of(""), ErrorKind::EmptyTree);
  EXPECT_EQ(kind_of("   "), ErrorKind::EmptyTree);
}

TEST(ParseErrors, LeafWithoutWord) {
  std::size_t off = 0;
  EXPECT_EQ(kind_of("(S (DT) (NN toy))", &off), ErrorKind::LeafWithoutWord);
  EXPECT_EQ(off, 3u);
  EXPECT_EQ(kind_of("(S ())"), ErrorKind::LeafWithoutWord);
}

TEST(ParseErrors, InvalidSymbol) {
  std::size_t off = 0;
  EXPECT_EQ(kind_of("(S (A|B a) (C c))", &off), ErrorKind::InvalidSymbol);
  EXPECT_EQ(off, 4u);
  EXPECT_EQ(kind_of("(S (X+Y a) (C c))"), ErrorKind::InvalidSymbol);
  EXPECT_NO_THROW(parse("(S (X+Y a) (C c))"));
  EXPECT_EQ(kind_of("(S (+ a) (C c))"), ErrorKind::InvalidSymbol);
}

TEST(ParseErrors, Malformed) {
  EXPECT_EQ(kind_of("S (A a)"), ErrorKind::MalformedTree);
  EXPECT_EQ(kind_of("(S (A a b))"), ErrorKind::MalformedTree);
  EXPECT_EQ(kind_of("(S word (A a))"), ErrorKind::MalformedTree);
  EXPECT_EQ(kind_of("(S (A a)) (B b)"), ErrorKind::MalformedTree);
}

TEST(Serialize, Examples) {
  EXPECT_EQ(serialize_bracketed(
                Tree::node("S", {Tree::leaf("the", "DT"), Tree::leaf("toy", "NN")})),
            "(S (DT the) (NN toy))");
  EXPECT_EQ(serialize_bracketed(Tree::leaf("the", "DT")), "(DT the)");
}

TEST(Serialize, RoundTripsEnumeratedTrees) {
  for (const auto& t : enumerate::all_trees(1, 5, {"S", "X"}, {"A", "B"}))
    ASSERT_EQ(parse_bracketed(serialize_bracketed(t)), t);
}

TEST(Collapse, IntermediateChain) {
  auto c = collapse_unaries(parse("(S (X (Y (A a) (B b))) (C c))"));
  EXPECT_EQ(serialize_bracketed(c.tree), "(S (X+Y (A a) (B b)) (C c))");
}

TEST(Collapse, LeafChain) {
  auto c = collapse_unaries(parse("(S (Z (T5 w5)) (A a))"));
  EXPECT_EQ(serialize_bracketed(c.tree), "(S (Z+T5 w5) (A a))");
}

TEST(Collapse, ChainAboveRoot) {
  auto c = collapse_unaries(parse("(TOP (S (A a) (B b)))"));
  EXPECT_EQ(serialize_bracketed(c.tree), "(TOP+S (A a) (B b))");
}

TEST(Collapse, SingleWordSentence) {
  auto c = collapse_unaries(parse("(TOP (NP (NN x)))"));
  EXPECT_EQ(c.tree, Tree::leaf("x", "TOP+NP+NN"));
  EXPECT_EQ(uncollapse_unaries(c), parse("(TOP (NP (NN x)))"));
}

TEST(Collapse, NoUnariesIsIdentity) {
  for (const auto& t : enumerate::all_trees(1, 5, {"S", "X"}, {"A", "B"}))
    ASSERT_EQ(collapse_unaries(t).tree, t);
}

TEST(Uncollapse, Examples) {
  EXPECT_EQ(uncollapse_unaries({parse("(S (X+Y (A a) (B b)) (C c))")}),
            parse("(S (X (Y (A a) (B b))) (C c))"));
  EXPECT_EQ(uncollapse_unaries({parse("(S (Z+T5 w5) (A a))")}),
            parse("(S (Z (T5 w5)) (A a))"));
}

TEST(Collapse, InjectedChainsRoundTrip) {
  const auto chains = enumerate::chains({"S", "X"}, 3);
  for (const auto& t : enumerate::all_trees(1, 3, {"S", "X"}, {"A", "B"})) {
    const std::size_t nodes = enumerate::node_count(t);
    for (std::size_t at = 0; at < nodes; ++at)
      for (const auto& ch : chains) {
        Tree u = enumerate::inject_chain(t, at, ch);
        auto c = collapse_unaries(u);
        ASSERT_TRUE(validate_no_unaries(c.tree)) << serialize_bracketed(u);
        ASSERT_EQ(leaf_count(c.tree), leaf_count(u));
        ASSERT_EQ(uncollapse_unaries(c), u) << serialize_bracketed(u);
      }
  }
}

TEST(Binarize, Example) {
  EXPECT_EQ(serialize_bracketed(binarize(parse("(S (A a) (B b) (C c))"))),
            "(S (A a) (S* (B b) (C c)))");
  EXPECT_EQ(serialize_bracketed(binarize(parse("(S (A a) (B b) (C c) (D d))"))),
            "(S (A a) (S* (B b) (S* (C c) (D d))))");
}

TEST(Binarize, BinaryIsIdentity) {
  auto t = parse("(S (X (A a) (B b)) (C c))");
  EXPECT_EQ(binarize(t), t);
}

TEST(Binarize, InvertedByDebinarize) {
  for (const auto& t : enumerate::all_trees(1, 6, {"S", "X"}, {"A"})) {
    Tree b = binarize(t);
    std::function<bool(const Tree&)> binary = [&](const Tree& n) {
      if (n.is_leaf()) return true;
      if (n.children.size() != 2) return false;
      return binary(n.children[0]) && binary(n.children[1]);
    };
    ASSERT_TRUE(binary(b)) << serialize_bracketed(t);
    ASSERT_EQ(leaves(b), leaves(t));
    ASSERT_EQ(debinarize(b), t) << serialize_bracketed(t);
  }
}

TEST(Validate, Examples) {
  EXPECT_TRUE(validate_no_unaries(parse("(S (A a) (B b))")));
  EXPECT_FALSE(validate_no_unaries(parse("(S (X (A a) (B b)))")));
  EXPECT_FALSE(validate_no_unaries(parse("(S (Z (T5 w5)) (A a))")));
  EXPECT_TRUE(validate_no_unaries(Tree::leaf("a", "A")));
}

TEST(Enumeration, ShapeCountsAreSmallSchroderNumbers) {
  // Ordered trees without unary nodes, counted by leaves: 1, 1, 3, 11, 45, 197.
  const std::size_t expected[] = {1, 1, 3, 11, 45, 197};
  for (std::size_t n = 1; n <= 6; ++n)
    EXPECT_EQ(enumerate::shapes(n).size(), expected[n - 1]);
}

TEST(Enumeration, AllDistinct) {
  std::set<std::string> seen;
  auto all = enumerate::all_trees(2, 4, {"S", "X"}, {"A", "B"});
  for (const auto& t : all) seen.insert(serialize_bracketed(t));
  EXPECT_EQ(seen.size(), all.size());
}
