#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <map>

#include "bugexplain/ast/classify.hpp"
#include "bugexplain/ast/python_parser.hpp"
#include "bugexplain/diffsbt/diff_sbt.hpp"
#include "bugexplain/error.hpp"
#include "oracles.hpp"
#include "random_tree.hpp"
#include "test_data.hpp"

using namespace bugexplain;
using namespace bugexplain::diffsbt;
using ast::SimpleNode;

namespace {

Tokens split(const std::string& text) {
  Tokens out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto next = text.find(' ', pos);
    if (next == std::string::npos) next = text.size();
    if (next > pos) out.push_back(text.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

SimpleNode leaf(std::string kind, int start, int end) {
  return SimpleNode{std::move(kind), std::nullopt, {start, end}, {}};
}

SimpleNode name(std::string value, int line) {
  return SimpleNode{"Name", std::move(value), {line, line}, {}};
}

LineSet range_set(int a, int b) { return lines_of({a, b}); }

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kBadRequest;
}

std::map<std::string, int> label_multiset(const Tokens& tokens) {
  std::map<std::string, int> out;
  for (const auto& t : tokens) ++out[t];
  return out;
}

void visit(const SimpleNode& n, const std::function<void(const SimpleNode&)>& fn) {
  fn(n);
  for (const auto& c : n.children) visit(c, fn);
}

}  // namespace

TEST(ExpandContext, Examples) {
  EXPECT_EQ(expand_context({350, 351, 352, 353}, 400), range_set(347, 356));
  EXPECT_EQ(expand_context({1, 2}, 10), range_set(1, 5));
  EXPECT_EQ(expand_context({}, 10), LineSet{});
  EXPECT_EQ(expand_context({10}, 10), range_set(7, 10));
  EXPECT_EQ(expand_context({5}, 10, 0), LineSet{5});
  EXPECT_EQ(expand_context({2, 9}, 20, 1), (LineSet{1, 2, 3, 8, 9, 10}));
}

TEST(ExpandContext, Errors) {
  EXPECT_EQ(code_of([] { expand_context({11}, 10); }), ErrorCode::kInvalidRange);
  EXPECT_EQ(code_of([] { expand_context({0}, 10); }), ErrorCode::kInvalidRange);
  EXPECT_EQ(code_of([] { expand_context({1}, 10, -1); }), ErrorCode::kInvalidRange);
}

TEST(ExpandContext, MonotoneAndExactDilation) {
  test::RandomTrees gen(11);
  for (int i = 0; i < 200; ++i) {
    auto lines = gen.line_set(40);
    auto out = expand_context(lines, 40);
    EXPECT_TRUE(std::includes(out.begin(), out.end(), lines.begin(), lines.end()));
    LineSet dilated;
    for (int l : lines) {
      for (int k = -3; k <= 3; ++k) {
        if (l + k >= 1 && l + k <= 40) dilated.insert(l + k);
      }
    }
    EXPECT_EQ(out, dilated);
  }
}

TEST(SpanPredicates, Basics) {
  EXPECT_TRUE(has_intersection({3, 5}, {5, 9}));
  EXPECT_FALSE(has_intersection({3, 5}, {2, 6}));
  EXPECT_TRUE(is_inside({3, 5}, {3, 4, 5}));
  EXPECT_FALSE(is_inside({3, 5}, {3, 5}));
  EXPECT_FALSE(has_intersection({1, 1}, {}));
}

TEST(Intersections, NodeInsideIsKeptWhole) {
  SimpleNode assign{"Assign", std::nullopt, {5, 5}, {name("s", 5)}};
  auto out = intersections(std::vector{assign}, {4, 5, 6});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], assign);
}

TEST(Intersections, NodeStartingInSelectionIsPruned) {
  SimpleNode if_node{"If", std::nullopt, {5, 9},
                     {name("x", 5), leaf("Pass", 6, 6), leaf("Pass", 9, 9)}};
  SimpleNode module{"Module", std::nullopt, {1, 100}, {if_node}};
  auto out = intersections(module.children, {5});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].kind, "If");
  ASSERT_EQ(out[0].children.size(), 1u);
  EXPECT_EQ(out[0].children[0], name("x", 5));
  EXPECT_EQ(out, test::oracle_intersections(module.children, {5}));
}

TEST(Intersections, NodeStartingBeforeSelectionIsReplacedByChildren) {
  SimpleNode module{"Module", std::nullopt, {1, 10},
                    {SimpleNode{"Assign", std::nullopt, {2, 2}, {name("a", 2)}},
                     SimpleNode{"Assign", std::nullopt, {7, 7}, {name("b", 7)}}}};
  auto out = intersections(std::vector{module}, {7});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], module.children[1]);
  EXPECT_EQ(out, test::oracle_intersections(std::vector{module}, {7}));
}

TEST(Intersections, IntersectingExpressionKeptWhole) {
  SimpleNode call{"Call", std::nullopt, {3, 6}, {name("f", 3), name("a", 4), name("b", 6)}};
  SimpleNode expr{"Expr", std::nullopt, {3, 6}, {call}};
  auto out = intersections(std::vector{expr}, {5});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], call);
}

TEST(Intersections, NonIntersectingExpressionIsDropped) {
  SimpleNode call{"Call", std::nullopt, {3, 3}, {name("f", 3)}};
  EXPECT_TRUE(intersections(std::vector{call}, {5}).empty());
}

TEST(Intersections, EmptySelection) {
  test::RandomTrees gen(3);
  EXPECT_TRUE(intersections(gen.forest(), {}).empty());
}

TEST(Intersections, InputIsNotMutated) {
  test::RandomTrees gen(5);
  auto forest = gen.forest();
  const auto copy = forest;
  intersections(forest, gen.line_set(60));
  EXPECT_EQ(forest, copy);
}

TEST(Intersections, MatchesBruteForceOracle) {
  test::RandomTrees gen(2024);
  for (int i = 0; i < 300; ++i) {
    auto forest = gen.forest();
    auto ln = gen.line_set(60);
    ASSERT_EQ(intersections(forest, ln), test::oracle_intersections(forest, ln))
        << "iteration " << i;
  }
}

TEST(Intersections, KeptNodesIntersectAndComeFromInput) {
  test::RandomTrees gen(99);
  for (int i = 0; i < 200; ++i) {
    auto forest = gen.forest();
    auto ln = gen.line_set(60);
    std::vector<const SimpleNode*> originals;
    for (const auto& n : forest) visit(n, [&](const SimpleNode& x) { originals.push_back(&x); });
    for (const auto& kept : intersections(forest, ln)) {
      EXPECT_TRUE(has_intersection(kept.span, ln));
      visit(kept, [&](const SimpleNode& x) {
        EXPECT_TRUE(std::any_of(originals.begin(), originals.end(), [&](const SimpleNode* o) {
          return o->kind == x.kind && o->value == x.value && o->span == x.span;
        }));
      });
    }
  }
}

TEST(Sbt, Examples) {
  EXPECT_EQ(sbt(leaf("Pass", 1, 1)), split("( Pass ) Pass"));
  SimpleNode expr{"Expr", std::nullopt, {1, 1}, {name("x", 1)}};
  EXPECT_EQ(sbt(expr), split("( Expr ( Name_x ) Name_x ) Expr"));
  SimpleNode assign{"Assign", std::nullopt, {1, 1},
                    {name("s", 1), SimpleNode{"Constant", "1", {1, 1}, {}}}};
  EXPECT_EQ(sbt(assign), split("( Assign ( Name_s ) Name_s ( Constant_1 ) Constant_1 ) Assign"));
}

TEST(Sbt, Forest) {
  EXPECT_TRUE(sbt_forest({}).empty());
  auto pass = leaf("Pass", 1, 1);
  EXPECT_EQ(sbt_forest(std::vector{pass}), split("( Pass ) Pass"));
  EXPECT_EQ(sbt_forest(std::vector{pass, pass}), split("( Pass ) Pass ( Pass ) Pass"));
}

TEST(Sbt, LabelReplacesWhitespace) {
  EXPECT_EQ(label(SimpleNode{"Constant", "'a  b\tc'", {1, 1}, {}}), "Constant_'a_b_c'");
  EXPECT_EQ(label(SimpleNode{"Constant", "'''x\n   y'''", {1, 2}, {}}), "Constant_'''x_y'''");
  EXPECT_EQ(label(leaf("If", 1, 2)), "If");
}

TEST(Sbt, BalancedWithMatchingLabels) {
  test::RandomTrees gen(17);
  for (int i = 0; i < 200; ++i) {
    auto tokens = sbt(gen.module());
    std::vector<std::string> stack;
    for (std::size_t k = 0; k < tokens.size(); ++k) {
      if (tokens[k] == "(") {
        ASSERT_LT(k + 1, tokens.size());
        stack.push_back(tokens[k + 1]);
      } else if (tokens[k] == ")") {
        ASSERT_FALSE(stack.empty());
        ASSERT_LT(k + 1, tokens.size());
        EXPECT_EQ(tokens[k + 1], stack.back());
        stack.pop_back();
      }
    }
    EXPECT_TRUE(stack.empty());
  }
}

TEST(Sbt, RoundTrip) {
  test::RandomTrees gen(23);
  for (int i = 0; i < 200; ++i) {
    auto tree = gen.module();
    auto back = parse_sbt(sbt(tree));
    ASSERT_EQ(back.size(), 1u);
    EXPECT_TRUE(test::same_structure(back[0], tree)) << ast::dump_tree(tree);
  }
}

TEST(Sbt, RoundTripOfParsedSource) {
  auto root = ast::parse_source(test::read_file(test::fixtures_dir() / "lyrics_scraper.py"));
  // Whitespace inside literals does not survive labelling, so compare labels.
  auto back = parse_sbt(sbt(root));
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(sbt(back[0]), sbt(root));
}

TEST(Sbt, ParseRejectsMalformed) {
  for (const char* text : {"( Pass", "( Pass ) If", ") Pass", "( Pass ) Pass )", "Pass",
                           "( Name_x ) Name_y", "( ) Pass", "( Pass )"}) {
    SCOPED_TRACE(text);
    EXPECT_EQ(code_of([&] { parse_sbt(split(text)); }), ErrorCode::kFormatError);
  }
  EXPECT_TRUE(parse_sbt(Tokens{}).empty());
}

TEST(DiffSbt, PureDeletionEndsWithSeparator) {
  CommitDiffRecord r{"c", "fix", "a.py", "a = 1\nb = 2\n", "a = 1\n", {2}, {}};
  auto seq = diff_sbt(r);
  ASSERT_FALSE(seq.tokens.empty());
  EXPECT_EQ(seq.tokens.back(), kSeparator);
  EXPECT_EQ(std::count(seq.tokens.begin(), seq.tokens.end(), std::string(kSeparator)), 1);
  EXPECT_TRUE(seq.bugfree_half().empty());
}

TEST(DiffSbt, PureAdditionStartsWithSeparator) {
  CommitDiffRecord r{"c", "fix", "a.py", "a = 1\n", "a = 1\nb = 2\n", {}, {2}};
  auto seq = diff_sbt(r);
  ASSERT_FALSE(seq.tokens.empty());
  EXPECT_EQ(seq.tokens.front(), kSeparator);
  EXPECT_TRUE(seq.buggy_half().empty());
  EXPECT_FALSE(seq.bugfree_half().empty());
}

TEST(DiffSbt, HalvesAreTheSidesOfTheDiff) {
  CommitDiffRecord r{"c", "fix", "a.py", "x = 1\n", "x = 2\n", {1}, {1}};
  auto seq = diff_sbt(r);
  EXPECT_EQ(seq.buggy_half(), sbt_for_range(r.buggy_code, {1, 1}));
  EXPECT_EQ(seq.bugfree_half(), sbt_for_range(r.bugfree_code, {1, 1}));
  Tokens joined = seq.buggy_half();
  joined.emplace_back(kSeparator);
  const auto fixed = seq.bugfree_half();
  joined.insert(joined.end(), fixed.begin(), fixed.end());
  EXPECT_EQ(joined, seq.tokens);
}

TEST(DiffSbt, Errors) {
  CommitDiffRecord bad{"c", "fix", "a.py", "x = (\n", "x = 1\n", {1}, {1}};
  EXPECT_EQ(code_of([&] { diff_sbt(bad); }), ErrorCode::kParseError);
  CommitDiffRecord out_of_range{"c", "fix", "a.py", "x = 1\n", "x = 1\n", {4}, {1}};
  EXPECT_EQ(code_of([&] { diff_sbt(out_of_range); }), ErrorCode::kInvalidRange);
}

TEST(DiffSbt, StructureOnlyBugIsVisible) {
  const auto dir = test::data_dir() / "fig2" / "cond-branch";
  CommitDiffRecord r{"fig2", "fix", "cond.py", test::read_file(dir / "before" / "cond.py"),
                     test::read_file(dir / "after" / "cond.py"), {3}, {3}};
  auto seq = diff_sbt(r);
  EXPECT_NE(seq.buggy_half(), seq.bugfree_half());
  EXPECT_EQ(label_multiset(seq.buggy_half()), label_multiset(seq.bugfree_half()));
}

TEST(SbtForRange, Examples) {
  EXPECT_EQ(sbt_for_range("x = 1", {1, 1}),
            split("( Assign ( Name_x ) Name_x ( Constant_1 ) Constant_1 ) Assign"));
  EXPECT_TRUE(sbt_for_range("", {1, 1}).empty());
  EXPECT_EQ(code_of([] { sbt_for_range("x = 1\n", {1, 2}); }), ErrorCode::kInvalidRange);
  EXPECT_EQ(code_of([] { sbt_for_range("x = (\n", {1, 1}); }), ErrorCode::kParseError);
}

TEST(SbtForRange, LyricsSelectionCoversContextStatements) {
  const auto code = test::read_file(test::fixtures_dir() / "lyrics_scraper.py");
  const auto root = ast::parse_source(code);
  const auto ln = expand_context(range_set(350, 353), ast::count_lines(code));
  ASSERT_EQ(ln, range_set(347, 356));
  const auto kept = intersections(root.children, ln);

  std::vector<std::pair<std::string, ast::LineRange>> top;
  for (const auto& n : kept) top.emplace_back(n.kind, n.span);
  const std::vector<std::pair<std::string, ast::LineRange>> expected = {
      {"Assign", {347, 347}}, {"Assign", {348, 348}}, {"Expr", {349, 349}},
      {"For", {350, 351}},    {"Assign", {352, 352}}, {"Assign", {353, 353}},
      {"Return", {354, 359}}};
  EXPECT_EQ(top, expected);

  // Statements kept anywhere are exactly the statements starting in 347..356.
  std::vector<std::pair<std::string, int>> got;
  std::vector<std::pair<std::string, int>> want;
  for (const auto& n : kept) {
    EXPECT_TRUE(has_intersection(n.span, ln));
    visit(n, [&](const SimpleNode& x) {
      if (ast::is_statement(x.kind)) got.emplace_back(x.kind, x.span.start);
    });
  }
  visit(root, [&](const SimpleNode& x) {
    if (ast::is_statement(x.kind) && ln.count(x.span.start)) want.emplace_back(x.kind, x.span.start);
  });
  EXPECT_EQ(got, want);
  EXPECT_EQ(sbt_for_range(code, {350, 353}), sbt_forest(kept));
}

TEST(JoinTokens, Spaces) {
  EXPECT_EQ(join_tokens(split("( Pass ) Pass")), "( Pass ) Pass");
  EXPECT_EQ(join_tokens(Tokens{}), "");
}
