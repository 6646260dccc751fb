#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pseudodiag/dsl.hpp"
#include "pseudodiag/error.hpp"

using namespace pseudodiag;

namespace {

DiagramGraph chain3() {
  DiagramGraph g;
  g.nodes = {make_node("n1", "Start"), make_node("n2", "Is valid?"), make_node("n3", "End")};
  g.edges = {{"n1", "n2"}, {"n2", "n3"}};
  return g;
}

ParseError parse_error(std::string_view code) {
  try {
    parse_code(code);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "parsed: " << code;
  return ParseError(ErrorCode::Unsupported, 0, 0, "", "");
}

}  // namespace

TEST(Emit, Chain) {
  EXPECT_EQ(emit_code(chain3()).text,
            "flowchart TD\nn1[Start]\nn2{Is valid?}\nn3[End]\nn1 --> n2\nn2 --> n3");
}

TEST(Emit, SingleNodeAndBottomUp) {
  DiagramGraph g;
  g.nodes = {make_node("n1", "Only")};
  EXPECT_EQ(emit_code(g).text, "flowchart TD\nn1[Only]");
  g.direction = Direction::BottomUp;
  EXPECT_EQ(emit_code(g).text, "flowchart BT\nn1[Only]");
}

TEST(Emit, EscapesBrackets) {
  DiagramGraph g;
  g.nodes = {make_node("n1", "a[b]{c}\\d")};
  EXPECT_EQ(emit_code(g).text, "flowchart TD\nn1[a\\[b\\]\\{c\\}\\\\d]");
  EXPECT_EQ(parse_code(emit_code(g).text), g);
}

TEST(Parse, RoundTripChain) { EXPECT_EQ(parse_code(emit_code(chain3()).text), chain3()); }

TEST(Parse, ToleratesBlankLinesAndSpaces) {
  const auto g = parse_code("\n  flowchart TD  \n\n  n1[Start]\r\n n2{Is valid?}\nn3[End]  \n\nn1  -->  n2\nn2 --> n3\n");
  EXPECT_EQ(g, chain3());
}

TEST(Parse, ForwardReferenceAllowed) {
  const auto g = parse_code("flowchart TD\nn1 --> n2\nn1[A]\nn2[B]");
  EXPECT_EQ(g.edges.size(), 1u);
}

TEST(Parse, Errors) {
  EXPECT_EQ(parse_error("flowchart TD\nn1[A]\nn1 --> n2").code(), ErrorCode::UnknownNodeReference);
  EXPECT_EQ(parse_error("flowchart TD\nn1[A]\nn1[B]").code(), ErrorCode::DuplicateNodeId);
  EXPECT_EQ(parse_error("flowchart TD\nn1[A]\nn2[B]\nn1 --> n2\nn1 --> n2").code(), ErrorCode::DuplicateEdge);
  EXPECT_EQ(parse_error("flowchart TD\nn1[A]\nn1 --> n1").code(), ErrorCode::InvalidGraph);
  EXPECT_EQ(parse_error("graph TD\nn1[A]").code(), ErrorCode::SyntaxError);
  EXPECT_EQ(parse_error("").code(), ErrorCode::SyntaxError);
  EXPECT_EQ(parse_error("flowchart LR").code(), ErrorCode::SyntaxError);
  EXPECT_EQ(parse_error("flowchart TD\nn1[]").code(), ErrorCode::SyntaxError);
  EXPECT_EQ(parse_error("flowchart TD\nn1[A").code(), ErrorCode::SyntaxError);
  EXPECT_EQ(parse_error("flowchart TD\nn1[A]\nn2[B]\nn1-->n2").code(), ErrorCode::SyntaxError);
}

TEST(Parse, ErrorPosition) {
  const auto e = parse_error("flowchart TD\nn1[A]\nn1 ==> n2");
  EXPECT_EQ(e.code(), ErrorCode::SyntaxError);
  EXPECT_EQ(e.line(), 3u);
  EXPECT_EQ(e.column(), 4u);
  EXPECT_FALSE(e.expected().empty());
}

TEST(Parse, BracketWinsWithWarning) {
  const auto parsed = parse_code_with_diagnostics("flowchart TD\nn1[Done?]\nn2{Go}");
  EXPECT_EQ(parsed.graph.nodes[0].kind, NodeKind::Statement);
  EXPECT_EQ(parsed.graph.nodes[1].kind, NodeKind::Question);
  EXPECT_EQ(parsed.warnings.size(), 2u);
  EXPECT_EQ(parsed.warnings[0].line, 2u);
  EXPECT_TRUE(parse_code_with_diagnostics(emit_code(chain3()).text).warnings.empty());
}

TEST(RoundTrip, RandomGraphsExact) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 500; ++i) {
    const auto g = oracle::random_graph(rng, 1, 6);
    const auto code = emit_code(g);
    const auto back = parse_code(code.text);
    ASSERT_EQ(back, g) << code.text;
    ASSERT_TRUE(is_isomorphic(back, g));
  }
}

TEST(Emit, InjectiveOnRandomGraphs) {
  std::mt19937_64 rng(23);
  std::map<std::string, DiagramGraph> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto g = oracle::random_graph(rng, 1, 3);
    const auto [it, fresh] = seen.emplace(emit_code(g).text, g);
    if (!fresh) ASSERT_EQ(it->second, g);
  }
}

TEST(Parse, ArbitraryBytesNeverCrash) {
  std::mt19937_64 rng(29);
  const std::string alphabet = "flowchart TDBn0123456789[]{}\\-> \n\r\t?";
  for (int i = 0; i < 20000; ++i) {
    std::string s;
    const std::size_t len = rng() % 64;
    for (std::size_t k = 0; k < len; ++k) {
      s += rng() % 4 == 0 ? static_cast<char>(rng() % 256) : alphabet[rng() % alphabet.size()];
    }
    if (rng() % 2) s = "flowchart TD\n" + s;
    try {
      const auto g = parse_code(s);
      EXPECT_TRUE(validate(g).empty());
    } catch (const Error&) {
    }
  }
}
