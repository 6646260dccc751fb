#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "pseudodiag/describe.hpp"

using namespace pseudodiag;

TEST(Describe, ChainWithQuestion) {
  DiagramGraph g;
  g.nodes = {make_node("n1", "Start"), make_node("n2", "Is valid?"), make_node("n3", "End")};
  g.edges = {{"n1", "n2"}, {"n2", "n3"}};
  const auto d = describe(g);
  EXPECT_EQ(d.sentences, (std::vector<std::string>{"From Start: Proceed to Is valid?",
                                                   "From Is valid?: If **Yes**, proceed to End"}));
  EXPECT_EQ(d.joined_text, "From Start: Proceed to Is valid? From Is valid?: If **Yes**, proceed to End");
}

TEST(Describe, ThreeBranches) {
  DiagramGraph g;
  g.nodes = {make_node("n1", "Ok?"), make_node("n2", "A"), make_node("n3", "B"), make_node("n4", "C")};
  g.edges = {{"n1", "n2"}, {"n1", "n3"}, {"n1", "n4"}};
  EXPECT_EQ(describe(g).sentences,
            (std::vector<std::string>{"From Ok?: If **Yes**, proceed to A", "From Ok?: If **No**, proceed to B",
                                      "From Ok?: If ****, proceed to C"}));
}

TEST(Describe, StatePerSourceNode) {
  DiagramGraph g;
  g.nodes = {make_node("n1", "P?"), make_node("n2", "Q?"), make_node("n3", "R")};
  g.edges = {{"n1", "n3"}, {"n2", "n3"}, {"n1", "n2"}, {"n2", "n1"}};
  EXPECT_EQ(describe(g).sentences,
            (std::vector<std::string>{"From P?: If **Yes**, proceed to R", "From Q?: If **Yes**, proceed to R",
                                      "From P?: If **No**, proceed to Q?", "From Q?: If **No**, proceed to P?"}));
}

TEST(Describe, NoEdges) {
  DiagramGraph g;
  g.nodes = {make_node("n1", "Alone")};
  EXPECT_TRUE(describe(g).sentences.empty());
  EXPECT_EQ(describe(g).joined_text, "");
}

TEST(Describe, Properties) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 300; ++i) {
    const auto g = oracle::random_graph(rng, 2, 6);
    const auto d = describe(g);
    ASSERT_EQ(d.sentences.size(), g.edges.size());
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      const auto& s = d.sentences[k];
      const Node* src = g.find(g.edges[k].from);
      EXPECT_EQ(s.rfind("From " + src->label + ": ", 0), 0u);
      const Node* dst = g.find(g.edges[k].to);
      if (src->kind == NodeKind::Statement && dst->label.find("**") == std::string::npos) {
        EXPECT_EQ(s.find("**", 5 + src->label.size()), std::string::npos);
      }
    }
    auto permuted = g;
    std::shuffle(permuted.nodes.begin(), permuted.nodes.end(), rng);
    EXPECT_EQ(describe(permuted), d);
  }
}
