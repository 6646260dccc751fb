#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pseudodiag/error.hpp"
#include "pseudodiag/synthesis.hpp"

using namespace pseudodiag;

namespace {

OcrDocument points(std::vector<std::pair<double, double>> xy) {
  OcrDocument doc;
  doc.source_id = "p";
  int i = 0;
  for (auto [x, y] : xy) doc.elements.push_back({"e" + std::to_string(i++), x, y, 1, 0, 0, {}});
  return doc;
}

}  // namespace

TEST(Combinations, SingleTriple) {
  SynthesisConfig cfg;
  const auto doc = points({{0, 0}, {3, 0}, {0, 4}});
  const auto c = select_combinations(doc, cfg);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_DOUBLE_EQ(c[0].dist, 3 + 4 + 5);
}

TEST(Combinations, CollinearPoints) {
  SynthesisConfig cfg;
  cfg.sampling_size = 1;
  const auto c = select_combinations(points({{0, 0}, {1, 0}, {2, 0}, {10, 0}}), cfg);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].indices, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_DOUBLE_EQ(c[0].dist, 4.0);
}

TEST(Combinations, TooFewElements) {
  SynthesisConfig cfg;
  try {
    select_combinations(points({{0, 0}, {1, 1}}), cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewElements);
  }
}

TEST(Combinations, MatchesExhaustiveOracle) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const auto doc = oracle::random_document(rng, 3, 10);
    SynthesisConfig cfg;
    cfg.node_size = 2 + trial % 3;
    if (doc.elements.size() < cfg.node_size) continue;
    cfg.sampling_size = 1 + trial % 9;
    const auto got = select_combinations(doc, cfg);
    const auto want = oracle::exhaustive_combinations(doc, cfg.node_size, cfg.sampling_size);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].indices, want[i].indices);
      EXPECT_DOUBLE_EQ(got[i].dist, want[i].dist);
    }
  }
}

TEST(Connections, TwoNodes) {
  SynthesisConfig cfg;
  cfg.node_size = 2;
  cfg.max_diagrams = 10;
  NodeCombination c;
  c.indices = {0, 1};
  c.elements = {{"Top", 5, 0, 1, 0, 0, {}}, {"Bottom", 5, 50, 1, 0, 0, {}}};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    cfg.seed = seed;
    const auto gs = random_connections(c, cfg, 0, 0);
    EXPECT_GE(gs.size(), 1u);
    EXPECT_LE(gs.size(), 3u);
    for (const auto& g : gs) {
      EXPECT_EQ(g.nodes[0].label, "Top");
      EXPECT_TRUE(is_weakly_connected(g));
      EXPECT_FALSE(g.edges.empty());
    }
  }
}

TEST(Connections, DeterministicAndValid) {
  SynthesisConfig cfg;
  cfg.max_diagrams = 20;
  NodeCombination c;
  c.indices = {0, 1, 2};
  c.elements = {{"B", 50, 40, 1, 0, 0, {}}, {"A", 10, 40, 1, 0, 0, {}}, {"C?", 30, 0, 1, 0, 0, {}}};
  const auto first = random_connections(c, cfg, 1, 2);
  EXPECT_EQ(random_connections(c, cfg, 1, 2), first);
  ASSERT_FALSE(first.empty());
  EXPECT_EQ(first[0].nodes[0].label, "C?");
  EXPECT_EQ(first[0].nodes[1].label, "A");
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    cfg.seed = seed;
    cfg.max_diagrams = 4;
    for (const auto& g : random_connections(c, cfg, seed % 7, seed % 5)) {
      ASSERT_TRUE(validate(g).empty());
      ASSERT_TRUE(is_weakly_connected(g));
      ASSERT_EQ(g.nodes.size(), 3u);
      ASSERT_EQ(g.direction, Direction::TopDown);
    }
  }
}

TEST(Synthesize, SmallDocAndEmpty) {
  SynthesisConfig cfg;
  cfg.sampling_size = 1;
  cfg.max_diagrams = 1;
  cfg.seed = 42;
  const auto out = synthesize(points({{0, 0}, {10, 10}, {20, 0}}), cfg);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(parse_code(out[0].code.text), out[0].graph);
  EXPECT_EQ(out[0].description, describe(out[0].graph));
  EXPECT_THROW(synthesize(OcrDocument{}, cfg), Error);
}

TEST(Synthesize, TwelveWordFixture) {
  SynthesisConfig cfg;
  cfg.seed = 3;
  const auto doc = load_ocr_file(std::string(FIXTURE_DIR) + "/ocr/words12.tsv");
  const auto out = synthesize(doc, cfg);
  EXPECT_LE(out.size(), 20u);
  EXPECT_GE(out.size(), 5u);
  for (const auto& d : out) {
    EXPECT_TRUE(validate(d.graph).empty());
    EXPECT_EQ(parse_code(d.code.text), d.graph);
  }
  EXPECT_EQ(synthesize(doc, cfg).size(), out.size());
}

TEST(Config, Bounds) {
  SynthesisConfig cfg;
  cfg.node_size = 1;
  EXPECT_THROW(cfg.check(), Error);
  cfg = {};
  cfg.sampling_size = 0;
  EXPECT_THROW(cfg.check(), Error);
  cfg = {};
  cfg.max_diagrams = 0;
  EXPECT_THROW(cfg.check(), Error);
}
