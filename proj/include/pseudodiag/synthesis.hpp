#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pseudodiag/describe.hpp"
#include "pseudodiag/dsl.hpp"
#include "pseudodiag/graph.hpp"
#include "pseudodiag/ocr.hpp"
#include "pseudodiag/rng.hpp"

namespace pseudodiag {

struct SynthesisConfig {
  std::size_t node_size = 3;      // nodes per pseudo diagram
  std::size_t sampling_size = 5;  // nearest combinations kept per image
  std::size_t max_diagrams = 4;   // connection patterns kept per combination
  std::uint64_t seed = 0;

  void check() const;
};

struct NodeCombination {
  std::vector<std::size_t> indices;   // ascending positions in the document
  std::vector<TextElement> elements;  // same order as indices
  double dist = 0.0;                  // sum of pairwise Euclidean distances
};

// Sum of pairwise distances, pairs visited in lexicographic index order.
double combination_distance(const std::vector<TextElement>& elements,
                            const std::vector<std::size_t>& indices);

// The sampling_size combinations of node_size elements with the smallest
// distance sum, ascending; ties go to the lexicographically smaller index
// tuple. Throws Error{TooFewElements}.
std::vector<NodeCombination> select_combinations(const OcrDocument& doc,
                                                 const SynthesisConfig& cfg);

// Up to max_diagrams distinct weakly connected graphs over the combination.
// Each round draws a random spanning chain (a node permutation whose links
// point from the upper to the lower node) and then adds every other ordered
// pair with probability 1/2. Node n1 is the topmost element, ties broken by x.
std::vector<DiagramGraph> random_connections(const NodeCombination& c,
                                             const SynthesisConfig& cfg,
                                             std::uint64_t image_index,
                                             std::uint64_t combo_index);

struct PseudoDiagram {
  DiagramGraph graph;
  DiagramCode code;
  Description description;
  std::size_t combo_index = 0;
  std::size_t variant_index = 0;
  RngKey key;  // base key for any randomized processing of this diagram
};

std::vector<PseudoDiagram> synthesize(const OcrDocument& doc,
                                      const SynthesisConfig& cfg,
                                      std::uint64_t image_index = 0);

}  // namespace pseudodiag
