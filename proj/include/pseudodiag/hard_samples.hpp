#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pseudodiag/describe.hpp"
#include "pseudodiag/graph.hpp"
#include "pseudodiag/render.hpp"
#include "pseudodiag/rng.hpp"

namespace pseudodiag {

struct HardSampleConfig {
  std::size_t positive_images = 2;
  std::size_t positive_captions = 2;
  std::size_t negative_images = 8;
  std::size_t negative_captions = 6;
  double move_range = 40.0;  // per-axis node displacement bound, layout units
};

enum class SampleKind { PositiveImage, NegativeImage, PositiveCaption, NegativeCaption };
enum class CaptionSource { Description, Code };

const char* sample_kind_name(SampleKind k) noexcept;

// Everything needed to rebuild one sample from the anchor diagram.
struct EditRecord {
  SampleKind kind = SampleKind::PositiveImage;
  std::size_t index = 0;  // position within its list
  RngKey key;             // stream that produced the accepted draw
  std::uint32_t attempts = 1;
  // Image edits, applied in this order: reversals, removals (indices into the
  // original arrow list), duplicate collapse, flip, node moves.
  std::vector<std::size_t> reversed;
  std::vector<std::size_t> removed;
  bool flipped = false;
  std::vector<MoveNode> moves;  // displacements as actually applied
  // Caption edits.
  CaptionSource caption_source = CaptionSource::Code;
  std::pair<std::string, std::string> swapped;  // labels (description) or node ids (code)
  Direction caption_direction = Direction::TopDown;

  bool operator==(const EditRecord&) const = default;
};

struct ImageSample {
  SceneGraph scene;
  EditRecord record;
};

struct CaptionSample {
  std::string text;
  EditRecord record;
};

struct HardSampleSet {
  std::vector<SceneGraph> positive_images;
  std::vector<SceneGraph> negative_images;
  std::vector<std::string> positive_captions;
  std::vector<std::string> negative_captions;
  std::vector<EditRecord> provenance;  // positives then negatives, images then captions
  std::size_t resample_events = 0;     // degenerate negative image draws redrawn
  std::size_t skipped = 0;             // samples dropped after exhausting retries
};

// Flip with probability 1/2, then move a uniformly chosen non-empty subset of
// nodes (always when not flipped, with probability 1/2 after a flip). A draw
// whose moves cannot keep the margin is redrawn up to 5 times, then skipped.
std::vector<ImageSample> hard_positive_images(const DiagramGraph& g, const SceneGraph& s,
                                              std::size_t n, const RngKey& key,
                                              double move_range = 40.0,
                                              std::size_t* skipped = nullptr);

// Reverses and/or removes arrows (at least one affected, at least one kept),
// collapses duplicate arrows, then applies the hard positive rule. Draws that
// reproduce the original edge set are redrawn up to 5 times, then
// Error{DegenerateNegative}. Throws Error{NoEdges} for edgeless graphs.
std::vector<ImageSample> hard_negative_images(const DiagramGraph& g, const SceneGraph& s,
                                              std::size_t n, const RngKey& key,
                                              double move_range = 40.0,
                                              std::size_t* resample_events = nullptr,
                                              std::size_t* skipped = nullptr);

// The diagram code, verbatim.
std::string hard_positive_caption(const DiagramGraph& g);

// Fair coin between swapping two distinct labels throughout the description
// and swapping the labels of two nodes in the code, then a uniform pick among
// the swaps of that kind that change the caption (description: different
// sentence multiset; code: non-isomorphic graph). When only one kind has such
// swaps it is used without a coin. Throws Error{IndistinguishableSwap} when
// neither has any, Error{TooFewLabels} with fewer than 2 distinct labels.
std::vector<CaptionSample> hard_negative_captions(const DiagramGraph& g, const Description& d,
                                                  std::size_t n, const RngKey& key);

HardSampleSet make_hard_sample_set(const DiagramGraph& g, const SceneGraph& s,
                                   const Description& d, const HardSampleConfig& cfg,
                                   const RngKey& key);

// Rebuilds the sample described by `record`: a scene for image kinds, a string
// for caption kinds.
SceneGraph replay_image(const DiagramGraph& g, const SceneGraph& s, const EditRecord& record);
std::string replay_caption(const DiagramGraph& g, const Description& d, const EditRecord& record);

// Description sentences with labels a and b exchanged wherever a whole label
// appears; sentence templates keep the original node kinds.
Description swap_description_labels(const DiagramGraph& g, const std::string& a,
                                    const std::string& b);

// g with the labels (and hence kinds) of nodes id_a and id_b exchanged.
DiagramGraph swap_node_labels(const DiagramGraph& g, const std::string& id_a,
                              const std::string& id_b);

}  // namespace pseudodiag
