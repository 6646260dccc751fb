#include "pseudodiag/hard_samples.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "pseudodiag/dsl.hpp"
#include "pseudodiag/error.hpp"

namespace pseudodiag {

const char* sample_kind_name(SampleKind k) noexcept {
  switch (k) {
    case SampleKind::PositiveImage: return "positive_image";
    case SampleKind::NegativeImage: return "negative_image";
    case SampleKind::PositiveCaption: return "positive_caption";
    case SampleKind::NegativeCaption: return "negative_caption";
  }
  return "unknown";
}

namespace {

constexpr std::uint32_t kMaxRetries = 5;

enum Purpose : std::uint64_t { kPositiveImage = 1, kNegativeImage = 2, kNegativeCaption = 3 };

// Displacements are multiples of 1/64 so that mirroring and halving stay
// exact in binary floating point.
double quantize(double v) { return std::round(v * 64.0) / 64.0; }

struct PositiveEdit {
  SceneGraph scene;
  bool flipped = false;
  std::vector<MoveNode> moves;
};

std::optional<PositiveEdit> draw_positive(const SceneGraph& s, CounterRng& rng,
                                          double move_range) {
  PositiveEdit e;
  e.scene = s;
  e.flipped = rng.coin();
  if (e.flipped) e.scene = apply_scene_edit(e.scene, FlipDirection{});
  const bool move = !e.flipped || rng.coin();
  if (!move || s.shapes.empty()) return e;

  const std::size_t n = std::min<std::size_t>(s.shapes.size(), 62);
  const std::uint64_t mask = 1 + rng.uniform((std::uint64_t{1} << n) - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(mask >> i & 1)) continue;
    const double dx = quantize(rng.uniform_range(-move_range, move_range));
    const double dy = quantize(rng.uniform_range(-move_range, move_range));
    const std::string id = e.scene.shapes[i].node_id;
    const Point before = e.scene.shapes[i].center;
    try {
      e.scene = apply_scene_edit(e.scene, MoveNode{id, dx, dy});
    } catch (const Error& err) {
      if (err.code() == ErrorCode::OverlapUnresolvable) return std::nullopt;
      throw;
    }
    const Point after = e.scene.shapes[i].center;
    e.moves.push_back(MoveNode{id, after.x - before.x, after.y - before.y});
  }
  return e;
}

void collapse_duplicate_arrows(SceneGraph& s) {
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<Arrow> kept;
  for (auto& a : s.arrows) {
    if (seen.emplace(a.from, a.to).second) kept.push_back(std::move(a));
  }
  s.arrows = std::move(kept);
  reroute_arrows(s);
}

SceneGraph apply_arrow_perturbation(const SceneGraph& s, const std::vector<std::size_t>& reversed,
                                    const std::vector<std::size_t>& removed) {
  SceneGraph out = s;
  for (std::size_t i : reversed) out = apply_scene_edit(out, ReverseArrow{i});
  for (auto it = removed.rbegin(); it != removed.rend(); ++it) {
    out = apply_scene_edit(out, RemoveArrow{*it});
  }
  collapse_duplicate_arrows(out);
  return out;
}

SceneGraph apply_positive_record(SceneGraph s, const EditRecord& r) {
  if (r.flipped) s = apply_scene_edit(s, FlipDirection{});
  for (const auto& m : r.moves) s = apply_scene_edit(s, m);
  return s;
}

void require_same_edges(const DiagramGraph& g, const SceneGraph& s) {
  if (edge_set(scene_to_graph(s)) != edge_set(g)) {
    throw Error(ErrorCode::InvalidArgument, "hard positive changed the edge set");
  }
}

std::vector<std::string> sorted_sentences(const Description& d) {
  auto v = d.sentences;
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

std::vector<ImageSample> hard_positive_images(const DiagramGraph& g, const SceneGraph& s,
                                              std::size_t n, const RngKey& key,
                                              double move_range, std::size_t* skipped) {
  require_valid(g);
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "need at least one sample");
  std::vector<ImageSample> out;
  for (std::size_t i = 0; i < n; ++i) {
    bool done = false;
    for (std::uint32_t attempt = 0; attempt <= kMaxRetries && !done; ++attempt) {
      const RngKey k = key.with_lane(make_lane(kPositiveImage, i, attempt));
      CounterRng rng(k);
      auto edit = draw_positive(s, rng, move_range);
      if (!edit) continue;
      require_same_edges(g, edit->scene);
      EditRecord r;
      r.kind = SampleKind::PositiveImage;
      r.index = out.size();
      r.key = k;
      r.attempts = attempt + 1;
      r.flipped = edit->flipped;
      r.moves = std::move(edit->moves);
      out.push_back({std::move(edit->scene), std::move(r)});
      done = true;
    }
    if (!done && skipped) ++*skipped;
  }
  return out;
}

std::vector<ImageSample> hard_negative_images(const DiagramGraph& g, const SceneGraph& s,
                                              std::size_t n, const RngKey& key,
                                              double move_range, std::size_t* resample_events,
                                              std::size_t* skipped) {
  require_valid(g);
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "need at least one sample");
  const std::size_t m = s.arrows.size();
  if (g.edges.empty() || m == 0) {
    throw Error(ErrorCode::NoEdges, "hard negative images need at least one arrow");
  }
  if (m > 62) throw Error(ErrorCode::Unsupported, "too many arrows");
  const auto original = edge_set(g);
  const std::uint64_t all = (std::uint64_t{1} << m) - 1;

  std::vector<ImageSample> out;
  for (std::size_t i = 0; i < n; ++i) {
    bool done = false;
    bool degenerate = false;
    for (std::uint32_t attempt = 0; attempt <= kMaxRetries && !done; ++attempt) {
      const RngKey k = key.with_lane(make_lane(kNegativeImage, i, attempt));
      CounterRng rng(k);
      std::uint64_t rev = 0, rem = 0;
      do {
        rev = rng.uniform(all + 1);
        rem = rng.uniform(all + 1);
      } while ((rev | rem) == 0 || rem == all);

      EditRecord r;
      r.kind = SampleKind::NegativeImage;
      r.key = k;
      r.attempts = attempt + 1;
      for (std::size_t a = 0; a < m; ++a) {
        if (rem >> a & 1) {
          r.removed.push_back(a);
        } else if (rev >> a & 1) {
          r.reversed.push_back(a);
        }
      }
      SceneGraph perturbed = apply_arrow_perturbation(s, r.reversed, r.removed);
      if (edge_set(scene_to_graph(perturbed)) == original) {
        degenerate = true;
        if (resample_events) ++*resample_events;
        continue;
      }
      auto edit = draw_positive(perturbed, rng, move_range);
      if (!edit) {
        if (resample_events) ++*resample_events;
        continue;
      }
      r.index = out.size();
      r.flipped = edit->flipped;
      r.moves = std::move(edit->moves);
      out.push_back({std::move(edit->scene), std::move(r)});
      done = true;
    }
    if (!done) {
      if (degenerate) {
        throw Error(ErrorCode::DegenerateNegative,
                    "arrow perturbations keep reproducing the original edge set");
      }
      if (skipped) ++*skipped;
    }
  }
  return out;
}

std::string hard_positive_caption(const DiagramGraph& g) { return emit_code(g).text; }

Description swap_description_labels(const DiagramGraph& g, const std::string& a,
                                    const std::string& b) {
  auto swap = [&](const std::string& label) { return label == a ? b : label == b ? a : label; };
  std::vector<std::string> sentences;
  std::map<std::string, std::string> branch;
  for (const auto& node : g.nodes) branch[node.id] = "Yes";
  for (const auto& e : g.edges) {
    const Node& from = *g.find(e.from);
    const Node& to = *g.find(e.to);
    std::string t = "From " + swap(from.label) + ": ";
    if (from.kind == NodeKind::Question) {
      std::string& state = branch[from.id];
      t += "If **" + state + "**, proceed to ";
      state = state == "Yes" ? "No" : "";
    } else {
      t += "Proceed to ";
    }
    t += swap(to.label);
    sentences.push_back(std::move(t));
  }
  return make_description(std::move(sentences));
}

DiagramGraph swap_node_labels(const DiagramGraph& g, const std::string& id_a,
                              const std::string& id_b) {
  DiagramGraph out = g;
  const auto ia = g.index_of(id_a);
  const auto ib = g.index_of(id_b);
  if (!ia || !ib) throw Error(ErrorCode::UnknownId, "unknown node in label swap");
  std::swap(out.nodes[*ia].label, out.nodes[*ib].label);
  out.nodes[*ia].kind = kind_for_label(out.nodes[*ia].label);
  out.nodes[*ib].kind = kind_for_label(out.nodes[*ib].label);
  return out;
}

std::vector<CaptionSample> hard_negative_captions(const DiagramGraph& g, const Description& d,
                                                  std::size_t n, const RngKey& key) {
  require_valid(g);
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "need at least one sample");
  std::vector<std::string> labels;
  for (const auto& node : g.nodes) {
    if (std::find(labels.begin(), labels.end(), node.label) == labels.end()) {
      labels.push_back(node.label);
    }
  }
  if (labels.size() < 2) {
    throw Error(ErrorCode::TooFewLabels, "label swaps need at least 2 distinct labels");
  }
  const std::string positive = hard_positive_caption(g);
  const auto original_sentences = sorted_sentences(d);

  // Admissible swaps of each kind. Drawing uniformly from these is the same
  // distribution as drawing any pair and redrawing until it is admissible.
  std::vector<std::pair<std::string, std::string>> label_pairs;
  for (std::size_t x = 0; x < labels.size(); ++x) {
    for (std::size_t y = x + 1; y < labels.size(); ++y) {
      const auto swapped = swap_description_labels(g, labels[x], labels[y]);
      if (swapped.joined_text != d.joined_text && swapped.joined_text != positive &&
          sorted_sentences(swapped) != original_sentences) {
        label_pairs.emplace_back(labels[x], labels[y]);
      }
    }
  }
  std::vector<std::pair<std::string, std::string>> node_pairs;
  for (std::size_t x = 0; x < g.nodes.size(); ++x) {
    for (std::size_t y = x + 1; y < g.nodes.size(); ++y) {
      if (g.nodes[x].label == g.nodes[y].label) continue;
      const auto swapped = swap_node_labels(g, g.nodes[x].id, g.nodes[y].id);
      if (!is_isomorphic(swapped, g)) node_pairs.emplace_back(g.nodes[x].id, g.nodes[y].id);
    }
  }
  if (label_pairs.empty() && node_pairs.empty()) {
    throw Error(ErrorCode::IndistinguishableSwap,
                "every label swap leaves the caption structurally unchanged");
  }

  // The fair coin decides only when both kinds are possible; a graph whose
  // code swaps are all isomorphic (e.g. a complete digraph) always swaps
  // description labels, and vice versa.
  std::vector<CaptionSample> out;
  for (std::size_t i = 0; i < n; ++i) {
    const RngKey k = key.with_lane(make_lane(kNegativeCaption, i, 0));
    CounterRng rng(k);
    bool use_description = node_pairs.empty();
    if (!label_pairs.empty() && !node_pairs.empty()) use_description = rng.coin();
    const auto& pool = use_description ? label_pairs : node_pairs;
    const auto& pick = pool[rng.uniform(pool.size())];
    EditRecord r;
    r.kind = SampleKind::NegativeCaption;
    r.index = out.size();
    r.key = k;
    r.caption_source = use_description ? CaptionSource::Description : CaptionSource::Code;
    r.swapped = pick;
    std::string text = replay_caption(g, d, r);
    if (text == d.joined_text || text == positive) {
      throw Error(ErrorCode::IndistinguishableSwap, "swap reproduced the true caption");
    }
    out.push_back({std::move(text), std::move(r)});
  }
  return out;
}

SceneGraph replay_image(const DiagramGraph& g, const SceneGraph& s, const EditRecord& record) {
  (void)g;
  if (record.kind == SampleKind::PositiveImage) return apply_positive_record(s, record);
  if (record.kind == SampleKind::NegativeImage) {
    return apply_positive_record(apply_arrow_perturbation(s, record.reversed, record.removed),
                                 record);
  }
  throw Error(ErrorCode::InvalidArgument, "record does not describe an image");
}

std::string replay_caption(const DiagramGraph& g, const Description& d, const EditRecord& record) {
  (void)d;
  if (record.kind == SampleKind::PositiveCaption) {
    DiagramGraph variant = g;
    variant.direction = record.caption_direction;
    return emit_code(variant).text;
  }
  if (record.kind != SampleKind::NegativeCaption) {
    throw Error(ErrorCode::InvalidArgument, "record does not describe a caption");
  }
  if (record.caption_source == CaptionSource::Description) {
    return swap_description_labels(g, record.swapped.first, record.swapped.second).joined_text;
  }
  return emit_code(swap_node_labels(g, record.swapped.first, record.swapped.second)).text;
}

HardSampleSet make_hard_sample_set(const DiagramGraph& g, const SceneGraph& s,
                                   const Description& d, const HardSampleConfig& cfg,
                                   const RngKey& key) {
  HardSampleSet set;
  auto pos = hard_positive_images(g, s, cfg.positive_images, key, cfg.move_range, &set.skipped);
  auto neg = hard_negative_images(g, s, cfg.negative_images, key, cfg.move_range,
                                  &set.resample_events, &set.skipped);
  for (auto& x : pos) {
    set.positive_images.push_back(std::move(x.scene));
    set.provenance.push_back(std::move(x.record));
  }
  for (auto& x : neg) {
    set.negative_images.push_back(std::move(x.scene));
    set.provenance.push_back(std::move(x.record));
  }
  for (std::size_t i = 0; i < cfg.positive_captions; ++i) {
    EditRecord r;
    r.kind = SampleKind::PositiveCaption;
    r.index = i;
    r.key = key;
    r.caption_source = CaptionSource::Code;
    const Direction other =
        g.direction == Direction::TopDown ? Direction::BottomUp : Direction::TopDown;
    r.caption_direction = i % 2 == 0 ? g.direction : other;
    set.positive_captions.push_back(replay_caption(g, d, r));
    set.provenance.push_back(std::move(r));
  }
  auto captions =
      hard_negative_captions(g, d, cfg.negative_captions, key);
  for (auto& c : captions) {
    set.negative_captions.push_back(std::move(c.text));
    set.provenance.push_back(std::move(c.record));
  }
  return set;
}

}  // namespace pseudodiag
