#include "pseudodiag/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "pseudodiag/error.hpp"

namespace pseudodiag {

void SynthesisConfig::check() const {
  if (node_size < 2) {
    throw Error(ErrorCode::InvalidArgument, "node size must be >= 2");
  }
  if (sampling_size < 1 || max_diagrams < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "sampling size and max diagrams must be >= 1");
  }
}

namespace {

double distance(const TextElement& a, const TextElement& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

struct Candidate {
  double dist;
  std::vector<std::size_t> indices;

  bool operator<(const Candidate& o) const {
    if (dist != o.dist) return dist < o.dist;
    return indices < o.indices;
  }
};

// Depth-first enumeration in lexicographic order, keeping the best `keep`
// candidates and pruning prefixes whose partial sum already exceeds the worst
// kept one.
class NearestCombinations {
 public:
  NearestCombinations(const std::vector<TextElement>& elems, std::size_t k,
                      std::size_t keep)
      : elems_(elems), k_(k), keep_(keep) {}

  std::vector<Candidate> run() {
    chosen_.clear();
    extend(0, 0.0);
    return best_;
  }

 private:
  void extend(std::size_t start, double partial) {
    if (chosen_.size() == k_) {
      Candidate c{combination_distance(elems_, chosen_), chosen_};
      if (best_.size() < keep_ || c < best_.back()) {
        best_.insert(std::upper_bound(best_.begin(), best_.end(), c), c);
        if (best_.size() > keep_) best_.pop_back();
      }
      return;
    }
    const std::size_t need = k_ - chosen_.size();
    for (std::size_t i = start; i + need <= elems_.size(); ++i) {
      double next = partial;
      for (std::size_t j : chosen_) next += distance(elems_[j], elems_[i]);
      if (best_.size() == keep_ && next > best_.back().dist * (1.0 + 1e-12) + 1e-12) {
        continue;
      }
      chosen_.push_back(i);
      extend(i + 1, next);
      chosen_.pop_back();
    }
  }

  const std::vector<TextElement>& elems_;
  std::size_t k_;
  std::size_t keep_;
  std::vector<std::size_t> chosen_;
  std::vector<Candidate> best_;
};

}  // namespace

double combination_distance(const std::vector<TextElement>& elements,
                            const std::vector<std::size_t>& indices) {
  double d = 0.0;
  for (std::size_t a = 0; a < indices.size(); ++a) {
    for (std::size_t b = a + 1; b < indices.size(); ++b) {
      d += distance(elements[indices[a]], elements[indices[b]]);
    }
  }
  return d;
}

std::vector<NodeCombination> select_combinations(const OcrDocument& doc,
                                                 const SynthesisConfig& cfg) {
  cfg.check();
  if (doc.elements.size() < cfg.node_size) {
    throw Error(ErrorCode::TooFewElements,
                "'" + doc.source_id + "' has " + std::to_string(doc.elements.size()) +
                    " text elements, need " + std::to_string(cfg.node_size));
  }
  NearestCombinations search(doc.elements, cfg.node_size, cfg.sampling_size);
  std::vector<NodeCombination> out;
  for (auto& c : search.run()) {
    NodeCombination nc;
    nc.dist = c.dist;
    for (std::size_t i : c.indices) nc.elements.push_back(doc.elements[i]);
    nc.indices = std::move(c.indices);
    out.push_back(std::move(nc));
  }
  return out;
}

std::vector<DiagramGraph> random_connections(const NodeCombination& c,
                                             const SynthesisConfig& cfg,
                                             std::uint64_t image_index,
                                             std::uint64_t combo_index) {
  cfg.check();
  const std::size_t n = c.elements.size();
  if (n < 2) {
    throw Error(ErrorCode::TooFewElements, "a combination needs at least 2 elements");
  }

  // n1 is the topmost element.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ea = c.elements[a];
    const auto& eb = c.elements[b];
    if (ea.y != eb.y) return ea.y < eb.y;
    return ea.x < eb.x;
  });
  std::vector<Node> nodes;
  for (std::size_t r = 0; r < n; ++r) {
    nodes.push_back(make_node("n" + std::to_string(r + 1), c.elements[order[r]].text));
  }

  CounterRng rng(RngKey{cfg.seed, image_index, combo_index, 0, 0});
  std::vector<DiagramGraph> out;
  std::set<std::vector<std::pair<std::size_t, std::size_t>>> seen;
  std::size_t budget = 16 * cfg.max_diagrams + 64;

  while (out.size() < cfg.max_diagrams && budget-- > 0) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n - 1; i > 0; --i) {
      std::swap(perm[i], perm[rng.uniform(i + 1)]);
    }
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const std::size_t a = std::min(perm[k], perm[k + 1]);
      const std::size_t b = std::max(perm[k], perm[k + 1]);
      adj[a][b] = 1;
    }
    std::vector<char> chain = [&] {
      std::vector<char> flat;
      for (const auto& row : adj) flat.insert(flat.end(), row.begin(), row.end());
      return flat;
    }();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j || chain[i * n + j]) continue;
        if (rng.coin()) adj[i][j] = 1;
      }
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (adj[i][j]) pairs.emplace_back(i, j);
      }
    }
    if (!seen.insert(pairs).second) continue;

    DiagramGraph g;
    g.nodes = nodes;
    for (const auto& [i, j] : pairs) g.edges.push_back({nodes[i].id, nodes[j].id});
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<PseudoDiagram> synthesize(const OcrDocument& doc,
                                      const SynthesisConfig& cfg,
                                      std::uint64_t image_index) {
  const auto combos = select_combinations(doc, cfg);
  std::vector<PseudoDiagram> out;
  for (std::size_t ci = 0; ci < combos.size(); ++ci) {
    auto graphs = random_connections(combos[ci], cfg, image_index, ci);
    for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
      PseudoDiagram d;
      d.code = emit_code(graphs[gi]);
      d.description = describe(graphs[gi]);
      d.graph = std::move(graphs[gi]);
      d.combo_index = ci;
      d.variant_index = gi;
      d.key = RngKey{cfg.seed, image_index, ci, gi + 1, 0};
      out.push_back(std::move(d));
    }
  }
  return out;
}

}  // namespace pseudodiag
