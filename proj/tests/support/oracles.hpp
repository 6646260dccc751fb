// Random inputs and brute-force reference implementations shared by the unit
// and acceptance tests. Nothing here calls the library routine it checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pseudodiag/graph.hpp"
#include "pseudodiag/loss.hpp"
#include "pseudodiag/ocr.hpp"

namespace oracle {

using namespace pseudodiag;

inline const std::vector<std::string>& label_pool() {
  static const std::vector<std::string> pool = {
      "Start",        "End",         "Is valid?",     "Retry?",      "Save [draft]",
      "Load {cfg}",   "a\\b",        "Ready ?",       "Caf\xc3\xa9", "x",
      "  padded  ",   "Done?  ",     "two words",     "[",           "}?",
      "\xe2\x9c\x93 ok", "n1",       "-->",           "Proceed",     "If **Yes**"};
  return pool;
}

// Valid graph with distinct numeric ids in shuffled order, random labels
// (possibly repeated) and a random edge subset.
inline DiagramGraph random_graph(std::mt19937_64& rng, int min_nodes, int max_nodes) {
  std::uniform_int_distribution<int> count(min_nodes, max_nodes);
  const int n = count(rng);
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 1);
  std::shuffle(ids.begin(), ids.end(), rng);
  DiagramGraph g;
  const auto& pool = label_pool();
  for (int i = 0; i < n; ++i) {
    g.nodes.push_back(make_node("n" + std::to_string(ids[i] * (rng() % 3 == 0 ? 7 : 1)),
                                pool[rng() % pool.size()]));
  }
  // Multiplying by 7 can collide; keep ids unique.
  std::set<std::string> seen;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (!seen.insert(g.nodes[i].id).second) {
      g.nodes[i].id = "n" + std::to_string(100 + i);
      seen.insert(g.nodes[i].id);
    }
  }
  std::vector<Edge> all;
  for (const auto& a : g.nodes) {
    for (const auto& b : g.nodes) {
      if (a.id != b.id) all.push_back({a.id, b.id});
    }
  }
  std::shuffle(all.begin(), all.end(), rng);
  for (const auto& e : all) {
    if (rng() % 3 == 0) g.edges.push_back(e);
  }
  g.direction = rng() % 2 ? Direction::TopDown : Direction::BottomUp;
  return g;
}

// Tries every node bijection.
inline bool brute_isomorphic(const DiagramGraph& a, const DiagramGraph& b) {
  if (a.nodes.size() != b.nodes.size()) return false;
  std::set<std::pair<std::size_t, std::size_t>> ea, eb;
  auto index = [](const DiagramGraph& g, const std::string& id) {
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      if (g.nodes[i].id == id) return i;
    }
    return g.nodes.size();
  };
  for (const auto& e : a.edges) ea.emplace(index(a, e.from), index(a, e.to));
  for (const auto& e : b.edges) eb.emplace(index(b, e.from), index(b, e.to));
  if (ea.size() != eb.size()) return false;
  std::vector<std::size_t> perm(a.nodes.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (std::size_t i = 0; i < perm.size() && ok; ++i) {
      ok = a.nodes[i].label == b.nodes[perm[i]].label && a.nodes[i].kind == b.nodes[perm[i]].kind;
    }
    if (!ok) continue;
    std::set<std::pair<std::size_t, std::size_t>> mapped;
    for (const auto& [x, y] : ea) mapped.emplace(perm[x], perm[y]);
    if (mapped == eb) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

inline OcrDocument random_document(std::mt19937_64& rng, int min_elements, int max_elements) {
  std::uniform_int_distribution<int> count(min_elements, max_elements);
  std::uniform_int_distribution<int> coord(0, 60);
  OcrDocument doc;
  doc.source_id = "rand";
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    // A coarse grid makes distance ties common.
    TextElement e;
    e.text = "w" + std::to_string(i);
    e.x = 10.0 * coord(rng);
    e.y = 10.0 * coord(rng);
    doc.elements.push_back(e);
  }
  return doc;
}

struct Combo {
  std::vector<std::size_t> indices;
  double dist;
};

// Scores every k-subset and sorts (stable, so lexicographic ties survive).
inline std::vector<Combo> exhaustive_combinations(const OcrDocument& doc, std::size_t k,
                                                  std::size_t keep) {
  const std::size_t n = doc.elements.size();
  std::vector<Combo> all;
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(k), true);
  do {
    Combo c;
    for (std::size_t i = 0; i < n; ++i) {
      if (pick[i]) c.indices.push_back(i);
    }
    c.dist = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) {
        const auto& p = doc.elements[c.indices[a]];
        const auto& q = doc.elements[c.indices[b]];
        c.dist += std::hypot(p.x - q.x, p.y - q.y);
      }
    }
    all.push_back(c);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  std::sort(all.begin(), all.end(),
            [](const Combo& a, const Combo& b) { return a.indices < b.indices; });
  std::stable_sort(all.begin(), all.end(),
                   [](const Combo& a, const Combo& b) { return a.dist < b.dist; });
  if (all.size() > keep) all.resize(keep);
  return all;
}

// Repeatedly merges any two adjacent groups whose boundary words qualify,
// until nothing changes. Returns the group texts.
inline std::vector<std::string> closure_merge(const std::vector<WordBox>& words, double y_tol) {
  std::vector<double> widths;
  for (const auto& w : words) {
    std::size_t chars = 0;
    for (unsigned char c : w.text) chars += (c & 0xC0) != 0x80;
    widths.push_back(w.width > 0 ? w.width : 8.0 * static_cast<double>(chars));
  }
  std::vector<double> sorted = widths;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  const double median = m == 0 ? 0.0 : (m % 2 ? sorted[m / 2] : (sorted[m / 2 - 1] + sorted[m / 2]) / 2);
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < words.size(); ++i) groups.push_back({i});
  auto joins = [&](std::size_t l, std::size_t r) {
    const auto& a = words[l];
    const auto& b = words[r];
    const double gap = (b.x - widths[r] / 2) - (a.x + widths[l] / 2);
    return std::abs(a.y - b.y) <= y_tol && b.x > a.x && gap <= 1.5 * median;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
      if (joins(groups[g].back(), groups[g + 1].front())) {
        groups[g].insert(groups[g].end(), groups[g + 1].begin(), groups[g + 1].end());
        groups.erase(groups.begin() + static_cast<long>(g) + 1);
        changed = true;
        break;
      }
    }
  }
  std::vector<std::string> out;
  for (const auto& g : groups) {
    std::string t;
    for (std::size_t i : g) t += (t.empty() ? "" : " ") + words[i].text;
    out.push_back(t);
  }
  return out;
}

// Loss values recomputed with plain loops straight from the definitions.
inline double scalar_abs_cos(const Vector& a, const Vector& b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return std::abs(ab) / std::sqrt(aa * bb);
}

inline double scalar_info_nce(const EmbeddingBatch& b, double t) {
  const std::size_t n = b.size();
  double i2t = 0, t2i = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0, col = 0;
    for (std::size_t j = 0; j < n; ++j) {
      row += std::exp(scalar_abs_cos(b.image_features[i], b.text_features[j]) / t);
      col += std::exp(scalar_abs_cos(b.image_features[j], b.text_features[i]) / t);
    }
    const double pos = std::exp(scalar_abs_cos(b.image_features[i], b.text_features[i]) / t);
    i2t += -std::log(pos / row);
    t2i += -std::log(pos / col);
  }
  return 0.5 * (i2t / n + t2i / n);
}

inline double scalar_aggregate(const EmbeddingBatch& b, std::size_t i, bool positive, double t) {
  const auto& imgs = positive ? b.pos_image[i] : b.neg_image[i];
  const auto& txts = positive ? b.pos_text[i] : b.neg_text[i];
  double s = 0;
  for (const auto& x : imgs) s += std::exp(scalar_abs_cos(b.image_features[i], x) / t) / imgs.size();
  for (const auto& x : txts) s += std::exp(scalar_abs_cos(b.text_features[i], x) / t) / txts.size();
  for (const auto& x : txts) s += std::exp(scalar_abs_cos(b.image_features[i], x) / t) / txts.size();
  for (const auto& x : imgs) s += std::exp(scalar_abs_cos(b.text_features[i], x) / t) / imgs.size();
  return s;
}

inline double scalar_sc(const EmbeddingBatch& b, double t) {
  double s = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double p = scalar_aggregate(b, i, true, t);
    const double q = scalar_aggregate(b, i, false, t);
    s += -std::log(p / (p + q));
  }
  return s / b.size();
}

inline EmbeddingBatch random_batch(std::mt19937_64& rng, std::size_t n, std::size_t d,
                                   std::size_t samples) {
  std::normal_distribution<double> nd;
  auto v = [&] {
    Vector x(d);
    for (auto& e : x) e = nd(rng);
    return x;
  };
  auto list = [&] {
    std::vector<Vector> l;
    for (std::size_t k = 0; k < samples; ++k) l.push_back(v());
    return l;
  };
  EmbeddingBatch b;
  for (std::size_t i = 0; i < n; ++i) {
    b.image_features.push_back(v());
    b.text_features.push_back(v());
    b.pos_image.push_back(list());
    b.pos_text.push_back(list());
    b.neg_image.push_back(list());
    b.neg_text.push_back(list());
  }
  return b;
}

}  // namespace oracle
