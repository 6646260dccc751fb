#include "pseudodiag/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

#include "pseudodiag/error.hpp"
#include "text_util.hpp"

namespace pseudodiag {

NodeKind kind_for_label(std::string_view label) {
  const auto t = detail::rtrim(label);
  return !t.empty() && t.back() == '?' ? NodeKind::Question : NodeKind::Statement;
}

Node make_node(std::string id, std::string label) {
  Node n{std::move(id), std::move(label), NodeKind::Statement};
  n.kind = kind_for_label(n.label);
  return n;
}

const Node* DiagramGraph::find(std::string_view id) const {
  for (const auto& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

std::optional<std::size_t> DiagramGraph::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id == id) return i;
  }
  return std::nullopt;
}

const char* violation_name(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::BadNodeId: return "BadNodeId";
    case ViolationKind::DuplicateNodeId: return "DuplicateNodeId";
    case ViolationKind::EmptyLabel: return "EmptyLabel";
    case ViolationKind::LabelNewline: return "LabelNewline";
    case ViolationKind::KindMismatch: return "KindMismatch";
    case ViolationKind::DanglingEdge: return "DanglingEdge";
    case ViolationKind::SelfLoop: return "SelfLoop";
    case ViolationKind::DuplicateEdge: return "DuplicateEdge";
  }
  return "Unknown";
}

bool is_valid_node_id(std::string_view id) {
  if (id.size() < 2 || id.front() != 'n') return false;
  return std::all_of(id.begin() + 1, id.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

bool node_id_less(std::string_view a, std::string_view b) {
  auto digits = [](std::string_view s) {
    s.remove_prefix(std::min<std::size_t>(1, s.size()));
    while (s.size() > 1 && s.front() == '0') s.remove_prefix(1);
    return s;
  };
  const auto da = digits(a), db = digits(b);
  if (da.size() != db.size()) return da.size() < db.size();
  if (da != db) return da < db;
  return a < b;
}

std::vector<Violation> validate(const DiagramGraph& g) {
  std::vector<Violation> out;
  std::set<std::string_view> ids;
  for (const auto& n : g.nodes) {
    if (!is_valid_node_id(n.id)) {
      out.push_back({ViolationKind::BadNodeId, "node id '" + n.id + "'"});
    }
    if (!ids.insert(n.id).second) {
      out.push_back({ViolationKind::DuplicateNodeId, "node id '" + n.id + "'"});
    }
    if (detail::trim(n.label).empty()) {
      out.push_back({ViolationKind::EmptyLabel, "node '" + n.id + "'"});
    }
    if (n.label.find_first_of("\r\n") != std::string::npos) {
      out.push_back({ViolationKind::LabelNewline, "node '" + n.id + "'"});
    }
    if (n.kind != kind_for_label(n.label)) {
      out.push_back({ViolationKind::KindMismatch,
                     "node '" + n.id + "' label '" + n.label + "'"});
    }
  }
  std::set<std::pair<std::string_view, std::string_view>> seen;
  for (const auto& e : g.edges) {
    const std::string name = e.from + " --> " + e.to;
    if (!ids.count(e.from) || !ids.count(e.to)) {
      out.push_back({ViolationKind::DanglingEdge, name});
    }
    if (e.from == e.to) {
      out.push_back({ViolationKind::SelfLoop, name});
    }
    if (!seen.emplace(e.from, e.to).second) {
      out.push_back({ViolationKind::DuplicateEdge, name});
    }
  }
  return out;
}

void require_valid(const DiagramGraph& g) {
  const auto v = validate(g);
  if (v.empty()) return;
  std::string msg = "invalid diagram graph:";
  for (const auto& x : v) {
    msg += std::string(" ") + violation_name(x.kind) + "(" + x.detail + ")";
  }
  throw Error(ErrorCode::InvalidGraph, msg);
}

std::set<std::pair<std::string, std::string>> edge_set(const DiagramGraph& g) {
  std::set<std::pair<std::string, std::string>> s;
  for (const auto& e : g.edges) s.emplace(e.from, e.to);
  return s;
}

namespace {

// Adjacency matrix by node index; nullopt when an edge endpoint is missing.
std::optional<std::vector<std::vector<char>>> adjacency(const DiagramGraph& g) {
  const std::size_t n = g.nodes.size();
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (const auto& e : g.edges) {
    const auto f = g.index_of(e.from);
    const auto t = g.index_of(e.to);
    if (!f || !t) return std::nullopt;
    adj[*f][*t] = 1;
  }
  return adj;
}

using Signature = std::tuple<std::string, NodeKind, int, int, int>;

std::vector<Signature> signatures(const DiagramGraph& g,
                                  const std::vector<std::vector<char>>& adj) {
  const std::size_t n = g.nodes.size();
  std::vector<Signature> sig;
  sig.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    int out = 0, in = 0, self = adj[i][i];
    for (std::size_t j = 0; j < n; ++j) {
      out += adj[i][j];
      in += adj[j][i];
    }
    sig.emplace_back(g.nodes[i].label, g.nodes[i].kind, out, in, self);
  }
  return sig;
}

struct Matcher {
  const std::vector<std::vector<char>>& a;
  const std::vector<std::vector<char>>& b;
  std::vector<std::vector<std::size_t>> candidates;  // per a-node
  std::vector<std::size_t> order;                    // a-nodes, most constrained first
  std::vector<std::size_t> map;                      // a -> b
  std::vector<char> used;

  bool consistent(std::size_t depth, std::size_t ai, std::size_t bi) const {
    for (std::size_t k = 0; k < depth; ++k) {
      const std::size_t aj = order[k];
      const std::size_t bj = map[aj];
      if (a[ai][aj] != b[bi][bj] || a[aj][ai] != b[bj][bi]) return false;
    }
    return true;
  }

  bool search(std::size_t depth) {
    if (depth == order.size()) return true;
    const std::size_t ai = order[depth];
    for (std::size_t bi : candidates[ai]) {
      if (used[bi] || !consistent(depth, ai, bi)) continue;
      used[bi] = 1;
      map[ai] = bi;
      if (search(depth + 1)) return true;
      used[bi] = 0;
    }
    return false;
  }
};

}  // namespace

bool is_isomorphic(const DiagramGraph& a, const DiagramGraph& b) {
  const std::size_t n = a.nodes.size();
  if (n != b.nodes.size() || edge_set(a).size() != edge_set(b).size()) {
    return false;
  }
  const auto adj_a = adjacency(a);
  const auto adj_b = adjacency(b);
  if (!adj_a || !adj_b) return false;

  const auto sig_a = signatures(a, *adj_a);
  const auto sig_b = signatures(b, *adj_b);
  {
    auto sa = sig_a, sb = sig_b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
  }

  Matcher m{*adj_a, *adj_b, {}, {}, std::vector<std::size_t>(n), std::vector<char>(n, 0)};
  m.candidates.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (sig_a[i] == sig_b[j]) m.candidates[i].push_back(j);
    }
  }
  m.order.resize(n);
  std::iota(m.order.begin(), m.order.end(), std::size_t{0});
  std::stable_sort(m.order.begin(), m.order.end(), [&](std::size_t x, std::size_t y) {
    return m.candidates[x].size() < m.candidates[y].size();
  });
  return m.search(0);
}

bool is_weakly_connected(const DiagramGraph& g) {
  const std::size_t n = g.nodes.size();
  if (n == 0) return true;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto root = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = n;
  for (const auto& e : g.edges) {
    const auto f = g.index_of(e.from);
    const auto t = g.index_of(e.to);
    if (!f || !t) continue;
    const auto rf = root(*f), rt = root(*t);
    if (rf != rt) {
      parent[rf] = rt;
      --components;
    }
  }
  return components == 1;
}

std::vector<DiagramGraph> weakly_connected_triples(const DiagramGraph& g) {
  require_valid(g);
  const std::size_t n = g.nodes.size();
  if (n < 3) {
    throw Error(ErrorCode::TooFewNodes,
                "granulation needs at least 3 nodes, got " + std::to_string(n));
  }
  const auto adj = *adjacency(g);
  auto linked = [&](std::size_t x, std::size_t y) { return adj[x][y] || adj[y][x]; };

  std::vector<DiagramGraph> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        // Three vertices are connected iff at least two of the three pairs are.
        const int pairs = linked(i, j) + linked(i, k) + linked(j, k);
        if (pairs < 2) continue;

        const std::size_t members[3] = {i, j, k};
        DiagramGraph sub;
        sub.direction = g.direction;
        for (std::size_t m = 0; m < 3; ++m) {
          Node node = g.nodes[members[m]];
          node.id = "n" + std::to_string(m + 1);
          sub.nodes.push_back(std::move(node));
        }
        for (const auto& e : g.edges) {
          const auto f = *g.index_of(e.from);
          const auto t = *g.index_of(e.to);
          const auto* pf = std::find(members, members + 3, f);
          const auto* pt = std::find(members, members + 3, t);
          if (pf == members + 3 || pt == members + 3) continue;
          sub.edges.push_back({sub.nodes[pf - members].id, sub.nodes[pt - members].id});
        }
        out.push_back(std::move(sub));
      }
    }
  }
  return out;
}

}  // namespace pseudodiag
