#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pseudodiag {

enum class NodeKind { Statement, Question };
enum class Direction { TopDown, BottomUp };

// Question iff the right-trimmed label ends with '?'.
NodeKind kind_for_label(std::string_view label);

struct Node {
  std::string id;  // n[0-9]+
  std::string label;
  NodeKind kind = NodeKind::Statement;

  bool operator==(const Node&) const = default;
};

Node make_node(std::string id, std::string label);

struct Edge {
  std::string from;
  std::string to;

  bool operator==(const Edge&) const = default;
  auto operator<=>(const Edge&) const = default;
};

struct DiagramGraph {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  Direction direction = Direction::TopDown;

  bool operator==(const DiagramGraph&) const = default;

  const Node* find(std::string_view id) const;
  std::optional<std::size_t> index_of(std::string_view id) const;
};

enum class ViolationKind {
  BadNodeId,
  DuplicateNodeId,
  EmptyLabel,
  LabelNewline,
  KindMismatch,
  DanglingEdge,
  SelfLoop,
  DuplicateEdge,
};

struct Violation {
  ViolationKind kind;
  std::string detail;
};

const char* violation_name(ViolationKind kind) noexcept;

// Every invariant violation in g; empty iff g is valid.
std::vector<Violation> validate(const DiagramGraph& g);

// Throws Error{InvalidGraph} listing the violations when g is not valid.
void require_valid(const DiagramGraph& g);

bool is_valid_node_id(std::string_view id);

// Numeric order on "n<digits>" ids (n2 < n10).
bool node_id_less(std::string_view a, std::string_view b);

// True iff some node bijection preserves labels, kinds and directed edges.
// Node order and the direction field are ignored.
bool is_isomorphic(const DiagramGraph& a, const DiagramGraph& b);

// Induced 3-node subgraphs whose undirected version is connected, ordered by
// the original node-index triple. Nodes are renamed n1..n3 in original order.
// Throws Error{TooFewNodes} for fewer than 3 nodes.
std::vector<DiagramGraph> weakly_connected_triples(const DiagramGraph& g);

bool is_weakly_connected(const DiagramGraph& g);

// Ordered (from, to) pairs, deduplicated.
std::set<std::pair<std::string, std::string>> edge_set(const DiagramGraph& g);

}  // namespace pseudodiag
