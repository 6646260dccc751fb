#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pseudodiag/graph.hpp"

namespace pseudodiag {

// Flowchart code in the supported Mermaid subset:
//
//   diagram   = header , { "\n" , line } ;
//   header    = "flowchart" , ws , ("TD" | "BT") ;
//   line      = node_def | edge_def | "" ;
//   node_def  = id , ( "[" , label , "]" | "{" , label , "}" ) ;
//   edge_def  = id , ws , "-->" , ws , id ;
//   id        = "n" , digit , { digit } ;
//
// Inside labels, '[', ']', '{', '}' and '\' are written with a leading '\'.
struct DiagramCode {
  std::string text;

  bool operator==(const DiagramCode&) const = default;
};

struct Diagnostic {
  std::size_t line = 0;
  std::size_t column = 0;
  std::string message;
};

struct ParsedCode {
  DiagramGraph graph;
  std::vector<Diagnostic> warnings;
};

// Header, one definition per node in node order (statements as id[label],
// questions as id{label}), then one "a --> b" line per edge. No trailing
// newline. Requires a valid graph.
DiagramCode emit_code(const DiagramGraph& g);

// Throws ParseError with code SyntaxError, UnknownNodeReference,
// DuplicateNodeId, DuplicateEdge or InvalidGraph (self-loop). The node kind
// follows the bracket style; a label whose '?' suffix disagrees is reported
// as a warning.
ParsedCode parse_code_with_diagnostics(std::string_view code);

DiagramGraph parse_code(std::string_view code);

std::string escape_label(std::string_view label);

}  // namespace pseudodiag
