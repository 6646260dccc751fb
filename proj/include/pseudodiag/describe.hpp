#pragma once

#include <string>
#include <vector>

#include "pseudodiag/graph.hpp"

namespace pseudodiag {

// One sentence per edge, in edge order.
struct Description {
  std::vector<std::string> sentences;
  std::string joined_text;  // sentences joined by single spaces

  bool operator==(const Description&) const = default;
};

// Rule-based caption. Each question node carries a branch state that starts
// at "Yes" and advances Yes -> No -> "" -> "" with every outgoing edge:
//
//   From <source>: If **<state>**, proceed to <target>   (question source)
//   From <source>: Proceed to <target>                    (statement source)
Description describe(const DiagramGraph& g);

Description make_description(std::vector<std::string> sentences);

}  // namespace pseudodiag
