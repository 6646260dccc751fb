#include "pseudodiag/describe.hpp"

#include <map>

#include "text_util.hpp"

namespace pseudodiag {

Description make_description(std::vector<std::string> sentences) {
  Description d;
  d.joined_text = detail::join(sentences, " ");
  d.sentences = std::move(sentences);
  return d;
}

Description describe(const DiagramGraph& g) {
  require_valid(g);
  std::map<std::string, std::string> branch;
  for (const auto& n : g.nodes) branch[n.id] = "Yes";

  std::vector<std::string> sentences;
  sentences.reserve(g.edges.size());
  for (const auto& e : g.edges) {
    const Node& from = *g.find(e.from);
    const Node& to = *g.find(e.to);
    std::string t = "From " + from.label + ": ";
    if (from.kind == NodeKind::Question) {
      std::string& state = branch[from.id];
      t += "If **" + state + "**, proceed to ";
      state = state == "Yes" ? "No" : "";
    } else {
      t += "Proceed to ";
    }
    t += to.label;
    sentences.push_back(std::move(t));
  }
  return make_description(std::move(sentences));
}

}  // namespace pseudodiag
