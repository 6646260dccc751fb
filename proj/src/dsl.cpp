#include "pseudodiag/dsl.hpp"

#include <set>

#include "pseudodiag/error.hpp"
#include "text_util.hpp"

namespace pseudodiag {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_blank(char c) { return c == ' ' || c == '\t'; }

// Cursor over one line. Columns are 1-based positions in the raw line.
class LineCursor {
 public:
  LineCursor(std::string_view line, std::size_t line_no)
      : line_(line), line_no_(line_no) {}

  bool done() const { return pos_ >= line_.size(); }
  char peek() const { return line_[pos_]; }
  std::size_t column() const { return pos_ + 1; }
  std::size_t line_no() const { return line_no_; }

  void skip_blanks() {
    while (!done() && is_blank(peek())) ++pos_;
  }

  bool skip_required_blanks() {
    const std::size_t start = pos_;
    skip_blanks();
    return pos_ > start;
  }

  bool consume(std::string_view lit) {
    if (line_.substr(pos_).substr(0, lit.size()) != lit) return false;
    pos_ += lit.size();
    return true;
  }

  char take() { return line_[pos_++]; }

  [[noreturn]] void fail(std::string expected) const {
    std::string msg = "line " + std::to_string(line_no_) + ", column " +
                      std::to_string(column()) + ": expected " + expected;
    throw ParseError(ErrorCode::SyntaxError, line_no_, column(), std::move(expected),
                     msg);
  }

  std::string read_id() {
    if (done() || peek() != 'n') fail("node id 'n<digits>'");
    ++pos_;
    if (done() || !is_digit(peek())) fail("digit after 'n'");
    std::string id = "n";
    while (!done() && is_digit(peek())) id += take();
    return id;
  }

 private:
  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string escape_label(std::string_view label) {
  std::string out;
  out.reserve(label.size());
  for (char c : label) {
    if (c == '[' || c == ']' || c == '{' || c == '}' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

DiagramCode emit_code(const DiagramGraph& g) {
  require_valid(g);
  std::string s = g.direction == Direction::TopDown ? "flowchart TD" : "flowchart BT";
  for (const auto& n : g.nodes) {
    const bool q = n.kind == NodeKind::Question;
    s += '\n';
    s += n.id;
    s += q ? '{' : '[';
    s += escape_label(n.label);
    s += q ? '}' : ']';
  }
  for (const auto& e : g.edges) {
    s += '\n';
    s += e.from;
    s += " --> ";
    s += e.to;
  }
  return DiagramCode{std::move(s)};
}

ParsedCode parse_code_with_diagnostics(std::string_view code) {
  ParsedCode out;
  const auto lines = detail::split(code, '\n');

  struct PendingEdge {
    Edge edge;
    std::size_t line;
    std::size_t column;
  };
  std::vector<PendingEdge> pending;
  std::set<std::string> ids;
  std::set<std::pair<std::string, std::string>> seen_edges;
  bool have_header = false;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    // Trailing blanks and a CR are tolerated.
    std::string_view raw = lines[i];
    while (!raw.empty() && (is_blank(raw.back()) || raw.back() == '\r')) {
      raw.remove_suffix(1);
    }
    LineCursor body(raw, line_no);
    body.skip_blanks();
    if (body.done()) continue;

    if (!have_header) {
      if (!body.consume("flowchart")) body.fail("'flowchart' header");
      if (!body.skip_required_blanks()) body.fail("whitespace after 'flowchart'");
      if (body.consume("TD")) {
        out.graph.direction = Direction::TopDown;
      } else if (body.consume("BT")) {
        out.graph.direction = Direction::BottomUp;
      } else {
        body.fail("direction 'TD' or 'BT'");
      }
      if (!body.done()) body.fail("end of header line");
      have_header = true;
      continue;
    }

    const std::size_t id_column = body.column();
    std::string id = body.read_id();
    if (!body.done() && (body.peek() == '[' || body.peek() == '{')) {
      const bool question = body.take() == '{';
      const char close = question ? '}' : ']';
      std::string label;
      bool closed = false;
      while (!body.done()) {
        const char c = body.take();
        if (c == '\\') {
          if (body.done()) body.fail("escaped character after '\\'");
          label += body.take();
        } else if (c == close) {
          closed = true;
          break;
        } else if (c == ']' || c == '}') {
          body.fail(std::string("'") + close + "' to close label");
        } else {
          label += c;
        }
      }
      if (!closed) body.fail(std::string("'") + close + "' to close label");
      if (!body.done()) body.fail("end of line after node definition");
      if (detail::trim(label).empty()) {
        throw ParseError(ErrorCode::SyntaxError, line_no, id_column, "non-empty label",
                         "line " + std::to_string(line_no) + ": empty label for " + id);
      }
      if (!ids.insert(id).second) {
        throw ParseError(ErrorCode::DuplicateNodeId, line_no, id_column, "unique node id",
                         "line " + std::to_string(line_no) + ": node '" + id +
                             "' defined twice");
      }
      const NodeKind kind = question ? NodeKind::Question : NodeKind::Statement;
      if (kind != kind_for_label(label)) {
        out.warnings.push_back(
            {line_no, id_column,
             "node '" + id + "' uses " + (question ? "{...}" : "[...]") +
                 " but its label " + (question ? "does not end" : "ends") + " with '?'"});
      }
      out.graph.nodes.push_back(Node{std::move(id), std::move(label), kind});
      continue;
    }

    if (!body.skip_required_blanks()) body.fail("'[', '{' or whitespace before '-->'");
    if (!body.consume("-->")) body.fail("'-->'");
    if (!body.skip_required_blanks()) body.fail("whitespace after '-->'");
    std::string to = body.read_id();
    if (!body.done()) body.fail("end of line after edge");
    if (id == to) {
      throw ParseError(ErrorCode::InvalidGraph, line_no, id_column, "distinct endpoints",
                       "line " + std::to_string(line_no) + ": self-loop on " + id);
    }
    if (!seen_edges.emplace(id, to).second) {
      throw ParseError(ErrorCode::DuplicateEdge, line_no, id_column, "unique edge",
                       "line " + std::to_string(line_no) + ": duplicate edge " + id +
                           " --> " + to);
    }
    pending.push_back({Edge{std::move(id), std::move(to)}, line_no, id_column});
  }

  if (!have_header) {
    throw ParseError(ErrorCode::SyntaxError, 1, 1, "'flowchart' header",
                     "line 1, column 1: expected 'flowchart' header");
  }
  for (auto& p : pending) {
    for (const auto* end : {&p.edge.from, &p.edge.to}) {
      if (!ids.count(*end)) {
        throw ParseError(ErrorCode::UnknownNodeReference, p.line, p.column,
                         "defined node id",
                         "line " + std::to_string(p.line) + ": edge references undefined node '" +
                             *end + "'");
      }
    }
    out.graph.edges.push_back(std::move(p.edge));
  }
  return out;
}

DiagramGraph parse_code(std::string_view code) {
  return parse_code_with_diagnostics(code).graph;
}

}  // namespace pseudodiag
