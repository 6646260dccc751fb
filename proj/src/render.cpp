#include "pseudodiag/render.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "pseudodiag/error.hpp"
#include "text_util.hpp"

namespace pseudodiag {

namespace lm = layout_metrics;

const PlacedShape* SceneGraph::find(std::string_view node_id) const {
  for (const auto& s : shapes) {
    if (s.node_id == node_id) return &s;
  }
  return nullptr;
}

namespace {

constexpr double kBidirectionalOffset = 6.0;
constexpr double kElbowClearance = 24.0;

std::vector<std::size_t> longest_path_layers(const DiagramGraph& g) {
  const std::size_t n = g.nodes.size();
  std::vector<std::vector<std::size_t>> out(n);
  for (const auto& e : g.edges) {
    out[*g.index_of(e.from)].push_back(*g.index_of(e.to));
  }

  // DFS in node order; an edge into a node still on the stack closes a cycle.
  std::vector<int> state(n, 0);
  std::vector<std::vector<std::size_t>> dag(n);
  std::vector<std::size_t> finish;
  std::function<void(std::size_t)> visit = [&](std::size_t u) {
    state[u] = 1;
    for (std::size_t v : out[u]) {
      if (state[v] == 1) continue;
      dag[u].push_back(v);
      if (state[v] == 0) visit(v);
    }
    state[u] = 2;
    finish.push_back(u);
  };
  for (std::size_t u = 0; u < n; ++u) {
    if (state[u] == 0) visit(u);
  }

  std::vector<std::size_t> layer(n, 0);
  for (auto it = finish.rbegin(); it != finish.rend(); ++it) {
    for (std::size_t v : dag[*it]) layer[v] = std::max(layer[v], layer[*it] + 1);
  }
  return layer;
}

PlacedShape make_shape(const Node& node) {
  PlacedShape s;
  s.node_id = node.id;
  s.label = node.label;
  const double text = lm::kLabelPadding +
                      lm::kCharWidth * static_cast<double>(detail::utf8_length(node.label));
  if (node.kind == NodeKind::Question) {
    s.form = ShapeForm::Diamond;
    s.width = text + lm::kDiamondExtraWidth;
    s.height = lm::kDiamondHeight;
  } else {
    s.form = ShapeForm::Rectangle;
    s.width = text;
    s.height = lm::kBoxHeight;
  }
  return s;
}

Point sub(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
Point add(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
Point scale(Point a, double k) { return {a.x * k, a.y * k}; }
double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }

// First crossing of the ray origin + t*dir (t > 0) with the shape border.
Point ray_exit(const PlacedShape& shape, Point origin, Point dir) {
  const auto poly = shape_outline(shape);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point q0 = poly[i];
    const Point edge = sub(poly[(i + 1) % poly.size()], q0);
    const double denom = cross(dir, edge);
    if (std::abs(denom) < 1e-12) continue;
    const Point w = sub(q0, origin);
    const double t = cross(w, edge) / denom;
    const double u = cross(w, dir) / denom;
    if (t > 1e-9 && u >= -1e-9 && u <= 1.0 + 1e-9) best = std::min(best, t);
  }
  if (!std::isfinite(best)) return origin;
  return add(origin, scale(dir, best));
}

std::vector<Point> route(const PlacedShape& a, const PlacedShape& b, bool bidirectional) {
  if (a.center.y == b.center.y) {
    // Same row: leave and enter through the bottom (left-to-right) or the top.
    const double side = a.center.x < b.center.x ? 1.0 : -1.0;
    const double level = std::max(a.height, b.height) / 2.0 + kElbowClearance;
    return {{a.center.x, a.center.y + side * a.height / 2.0},
            {a.center.x, a.center.y + side * level},
            {b.center.x, b.center.y + side * level},
            {b.center.x, b.center.y + side * b.height / 2.0}};
  }
  const Point d = sub(b.center, a.center);
  const double len = std::hypot(d.x, d.y);
  const Point dir = scale(d, 1.0 / len);
  Point offset{0.0, 0.0};
  if (bidirectional) offset = scale(Point{-dir.y, dir.x}, kBidirectionalOffset);
  const Point start = ray_exit(a, add(a.center, offset), dir);
  const Point end = ray_exit(b, add(b.center, offset), scale(dir, -1.0));
  return {start, end};
}

bool boxes_clear(const PlacedShape& a, const PlacedShape& b) {
  const double gx = std::abs(a.center.x - b.center.x) - (a.width + b.width) / 2.0;
  const double gy = std::abs(a.center.y - b.center.y) - (a.height + b.height) / 2.0;
  return gx >= lm::kShapeMargin || gy >= lm::kShapeMargin;
}

bool on_canvas(const PlacedShape& s, double w, double h) {
  return s.center.x - s.width / 2.0 >= 0.0 && s.center.x + s.width / 2.0 <= w &&
         s.center.y - s.height / 2.0 >= 0.0 && s.center.y + s.height / 2.0 <= h;
}

bool placement_ok(const SceneGraph& s) {
  for (std::size_t i = 0; i < s.shapes.size(); ++i) {
    if (!on_canvas(s.shapes[i], s.width, s.height)) return false;
    for (std::size_t j = i + 1; j < s.shapes.size(); ++j) {
      if (!boxes_clear(s.shapes[i], s.shapes[j])) return false;
    }
  }
  return true;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) { return detail::format_decimal(v, 2); }

}  // namespace

std::vector<Point> shape_outline(const PlacedShape& s) {
  const double hw = s.width / 2.0, hh = s.height / 2.0;
  const Point c = s.center;
  if (s.form == ShapeForm::Diamond) {
    return {{c.x, c.y - hh}, {c.x + hw, c.y}, {c.x, c.y + hh}, {c.x - hw, c.y}};
  }
  return {{c.x - hw, c.y - hh}, {c.x + hw, c.y - hh}, {c.x + hw, c.y + hh}, {c.x - hw, c.y + hh}};
}

double distance_to_border(const PlacedShape& shape, Point p) {
  const auto poly = shape_outline(shape);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point a = poly[i];
    const Point ab = sub(poly[(i + 1) % poly.size()], a);
    const Point ap = sub(p, a);
    const double t = std::clamp((ap.x * ab.x + ap.y * ab.y) / (ab.x * ab.x + ab.y * ab.y), 0.0, 1.0);
    const Point q = add(a, scale(ab, t));
    best = std::min(best, std::hypot(p.x - q.x, p.y - q.y));
  }
  return best;
}

void reroute_arrows(SceneGraph& s) {
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& a : s.arrows) pairs.emplace(a.from, a.to);
  for (auto& a : s.arrows) {
    const PlacedShape* from = s.find(a.from);
    const PlacedShape* to = s.find(a.to);
    if (!from || !to) {
      throw Error(ErrorCode::UnknownId, "arrow " + a.from + " -> " + a.to + " has no shape");
    }
    a.waypoints = route(*from, *to, pairs.count({a.to, a.from}) > 0);
  }
}

SceneGraph layout(const DiagramGraph& g) {
  require_valid(g);
  SceneGraph scene;
  scene.direction = g.direction;
  if (g.nodes.empty()) {
    scene.width = scene.height = 2.0 * lm::kCanvasMargin;
    return scene;
  }
  const auto layer = longest_path_layers(g);
  const std::size_t layers = *std::max_element(layer.begin(), layer.end()) + 1;

  for (const auto& n : g.nodes) scene.shapes.push_back(make_shape(n));
  double tallest = 0.0;
  for (const auto& s : scene.shapes) tallest = std::max(tallest, s.height);

  std::vector<std::vector<std::size_t>> members(layers);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) members[layer[i]].push_back(i);
  double min_left = std::numeric_limits<double>::infinity();
  double max_right = -min_left;
  for (auto& row : members) {
    std::sort(row.begin(), row.end(), [&](std::size_t a, std::size_t b) {
      return node_id_less(g.nodes[a].id, g.nodes[b].id);
    });
    std::vector<double> xs{0.0};
    for (std::size_t k = 1; k < row.size(); ++k) {
      const double pair = (scene.shapes[row[k - 1]].width + scene.shapes[row[k]].width) / 2.0;
      xs.push_back(xs.back() + std::max(lm::kColumnPitch, pair + lm::kMinColumnGap));
    }
    const double mid = xs.back() / 2.0;
    for (std::size_t k = 0; k < row.size(); ++k) {
      auto& s = scene.shapes[row[k]];
      s.center.x = xs[k] - mid;
      min_left = std::min(min_left, s.center.x - s.width / 2.0);
      max_right = std::max(max_right, s.center.x + s.width / 2.0);
    }
  }

  scene.width = max_right - min_left + 2.0 * lm::kCanvasMargin;
  scene.height = 2.0 * lm::kCanvasMargin + tallest +
                 static_cast<double>(layers - 1) * lm::kLayerPitch;
  for (std::size_t i = 0; i < scene.shapes.size(); ++i) {
    auto& s = scene.shapes[i];
    s.center.x += lm::kCanvasMargin - min_left;
    s.center.y = lm::kCanvasMargin + tallest / 2.0 +
                 static_cast<double>(layer[i]) * lm::kLayerPitch;
    if (g.direction == Direction::BottomUp) s.center.y = scene.height - s.center.y;
  }
  for (const auto& e : g.edges) scene.arrows.push_back(Arrow{e.from, e.to, {}});
  reroute_arrows(scene);
  return scene;
}

std::string to_svg(const SceneGraph& s) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(s.width)
     << "\" height=\"" << num(s.height) << "\" viewBox=\"0 0 " << num(s.width) << ' '
     << num(s.height) << "\" data-direction=\""
     << (s.direction == Direction::TopDown ? "TD" : "BT") << "\">\n"
     << "<defs><marker id=\"arrowhead\" markerWidth=\"10\" markerHeight=\"8\" refX=\"10\" "
        "refY=\"4\" orient=\"auto\" markerUnits=\"userSpaceOnUse\">"
        "<path class=\"arrowhead\" d=\"M 0 0 L 10 4 L 0 8 Z\" fill=\"#333333\"/>"
        "</marker></defs>\n";

  std::vector<const PlacedShape*> order;
  for (const auto& shape : s.shapes) order.push_back(&shape);
  std::stable_sort(order.begin(), order.end(), [](const PlacedShape* a, const PlacedShape* b) {
    return node_id_less(a->node_id, b->node_id);
  });
  for (const PlacedShape* sh : order) {
    const std::string id = xml_escape(sh->node_id);
    if (sh->form == ShapeForm::Rectangle) {
      os << "<rect class=\"node\" data-node=\"" << id << "\" x=\""
         << num(sh->center.x - sh->width / 2.0) << "\" y=\""
         << num(sh->center.y - sh->height / 2.0) << "\" width=\"" << num(sh->width)
         << "\" height=\"" << num(sh->height)
         << "\" rx=\"4\" fill=\"#ffffff\" stroke=\"#333333\"/>\n";
    } else {
      os << "<polygon class=\"node\" data-node=\"" << id << "\" points=\"";
      const auto pts = shape_outline(*sh);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        os << (i ? " " : "") << num(pts[i].x) << ',' << num(pts[i].y);
      }
      os << "\" fill=\"#ffffff\" stroke=\"#333333\"/>\n";
    }
    os << "<text class=\"label\" data-node=\"" << id << "\" x=\"" << num(sh->center.x)
       << "\" y=\"" << num(sh->center.y)
       << "\" text-anchor=\"middle\" dominant-baseline=\"central\" "
          "font-family=\"monospace\" font-size=\"12\">"
       << xml_escape(sh->label) << "</text>\n";
  }
  for (const auto& a : s.arrows) {
    os << "<path class=\"edge\" data-from=\"" << xml_escape(a.from) << "\" data-to=\""
       << xml_escape(a.to) << "\" d=\"";
    for (std::size_t i = 0; i < a.waypoints.size(); ++i) {
      os << (i ? " L " : "M ") << num(a.waypoints[i].x) << ' ' << num(a.waypoints[i].y);
    }
    os << "\" fill=\"none\" stroke=\"#333333\" marker-end=\"url(#arrowhead)\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

namespace {

struct Tag {
  std::string name;
  std::map<std::string, std::string> attrs;
  std::string text;  // character data up to the next tag
};

std::string xml_unescape(std::string_view s) {
  static const std::pair<std::string_view, char> kEntities[] = {
      {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&apos;", '\''}};
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    bool matched = false;
    if (s[i] == '&') {
      for (const auto& [ent, c] : kEntities) {
        if (s.substr(i, ent.size()) == ent) {
          out += c;
          i += ent.size();
          matched = true;
          break;
        }
      }
    }
    if (!matched) out += s[i++];
  }
  return out;
}

[[noreturn]] void svg_error(const std::string& msg) {
  throw Error(ErrorCode::SyntaxError, "SVG scene: " + msg);
}

std::vector<Tag> scan_tags(std::string_view svg) {
  std::vector<Tag> tags;
  std::size_t i = 0;
  while ((i = svg.find('<', i)) != std::string_view::npos) {
    const std::size_t close = svg.find('>', i);
    if (close == std::string_view::npos) svg_error("unterminated tag");
    std::string_view body = svg.substr(i + 1, close - i - 1);
    i = close + 1;
    if (body.empty() || body.front() == '?' || body.front() == '!' || body.front() == '/') {
      continue;
    }
    if (body.back() == '/') body.remove_suffix(1);
    Tag t;
    std::size_t p = 0;
    while (p < body.size() && !detail::is_space(body[p])) t.name += body[p++];
    while (p < body.size()) {
      while (p < body.size() && detail::is_space(body[p])) ++p;
      if (p >= body.size()) break;
      const std::size_t eq = body.find('=', p);
      if (eq == std::string_view::npos || eq + 1 >= body.size() || body[eq + 1] != '"') {
        svg_error("malformed attribute in <" + t.name + ">");
      }
      const std::size_t end = body.find('"', eq + 2);
      if (end == std::string_view::npos) svg_error("unterminated attribute value");
      t.attrs[std::string(detail::trim(body.substr(p, eq - p)))] =
          xml_unescape(body.substr(eq + 2, end - eq - 2));
      p = end + 1;
    }
    const std::size_t next = svg.find('<', i);
    t.text = xml_unescape(svg.substr(i, next == std::string_view::npos ? svg.size() - i : next - i));
    tags.push_back(std::move(t));
  }
  return tags;
}

double attr_number(const Tag& t, const std::string& key) {
  const auto it = t.attrs.find(key);
  if (it == t.attrs.end()) svg_error("<" + t.name + "> lacks '" + key + "'");
  std::istringstream is(it->second);
  double v = 0.0;
  if (!(is >> v)) svg_error("bad number in '" + key + "'");
  return v;
}

const std::string& attr(const Tag& t, const std::string& key) {
  const auto it = t.attrs.find(key);
  if (it == t.attrs.end()) svg_error("<" + t.name + "> lacks '" + key + "'");
  return it->second;
}

std::vector<double> numbers_in(std::string_view s) {
  std::vector<double> v;
  std::string cleaned;
  for (char c : s) cleaned += (c == ',' || std::isalpha(static_cast<unsigned char>(c))) ? ' ' : c;
  std::istringstream is(cleaned);
  double x = 0.0;
  while (is >> x) v.push_back(x);
  return v;
}

}  // namespace

SceneGraph parse_svg_scene(std::string_view svg) {
  const auto tags = scan_tags(svg);
  SceneGraph s;
  bool have_root = false;
  std::map<std::string, std::string> labels;
  for (const auto& t : tags) {
    if (t.name == "svg") {
      have_root = true;
      s.width = attr_number(t, "width");
      s.height = attr_number(t, "height");
      const auto& dir = attr(t, "data-direction");
      if (dir != "TD" && dir != "BT") svg_error("data-direction must be TD or BT");
      s.direction = dir == "TD" ? Direction::TopDown : Direction::BottomUp;
    } else if (t.name == "rect" && t.attrs.count("data-node")) {
      PlacedShape sh;
      sh.node_id = attr(t, "data-node");
      sh.form = ShapeForm::Rectangle;
      sh.width = attr_number(t, "width");
      sh.height = attr_number(t, "height");
      sh.center = {attr_number(t, "x") + sh.width / 2.0, attr_number(t, "y") + sh.height / 2.0};
      s.shapes.push_back(std::move(sh));
    } else if (t.name == "polygon" && t.attrs.count("data-node")) {
      const auto v = numbers_in(attr(t, "points"));
      if (v.size() != 8) svg_error("diamond needs 4 points");
      PlacedShape sh;
      sh.node_id = attr(t, "data-node");
      sh.form = ShapeForm::Diamond;
      sh.center = {v[0], v[3]};
      sh.width = 2.0 * (v[2] - v[0]);
      sh.height = 2.0 * (v[3] - v[1]);
      s.shapes.push_back(std::move(sh));
    } else if (t.name == "text" && t.attrs.count("data-node")) {
      labels[attr(t, "data-node")] = t.text;
    } else if (t.name == "path" && t.attrs.count("data-from")) {
      Arrow a;
      a.from = attr(t, "data-from");
      a.to = attr(t, "data-to");
      const auto v = numbers_in(attr(t, "d"));
      if (v.size() < 4 || v.size() % 2) svg_error("edge path needs at least 2 points");
      for (std::size_t k = 0; k < v.size(); k += 2) a.waypoints.push_back({v[k], v[k + 1]});
      s.arrows.push_back(std::move(a));
    }
  }
  if (!have_root) svg_error("missing <svg> root");
  for (auto& sh : s.shapes) {
    const auto it = labels.find(sh.node_id);
    if (it == labels.end()) svg_error("shape " + sh.node_id + " has no label");
    sh.label = it->second;
  }
  for (const auto& a : s.arrows) {
    if (!s.find(a.from) || !s.find(a.to)) svg_error("edge references unknown node");
  }
  return s;
}

DiagramGraph scene_to_graph(const SceneGraph& s) {
  DiagramGraph g;
  g.direction = s.direction;
  for (const auto& sh : s.shapes) {
    g.nodes.push_back(Node{sh.node_id, sh.label,
                           sh.form == ShapeForm::Diamond ? NodeKind::Question
                                                         : NodeKind::Statement});
  }
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& a : s.arrows) {
    if (seen.emplace(a.from, a.to).second) g.edges.push_back({a.from, a.to});
  }
  return g;
}

SceneGraph apply_scene_edit(const SceneGraph& s, const SceneEdit& edit) {
  SceneGraph out = s;
  if (std::holds_alternative<FlipDirection>(edit)) {
    out.direction = s.direction == Direction::TopDown ? Direction::BottomUp : Direction::TopDown;
    for (auto& sh : out.shapes) sh.center.y = out.height - sh.center.y;
    reroute_arrows(out);
    return out;
  }
  if (const auto* mv = std::get_if<MoveNode>(&edit)) {
    const auto it = std::find_if(s.shapes.begin(), s.shapes.end(),
                                 [&](const PlacedShape& sh) { return sh.node_id == mv->node_id; });
    if (it == s.shapes.end()) throw Error(ErrorCode::UnknownId, "no node '" + mv->node_id + "'");
    const auto idx = static_cast<std::size_t>(it - s.shapes.begin());
    double dx = mv->dx, dy = mv->dy;
    for (int attempt = 0; attempt < 4; ++attempt) {
      out.shapes[idx].center = {it->center.x + dx, it->center.y + dy};
      if (placement_ok(out)) {
        reroute_arrows(out);
        return out;
      }
      dx /= 2.0;
      dy /= 2.0;
    }
    throw Error(ErrorCode::OverlapUnresolvable,
                "moving '" + mv->node_id + "' keeps violating the shape margin");
  }
  const bool reverse = std::holds_alternative<ReverseArrow>(edit);
  const std::size_t index =
      reverse ? std::get<ReverseArrow>(edit).index : std::get<RemoveArrow>(edit).index;
  if (index >= out.arrows.size()) {
    throw Error(ErrorCode::UnknownId, "no arrow #" + std::to_string(index));
  }
  if (reverse) {
    std::swap(out.arrows[index].from, out.arrows[index].to);
  } else {
    out.arrows.erase(out.arrows.begin() + static_cast<std::ptrdiff_t>(index));
  }
  reroute_arrows(out);
  return out;
}

std::vector<std::string> check_scene(const SceneGraph& s) {
  std::vector<std::string> issues;
  std::set<std::string> ids;
  for (const auto& sh : s.shapes) {
    if (!ids.insert(sh.node_id).second) issues.push_back("duplicate shape " + sh.node_id);
    const double min_w = lm::kLabelPadding +
                         lm::kCharWidth * static_cast<double>(detail::utf8_length(sh.label));
    if (sh.width < min_w || sh.height < lm::kBoxHeight) {
      issues.push_back("shape " + sh.node_id + " too small for its label");
    }
    if (!on_canvas(sh, s.width, s.height)) issues.push_back("shape " + sh.node_id + " off canvas");
  }
  for (std::size_t i = 0; i < s.shapes.size(); ++i) {
    for (std::size_t j = i + 1; j < s.shapes.size(); ++j) {
      if (!boxes_clear(s.shapes[i], s.shapes[j])) {
        issues.push_back("shapes " + s.shapes[i].node_id + " and " + s.shapes[j].node_id +
                         " closer than the margin");
      }
    }
  }
  for (const auto& a : s.arrows) {
    const auto* from = s.find(a.from);
    const auto* to = s.find(a.to);
    if (!from || !to) {
      issues.push_back("arrow " + a.from + " -> " + a.to + " references a missing shape");
      continue;
    }
    if (a.waypoints.size() < 2) {
      issues.push_back("arrow " + a.from + " -> " + a.to + " has fewer than 2 points");
      continue;
    }
    if (distance_to_border(*from, a.waypoints.front()) > 1e-6 ||
        distance_to_border(*to, a.waypoints.back()) > 1e-6) {
      issues.push_back("arrow " + a.from + " -> " + a.to + " does not touch its shapes");
    }
  }
  return issues;
}

}  // namespace pseudodiag
