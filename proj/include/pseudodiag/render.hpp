#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pseudodiag/graph.hpp"

namespace pseudodiag {

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

enum class ShapeForm { Rectangle, Diamond };

struct PlacedShape {
  std::string node_id;
  ShapeForm form = ShapeForm::Rectangle;
  Point center;
  double width = 0.0;
  double height = 0.0;
  std::string label;

  bool operator==(const PlacedShape&) const = default;
};

// Polyline from the source border to the target border; the arrowhead sits at
// the last waypoint.
struct Arrow {
  std::string from;
  std::string to;
  std::vector<Point> waypoints;

  bool operator==(const Arrow&) const = default;
};

struct SceneGraph {
  Direction direction = Direction::TopDown;
  std::vector<PlacedShape> shapes;  // graph node order
  std::vector<Arrow> arrows;        // graph edge order
  double width = 0.0;
  double height = 0.0;

  bool operator==(const SceneGraph&) const = default;

  const PlacedShape* find(std::string_view node_id) const;
};

namespace layout_metrics {
inline constexpr double kCharWidth = 7.0;
inline constexpr double kLabelPadding = 12.0;
inline constexpr double kBoxHeight = 36.0;
inline constexpr double kDiamondExtraWidth = 40.0;
inline constexpr double kDiamondHeight = 60.0;
inline constexpr double kColumnPitch = 160.0;
inline constexpr double kMinColumnGap = 24.0;
inline constexpr double kLayerPitch = 120.0;
inline constexpr double kCanvasMargin = 40.0;
inline constexpr double kShapeMargin = 8.0;
}  // namespace layout_metrics

// Longest-path layering (edges closing a cycle are ignored for layering
// only), nodes of a layer ordered by id, layers stacked downwards for TopDown
// and upwards for BottomUp.
SceneGraph layout(const DiagramGraph& g);

// Standalone SVG 1.1 document. Shapes are written in node-id order, each
// followed by its label, then the arrows. Numbers carry at most 2 decimals.
std::string to_svg(const SceneGraph& s);

// Reads back a scene written by to_svg. Throws Error{SyntaxError} when the
// document does not have the expected structure.
SceneGraph parse_svg_scene(std::string_view svg);

// Nodes from shapes (kind from form), edges from arrows with duplicates
// collapsed, direction from the scene.
DiagramGraph scene_to_graph(const SceneGraph& s);

struct FlipDirection {
  bool operator==(const FlipDirection&) const = default;
};
struct MoveNode {
  std::string node_id;
  double dx = 0.0;
  double dy = 0.0;
  bool operator==(const MoveNode&) const = default;
};
struct ReverseArrow {
  std::size_t index = 0;
  bool operator==(const ReverseArrow&) const = default;
};
struct RemoveArrow {
  std::size_t index = 0;
  bool operator==(const RemoveArrow&) const = default;
};
using SceneEdit = std::variant<FlipDirection, MoveNode, ReverseArrow, RemoveArrow>;

// Returns the edited scene. FlipDirection mirrors the scene vertically.
// MoveNode retries with half the displacement up to 3 times when a shape would
// come within the 8-unit margin of another or leave the canvas, then throws
// Error{OverlapUnresolvable}. Unknown ids/indices throw Error{UnknownId}.
SceneGraph apply_scene_edit(const SceneGraph& s, const SceneEdit& edit);

// Recomputes every arrow's waypoints from the current shape placement.
void reroute_arrows(SceneGraph& s);

// Violations of the scene invariants (unique shapes, arrows on existing
// shapes, pairwise margin, shapes on canvas, endpoints on borders); empty when
// the scene is valid.
std::vector<std::string> check_scene(const SceneGraph& s);

// Border polygon of a shape (4 vertices).
std::vector<Point> shape_outline(const PlacedShape& shape);

// Distance from p to the shape's border.
double distance_to_border(const PlacedShape& shape, Point p);

}  // namespace pseudodiag
