#ifndef ELSCAT_GEOMETRY_HPP
#define ELSCAT_GEOMETRY_HPP

#include <optional>
#include <variant>
#include <vector>

#include "elscat/types.hpp"

namespace elscat {

struct CircleSpec {
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
};

// Closed, non-self-intersecting, counter-clockwise.
struct PolygonSpec {
  std::vector<Vec2> vertices;
};

// Scene layout: obstacle D inside medium Omega inside the source ball
// B_{r0} inside the truncation ball B_r (all strictly nested).
struct SceneGeometry {
  std::variant<CircleSpec, PolygonSpec> obstacle{CircleSpec{Vec2::Zero(), 0.5}};
  CircleSpec omega{Vec2::Zero(), 1.0};
  double truncation_radius = 2.0;  // B_r, centered at the origin
  double source_radius = 1.5;      // r0

  bool obstacle_is_circle() const { return std::holds_alternative<CircleSpec>(obstacle); }
  const CircleSpec& obstacle_circle() const { return std::get<CircleSpec>(obstacle); }

  // max distance of the obstacle from the origin, and the nesting gaps
  double obstacle_reach() const;
  double narrowest_gap() const;

  // throws std::invalid_argument when the nesting/curve invariants fail
  void validate() const;
};

}  // namespace elscat

#endif  // ELSCAT_GEOMETRY_HPP
