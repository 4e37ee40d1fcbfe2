#ifndef ELSCAT_MESH_HPP
#define ELSCAT_MESH_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "elscat/geometry.hpp"
#include "elscat/types.hpp"

namespace elscat {

// Conforming triangulation of the full ball B_r with region labels and the
// three tagged curves. Obstacle problems simply skip the D elements.
class Mesh {
public:
  struct Tri {
    std::array<int, 3> v;
    Region region;
  };
  struct BoundaryEdge {
    std::array<int, 2> v;
    BoundaryTag tag;
  };

  std::vector<Vec2> nodes;
  std::vector<Tri> triangles;
  std::vector<BoundaryEdge> boundary_edges;
  double h = 0.0;

  // circle parameters per tag when the tagged curve is a circle
  std::array<std::optional<CircleSpec>, 3> tag_circle;

  double signed_area(int tri) const;
  double region_area(Region r) const;
  int count_region(Region r) const;

  const std::optional<CircleSpec>& circle_of(BoundaryTag t) const {
    return tag_circle[static_cast<int>(t)];
  }

  // conformity, orientation, closed tagged loops; throws on violation
  void validate() const;

  // node renumbering (testing aid for assembly order independence)
  Mesh permuted(const std::vector<int>& new_index_of) const;
};

// Structured-ring mesher for concentric circle scenes; stitches adjacent
// rings of different node counts. Non-concentric or polygonal obstacles go
// through the MSH import path.
Mesh build_scene_mesh(const SceneGeometry& geom, double h);

// MSH 2.2 ASCII. Physical tags: surfaces 1/2/3 = D/ANNULUS/SHELL,
// lines 10/20/30 = dD/dOmega/dBr. Floats carry 17 significant digits.
void write_msh(const Mesh& mesh, const std::string& path);
Mesh read_msh(const std::string& path);

}  // namespace elscat

#endif  // ELSCAT_MESH_HPP
