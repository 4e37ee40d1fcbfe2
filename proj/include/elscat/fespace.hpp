#ifndef ELSCAT_FESPACE_HPP
#define ELSCAT_FESPACE_HPP

#include <array>
#include <set>
#include <vector>

#include "elscat/mesh.hpp"
#include "elscat/types.hpp"

namespace elscat {

// Lagrange P1/P2 vector elements on triangles. Scalar nodes are mesh
// vertices plus (for P2) edge midpoints; each node carries an (x, y) pair
// of complex dofs, interleaved.
class FunctionSpace {
public:
  FunctionSpace(const Mesh& mesh, int degree);

  const Mesh& mesh() const { return *mesh_; }
  int degree() const { return degree_; }
  int nodes_per_element() const { return degree_ == 1 ? 3 : 6; }
  int n_nodes() const { return static_cast<int>(node_pos_.size()); }
  int n_dofs() const { return 2 * n_nodes(); }
  const Vec2& node_pos(int n) const { return node_pos_[n]; }

  const std::array<int, 6>& element_nodes(int t) const { return elem_nodes_[t]; }

  // Per-element quadrature bundle in physical coordinates.
  struct ElementQuadrature {
    double area = 0.0;
    std::vector<Vec2> points;
    std::vector<double> weights;               // physical weights, sum = area
    std::vector<std::array<double, 6>> shape;  // shape[q][i]
    std::vector<std::array<Vec2, 6>> grad;     // grad[q][i], physical gradients
  };
  ElementQuadrature element_quadrature(int t) const;

  // Shape values/gradients at one barycentric point (for interpolation).
  void shape_at(int t, const Vec2& x, std::array<double, 6>& n,
                std::array<Vec2, 6>* grad = nullptr) const;

  // Ordered (by angle) scalar nodes of a circular tagged curve.
  struct BoundaryRing {
    BoundaryTag tag;
    CircleSpec circle;
    std::vector<int> node_ids;
    std::vector<double> angles;   // in [0, 2 pi), strictly increasing
    bool uniform = false;         // equispaced angles
  };
  const BoundaryRing& ring(BoundaryTag tag) const;

  // Tagged boundary edges with their nodes ([2] = midpoint, -1 for P1).
  struct BoundaryEdgeNodes {
    std::array<int, 3> n{-1, -1, -1};
    BoundaryTag tag;
    int adjacent_tri[2] = {-1, -1};  // [inner side, outer side] w.r.t. the curve
  };
  const std::vector<BoundaryEdgeNodes>& boundary_edge_nodes() const { return bedge_nodes_; }

private:
  const Mesh* mesh_;
  int degree_;
  std::vector<Vec2> node_pos_;
  std::vector<std::array<int, 6>> elem_nodes_;
  std::vector<BoundaryRing> rings_;
  std::vector<BoundaryEdgeNodes> bedge_nodes_;
};

// Complex 2-vector nodal field.
struct DisplacementField {
  const FunctionSpace* space = nullptr;
  CVecX values;  // size 2*n_nodes, (x, y) interleaved

  DisplacementField() = default;
  explicit DisplacementField(const FunctionSpace& s)
      : space(&s), values(CVecX::Zero(s.n_dofs())) {}

  CVec2 at_node(int n) const { return CVec2(values[2 * n], values[2 * n + 1]); }
  void set_node(int n, const CVec2& v) {
    values[2 * n] = v[0];
    values[2 * n + 1] = v[1];
  }
  bool all_finite() const;
};

// Broken H^1 norm over a set of regions, exact per-element quadrature.
double h1_norm(const DisplacementField& u, const std::set<Region>& regions);
double l2_norm(const DisplacementField& u, const std::set<Region>& regions);

// Fourier coefficients (trapezoidal rule, angle-parameterized) of the two
// Cartesian components of a boundary trace on a circular tagged curve.
struct BoundaryModalCoeffs {
  int order_max = 0;       // |k| <= N
  double radius = 0.0;
  std::vector<CVec2> c;    // index k + N
  const CVec2& at(int k) const { return c[k + order_max]; }
  CVec2& at(int k) { return c[k + order_max]; }
};

BoundaryModalCoeffs boundary_modal_coeffs(const DisplacementField& u, BoundaryTag tag, int order_max);

// Same transform applied to explicit samples on the ring's nodes.
BoundaryModalCoeffs boundary_modal_coeffs(const FunctionSpace& space,
                                          const std::vector<CVec2>& ring_samples,
                                          BoundaryTag tag, int order_max);

// Modal Sobolev norm (2 pi R sum_k (1+k^2)^s |c_k|^2)^{1/2}, s in {-1/2, 0, 1/2}.
double sobolev_boundary_norm(const BoundaryModalCoeffs& coeffs, double s, double radius);

}  // namespace elscat

#endif  // ELSCAT_FESPACE_HPP
