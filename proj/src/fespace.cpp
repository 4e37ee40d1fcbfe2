#include "elscat/fespace.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace elscat {

namespace {

// Dunavant degree-5 rule, 7 points, barycentric; weights sum to 1.
struct TriRulePoint {
  double l0, l1, l2, w;
};
constexpr double kA = 0.470142064105115;
constexpr double kB = 0.101286507323456;
constexpr double kWa = 0.132394152788506;
constexpr double kWb = 0.125939180544827;
constexpr TriRulePoint kTriRule[7] = {
    {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225},
    {kA, kA, 1.0 - 2.0 * kA, kWa},
    {kA, 1.0 - 2.0 * kA, kA, kWa},
    {1.0 - 2.0 * kA, kA, kA, kWa},
    {kB, kB, 1.0 - 2.0 * kB, kWb},
    {kB, 1.0 - 2.0 * kB, kB, kWb},
    {1.0 - 2.0 * kB, kB, kB, kWb},
};

void eval_shapes(int degree, double l0, double l1, double l2, std::array<double, 6>& n) {
  if (degree == 1) {
    n = {l0, l1, l2, 0.0, 0.0, 0.0};
  } else {
    n = {l0 * (2.0 * l0 - 1.0), l1 * (2.0 * l1 - 1.0), l2 * (2.0 * l2 - 1.0),
         4.0 * l0 * l1, 4.0 * l1 * l2, 4.0 * l2 * l0};
  }
}

void eval_shape_grads(int degree, double l0, double l1, double l2,
                      const std::array<Vec2, 3>& grad_l, std::array<Vec2, 6>& g) {
  if (degree == 1) {
    g = {grad_l[0], grad_l[1], grad_l[2], Vec2::Zero(), Vec2::Zero(), Vec2::Zero()};
  } else {
    g[0] = (4.0 * l0 - 1.0) * grad_l[0];
    g[1] = (4.0 * l1 - 1.0) * grad_l[1];
    g[2] = (4.0 * l2 - 1.0) * grad_l[2];
    g[3] = 4.0 * (l1 * grad_l[0] + l0 * grad_l[1]);
    g[4] = 4.0 * (l2 * grad_l[1] + l1 * grad_l[2]);
    g[5] = 4.0 * (l0 * grad_l[2] + l2 * grad_l[0]);
  }
}

}  // namespace

FunctionSpace::FunctionSpace(const Mesh& mesh, int degree) : mesh_(&mesh), degree_(degree) {
  if (degree != 1 && degree != 2)
    throw std::invalid_argument("FunctionSpace: degree must be 1 or 2");

  node_pos_ = mesh.nodes;
  elem_nodes_.resize(mesh.triangles.size());

  std::map<std::pair<int, int>, int> edge_node;
  auto key = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
  auto midpoint_node = [&](int a, int b) {
    auto k = key(a, b);
    auto it = edge_node.find(k);
    if (it != edge_node.end()) return it->second;
    int id = static_cast<int>(node_pos_.size());
    node_pos_.push_back(0.5 * (mesh.nodes[a] + mesh.nodes[b]));
    edge_node[k] = id;
    return id;
  };

  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& v = mesh.triangles[t].v;
    std::array<int, 6> en{v[0], v[1], v[2], -1, -1, -1};
    if (degree == 2) {
      en[3] = midpoint_node(v[0], v[1]);
      en[4] = midpoint_node(v[1], v[2]);
      en[5] = midpoint_node(v[2], v[0]);
    }
    elem_nodes_[t] = en;
  }

  // adjacency of tagged edges (inner/outer side relative to the curve)
  std::map<std::pair<int, int>, std::vector<int>> edge_tris;
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& v = mesh.triangles[t].v;
    for (int e = 0; e < 3; ++e) edge_tris[key(v[e], v[(e + 1) % 3])].push_back(static_cast<int>(t));
  }

  bedge_nodes_.reserve(mesh.boundary_edges.size());
  for (const auto& be : mesh.boundary_edges) {
    BoundaryEdgeNodes bn;
    bn.tag = be.tag;
    bn.n = {be.v[0], be.v[1], -1};
    if (degree == 2) bn.n[2] = midpoint_node(be.v[0], be.v[1]);
    const auto& circ = mesh.circle_of(be.tag);
    auto it = edge_tris.find(key(be.v[0], be.v[1]));
    if (it != edge_tris.end()) {
      for (int t : it->second) {
        const auto& tri = mesh.triangles[t];
        Vec2 c = (mesh.nodes[tri.v[0]] + mesh.nodes[tri.v[1]] + mesh.nodes[tri.v[2]]) / 3.0;
        bool inside;
        if (circ) {
          inside = (c - circ->center).norm() < circ->radius;
        } else {
          // fall back to region ordering across the curve
          inside = (be.tag == BoundaryTag::ObstacleD) ? tri.region == Region::D
                                                      : tri.region != Region::Shell;
        }
        bn.adjacent_tri[inside ? 0 : 1] = t;
      }
    }
    bedge_nodes_.push_back(bn);
  }

  // boundary rings of circular tagged curves
  for (auto tag : {BoundaryTag::ObstacleD, BoundaryTag::MediumOmega, BoundaryTag::TruncationBr}) {
    const auto& circ = mesh.circle_of(tag);
    if (!circ) continue;
    std::set<int> ids;
    for (const auto& bn : bedge_nodes_)
      if (bn.tag == tag)
        for (int k = 0; k < (degree == 2 ? 3 : 2); ++k) ids.insert(bn.n[k]);
    if (ids.empty()) continue;
    BoundaryRing ring;
    ring.tag = tag;
    ring.circle = *circ;
    std::vector<std::pair<double, int>> by_angle;
    for (int id : ids) {
      Vec2 d = node_pos_[id] - circ->center;
      double th = std::atan2(d.y(), d.x());
      if (th < 0.0) th += 2.0 * pi;
      by_angle.emplace_back(th, id);
    }
    std::sort(by_angle.begin(), by_angle.end());
    for (auto& [th, id] : by_angle) {
      ring.angles.push_back(th);
      ring.node_ids.push_back(id);
    }
    int m = static_cast<int>(ring.angles.size());
    ring.uniform = true;
    for (int k = 0; k < m; ++k) {
      double gap = (k + 1 < m ? ring.angles[k + 1] : ring.angles[0] + 2.0 * pi) - ring.angles[k];
      if (std::abs(gap - 2.0 * pi / m) > 1e-8) ring.uniform = false;
    }
    rings_.push_back(std::move(ring));
  }
}

const FunctionSpace::BoundaryRing& FunctionSpace::ring(BoundaryTag tag) const {
  for (const auto& r : rings_)
    if (r.tag == tag) return r;
  throw std::runtime_error("FunctionSpace: no circular ring for this boundary tag");
}

FunctionSpace::ElementQuadrature FunctionSpace::element_quadrature(int t) const {
  const auto& tri = mesh_->triangles[t];
  const Vec2 &p0 = mesh_->nodes[tri.v[0]], &p1 = mesh_->nodes[tri.v[1]],
             &p2 = mesh_->nodes[tri.v[2]];
  double det = (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p1.y() - p0.y()) * (p2.x() - p0.x());
  double area = 0.5 * det;

  std::array<Vec2, 3> gl;
  gl[0] = Vec2(p1.y() - p2.y(), p2.x() - p1.x()) / det;
  gl[1] = Vec2(p2.y() - p0.y(), p0.x() - p2.x()) / det;
  gl[2] = Vec2(p0.y() - p1.y(), p1.x() - p0.x()) / det;

  ElementQuadrature q;
  q.area = area;
  q.points.resize(7);
  q.weights.resize(7);
  q.shape.resize(7);
  q.grad.resize(7);
  for (int i = 0; i < 7; ++i) {
    const auto& rp = kTriRule[i];
    q.points[i] = rp.l0 * p0 + rp.l1 * p1 + rp.l2 * p2;
    q.weights[i] = rp.w * area;
    eval_shapes(degree_, rp.l0, rp.l1, rp.l2, q.shape[i]);
    eval_shape_grads(degree_, rp.l0, rp.l1, rp.l2, gl, q.grad[i]);
  }
  return q;
}

void FunctionSpace::shape_at(int t, const Vec2& x, std::array<double, 6>& n,
                             std::array<Vec2, 6>* grad) const {
  const auto& tri = mesh_->triangles[t];
  const Vec2 &p0 = mesh_->nodes[tri.v[0]], &p1 = mesh_->nodes[tri.v[1]],
             &p2 = mesh_->nodes[tri.v[2]];
  double det = (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p1.y() - p0.y()) * (p2.x() - p0.x());
  double l1 = ((x.x() - p0.x()) * (p2.y() - p0.y()) - (x.y() - p0.y()) * (p2.x() - p0.x())) / det;
  double l2 = ((p1.x() - p0.x()) * (x.y() - p0.y()) - (p1.y() - p0.y()) * (x.x() - p0.x())) / det;
  double l0 = 1.0 - l1 - l2;
  eval_shapes(degree_, l0, l1, l2, n);
  if (grad) {
    std::array<Vec2, 3> gl;
    gl[0] = Vec2(p1.y() - p2.y(), p2.x() - p1.x()) / det;
    gl[1] = Vec2(p2.y() - p0.y(), p0.x() - p2.x()) / det;
    gl[2] = Vec2(p0.y() - p1.y(), p1.x() - p0.x()) / det;
    eval_shape_grads(degree_, l0, l1, l2, gl, *grad);
  }
}

bool DisplacementField::all_finite() const {
  for (int i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i].real()) || !std::isfinite(values[i].imag())) return false;
  return true;
}

namespace {
double sobolev_like_norm(const DisplacementField& u, const std::set<Region>& regions,
                         bool with_gradient) {
  const FunctionSpace& space = *u.space;
  const Mesh& mesh = space.mesh();
  KahanSum acc;
  int npe = space.nodes_per_element();
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    if (!regions.count(mesh.triangles[t].region)) continue;
    auto q = space.element_quadrature(t);
    const auto& en = space.element_nodes(t);
    for (size_t p = 0; p < q.points.size(); ++p) {
      CVec2 val = CVec2::Zero();
      CMat2 grad = CMat2::Zero();  // grad(k, l) = d_l u_k
      for (int i = 0; i < npe; ++i) {
        CVec2 ui = u.at_node(en[i]);
        val += q.shape[p][i] * ui;
        if (with_gradient) {
          grad(0, 0) += ui[0] * q.grad[p][i].x();
          grad(0, 1) += ui[0] * q.grad[p][i].y();
          grad(1, 0) += ui[1] * q.grad[p][i].x();
          grad(1, 1) += ui[1] * q.grad[p][i].y();
        }
      }
      double density = val.squaredNorm();
      if (with_gradient) density += grad.squaredNorm();
      acc.add(q.weights[p] * density);
    }
  }
  return std::sqrt(std::max(0.0, acc.value()));
}
}  // namespace

double h1_norm(const DisplacementField& u, const std::set<Region>& regions) {
  return sobolev_like_norm(u, regions, true);
}

double l2_norm(const DisplacementField& u, const std::set<Region>& regions) {
  return sobolev_like_norm(u, regions, false);
}

BoundaryModalCoeffs boundary_modal_coeffs(const FunctionSpace& space,
                                          const std::vector<CVec2>& ring_samples,
                                          BoundaryTag tag, int order_max) {
  const auto& ring = space.ring(tag);
  int m = static_cast<int>(ring.node_ids.size());
  if (static_cast<int>(ring_samples.size()) != m)
    throw std::invalid_argument("boundary_modal_coeffs: sample count does not match the ring");
  BoundaryModalCoeffs out;
  out.order_max = order_max;
  out.radius = ring.circle.radius;
  out.c.assign(2 * order_max + 1, CVec2::Zero());

  // trapezoidal weights in angle (reduce to 2 pi / m on uniform rings)
  std::vector<double> w(m);
  for (int i = 0; i < m; ++i) {
    double next = (i + 1 < m ? ring.angles[i + 1] : ring.angles[0] + 2.0 * pi);
    double prev = (i > 0 ? ring.angles[i - 1] : ring.angles[m - 1] - 2.0 * pi);
    w[i] = 0.5 * (next - prev);
  }
  for (int k = -order_max; k <= order_max; ++k) {
    CVec2 acc = CVec2::Zero();
    for (int i = 0; i < m; ++i)
      acc += w[i] * std::exp(-iu * static_cast<double>(k) * ring.angles[i]) * ring_samples[i];
    out.at(k) = acc / (2.0 * pi);
  }
  return out;
}

BoundaryModalCoeffs boundary_modal_coeffs(const DisplacementField& u, BoundaryTag tag,
                                          int order_max) {
  const auto& ring = u.space->ring(tag);
  std::vector<CVec2> samples(ring.node_ids.size());
  for (size_t i = 0; i < ring.node_ids.size(); ++i) samples[i] = u.at_node(ring.node_ids[i]);
  return boundary_modal_coeffs(*u.space, samples, tag, order_max);
}

double sobolev_boundary_norm(const BoundaryModalCoeffs& coeffs, double s, double radius) {
  if (s != 0.0 && s != 0.5 && s != -0.5)
    throw std::invalid_argument("sobolev_boundary_norm: s must be -1/2, 0 or 1/2");
  KahanSum acc;
  for (int k = -coeffs.order_max; k <= coeffs.order_max; ++k) {
    double weight = std::pow(1.0 + static_cast<double>(k) * k, s);
    acc.add(weight * coeffs.at(k).squaredNorm());
  }
  return std::sqrt(2.0 * pi * radius * acc.value());
}

}  // namespace elscat
