#include "elscat/fem.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

#ifdef ELSCAT_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#else
#include <Eigen/SparseLU>
#endif

namespace elscat {

SceneContext::SceneContext(const SceneGeometry& geom, const ExteriorConstants& ext, double h,
                           int degree, int dtn_order)
    : geom_(geom),
      ext_(ext),
      mesh_(build_scene_mesh(geom, h)),
      space_(mesh_, degree),
      dtn_(ext, geom.truncation_radius,
           dtn_order > 0 ? dtn_order : DtnOperator::default_order(ext, geom.truncation_radius)),
      far_(ext) {}

void ScatteringProblem::validate() const {
  if (!ctx || !scene) throw std::invalid_argument("ScatteringProblem: missing context or scene");
  if (condition == ObstacleCondition::None && !scene->has_material(Region::D))
    throw std::invalid_argument("ScatteringProblem: effective run needs a material in D");
  incident.validate_against(ctx->geometry());
  source.validate_against(ctx->geometry());
  const auto& circ = ctx->mesh().circle_of(BoundaryTag::TruncationBr);
  if (!circ || std::abs(circ->radius - ctx->dtn().radius()) > 1e-9 * ctx->dtn().radius())
    throw std::invalid_argument("ScatteringProblem: DtN radius does not match the mesh");
}

namespace {

// C2 radial cutoff: 1 below r1, 0 above r2 (smootherstep complement).
struct RadialCutoff {
  double r1 = 0.0, r2 = 0.0;
  bool trivial = true;  // identically one

  double value(double rho) const {
    if (trivial || rho <= r1) return 1.0;
    if (rho >= r2) return 0.0;
    double t = (rho - r1) / (r2 - r1);
    return 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
  }
  double d1(double rho) const {
    if (trivial || rho <= r1 || rho >= r2) return 0.0;
    double w = r2 - r1, t = (rho - r1) / w;
    return -(30.0 * t * t - 60.0 * t * t * t + 30.0 * t * t * t * t) / w;
  }
  double d2(double rho) const {
    if (trivial || rho <= r1 || rho >= r2) return 0.0;
    double w = r2 - r1, t = (rho - r1) / w;
    return -(60.0 * t - 180.0 * t * t + 120.0 * t * t * t) / (w * w);
  }
};

RadialCutoff make_lifting_cutoff(const ScatteringProblem& p) {
  RadialCutoff chi;
  if (p.incident.is_entire()) return chi;  // chi == 1, boundary correction on dBr
  const SceneGeometry& g = p.ctx->geometry();
  double inner = g.omega.center.norm() + g.omega.radius;
  double outer = std::min(p.incident.location().norm(), g.truncation_radius);
  double gap = outer - inner;
  double h = p.ctx->mesh().h;
  if (gap < 6.0 * h)
    throw std::invalid_argument(
        "ScatteringProblem: point source too close to Omega for the incident lifting at this h");
  chi.trivial = false;
  chi.r1 = inner + 0.15 * gap;
  chi.r2 = inner + 0.85 * gap;
  return chi;
}

// G = L(chi u) + w^2 rho chi u for the incident field u (which solves the
// Navier equation wherever chi varies)
CVec2 lifting_residual(const RadialCutoff& chi, const IncidentField& inc,
                       const ExteriorConstants& ext, const Vec2& x) {
  double rho = x.norm();
  double c1 = chi.d1(rho);
  double c2 = chi.d2(rho);
  if (c1 == 0.0 && c2 == 0.0) return CVec2::Zero();
  Vec2 rhat = x / rho;
  CVec2 u = inc.value(x);
  CMat2 jac = inc.gradient(x);
  Complex div = jac(0, 0) + jac(1, 1);
  CVec2 j_r = jac * rhat.cast<Complex>();
  CVec2 jt_r = jac.transpose() * rhat.cast<Complex>();
  Complex r_u = rhat.x() * u[0] + rhat.y() * u[1];
  CVec2 rhat_c = rhat.cast<Complex>();

  CVec2 g = ext.mu_e * (2.0 * c1 * j_r + (c2 + c1 / rho) * u);
  g += (ext.lambda_e + ext.mu_e) *
       (div * c1 * rhat_c + c2 * r_u * rhat_c + (c1 / rho) * (u - r_u * rhat_c) + c1 * jt_r);
  return g;
}

std::vector<double> ring_angle_weights(const FunctionSpace::BoundaryRing& ring) {
  int m = static_cast<int>(ring.node_ids.size());
  std::vector<double> w(m);
  for (int i = 0; i < m; ++i) {
    double next = (i + 1 < m ? ring.angles[i + 1] : ring.angles[0] + 2.0 * pi);
    double prev = (i > 0 ? ring.angles[i - 1] : ring.angles[m - 1] - 2.0 * pi);
    w[i] = 0.5 * (next - prev);
  }
  return w;
}

#ifdef ELSCAT_HAVE_UMFPACK
using DirectSolver = Eigen::UmfPackLU<Eigen::SparseMatrix<Complex>>;
#else
using DirectSolver = Eigen::SparseLU<Eigen::SparseMatrix<Complex>>;
#endif

}  // namespace

AssembledSystem assemble(const ScatteringProblem& p) {
  p.validate();
  const FunctionSpace& space = p.ctx->space();
  const Mesh& mesh = space.mesh();
  const MaterialScene& scene = *p.scene;
  const double omega = p.ctx->exterior().omega;
  const bool skip_obstacle = p.condition != ObstacleCondition::None;

  AssembledSystem sys;
  int n_nodes = space.n_nodes();
  sys.node_active.assign(n_nodes, 0);
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    if (skip_obstacle && mesh.triangles[t].region == Region::D) continue;
    const auto& en = space.element_nodes(t);
    for (int i = 0; i < space.nodes_per_element(); ++i) sys.node_active[en[i]] = 1;
  }

  // rigid obstacle: homogeneous Dirichlet on the obstacle curve
  std::vector<char> node_fixed(n_nodes, 0);
  if (p.condition == ObstacleCondition::Rigid) {
    for (const auto& bn : space.boundary_edge_nodes())
      if (bn.tag == BoundaryTag::ObstacleD)
        for (int k = 0; k < 3; ++k)
          if (bn.n[k] >= 0) node_fixed[bn.n[k]] = 1;
  }

  sys.free_of_dof.assign(2 * n_nodes, -1);
  for (int n = 0; n < n_nodes; ++n) {
    if (!sys.node_active[n] || node_fixed[n]) continue;
    for (int c = 0; c < 2; ++c) {
      sys.free_of_dof[2 * n + c] = static_cast<int>(sys.dof_of_free.size());
      sys.dof_of_free.push_back(2 * n + c);
    }
  }
  int n_free = static_cast<int>(sys.dof_of_free.size());

  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(mesh.triangles.size() * 80);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n_free);

  RadialCutoff chi = make_lifting_cutoff(p);

  const int npe = space.nodes_per_element();
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    Region region = mesh.triangles[t].region;
    if (skip_obstacle && region == Region::D) continue;
    const IsotropicMaterial& mat = scene.material(region);
    const ElasticTensor& c = mat.tensor;
    Complex rho = mat.density.value;
    auto q = space.element_quadrature(t);
    const auto& en = space.element_nodes(t);

    Eigen::Matrix<Complex, 12, 12> ke = Eigen::Matrix<Complex, 12, 12>::Zero();
    Eigen::Matrix<Complex, 12, 1> fe = Eigen::Matrix<Complex, 12, 1>::Zero();
    for (size_t qp = 0; qp < q.points.size(); ++qp) {
      double w = q.weights[qp];
      for (int i = 0; i < npe; ++i) {
        for (int j = 0; j < npe; ++j) {
          const Vec2& gi = q.grad[qp][i];
          const Vec2& gj = q.grad[qp][j];
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
              double stiff = 0.0;
              for (int cc = 0; cc < 2; ++cc)
                for (int dd = 0; dd < 2; ++dd) stiff += c(a, cc, b, dd) * gj[dd] * gi[cc];
              Complex entry = w * stiff;
              if (a == b) entry -= w * omega * omega * rho * q.shape[qp][i] * q.shape[qp][j];
              ke(2 * i + a, 2 * j + b) += entry;
            }
        }
      }
      // volume source and (for point illumination) the lifting residual
      CVec2 load = CVec2::Zero();
      if (!p.source.empty()) load += p.source.value(q.points[qp]);
      if (!chi.trivial && region == Region::Shell)
        load += lifting_residual(chi, p.incident, p.ctx->exterior(), q.points[qp]);
      if (load.norm() != 0.0)
        for (int i = 0; i < npe; ++i)
          for (int a = 0; a < 2; ++a) fe(2 * i + a) -= w * q.shape[qp][i] * load[a];
    }

    for (int i = 0; i < npe; ++i)
      for (int a = 0; a < 2; ++a) {
        int fi = sys.free_of_dof[2 * en[i] + a];
        if (fi < 0) continue;
        rhs[fi] += fe(2 * i + a);
        for (int j = 0; j < npe; ++j)
          for (int b = 0; b < 2; ++b) {
            int fj = sys.free_of_dof[2 * en[j] + b];
            if (fj < 0) continue;
            triplets.emplace_back(fi, fj, ke(2 * i + a, 2 * j + b));
          }
      }
  }

  // DtN coupling on the truncation ring: -int (Lambda u) . phi ds
  const auto& ring = space.ring(BoundaryTag::TruncationBr);
  int m = static_cast<int>(ring.node_ids.size());
  auto w_theta = ring_angle_weights(ring);
  double r = ring.circle.radius;
  Eigen::MatrixXcd nodal = p.ctx->dtn().nodal_matrix(ring);
  sys.dof_on_dtn_ring.assign(2 * n_nodes, 0);
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < 2; ++a) sys.dof_on_dtn_ring[2 * ring.node_ids[i] + a] = 1;
  for (int i = 0; i < m; ++i) {
    double wq = w_theta[i] * r;
    for (int a = 0; a < 2; ++a) {
      int fi = sys.free_of_dof[2 * ring.node_ids[i] + a];
      if (fi < 0) continue;
      for (int j = 0; j < m; ++j)
        for (int b = 0; b < 2; ++b) {
          int fj = sys.free_of_dof[2 * ring.node_ids[j] + b];
          if (fj < 0) continue;
          Complex entry = nodal(2 * i + a, 2 * j + b);
          if (entry != Complex(0.0, 0.0)) triplets.emplace_back(fi, fj, -wq * entry);
        }
    }
  }

  // entire incident: boundary data g = T(u^in) - Lambda u^in on dBr
  if (p.incident.is_entire() && !p.incident.is_zero()) {
    BoundarySamples uin(m);
    for (int i = 0; i < m; ++i) {
      Vec2 pos = r * Vec2(std::cos(ring.angles[i]), std::sin(ring.angles[i]));
      uin[i] = p.incident.value(pos);
    }
    BoundarySamples lam_uin = p.ctx->dtn().apply(ring, uin);
    for (int i = 0; i < m; ++i) {
      Vec2 nu(std::cos(ring.angles[i]), std::sin(ring.angles[i]));
      Vec2 pos = r * nu;
      CVec2 g = p.incident.traction(pos, nu) - lam_uin[i];
      double wq = w_theta[i] * r;
      for (int a = 0; a < 2; ++a) {
        int fi = sys.free_of_dof[2 * ring.node_ids[i] + a];
        if (fi >= 0) rhs[fi] += wq * g[a];
      }
    }
  }

  sys.matrix.resize(n_free, n_free);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix.makeCompressed();
  sys.rhs = std::move(rhs);
  return sys;
}

double AssembledSystem::offring_asymmetry() const {
  Eigen::SparseMatrix<Complex> diff = Eigen::SparseMatrix<Complex>(matrix.transpose()) - matrix;
  double worst = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(diff, k); it; ++it) {
      int dof_row = dof_of_free[it.row()];
      int dof_col = dof_of_free[it.col()];
      if (dof_on_dtn_ring[dof_row] || dof_on_dtn_ring[dof_col]) continue;
      worst = std::max(worst, std::abs(it.value()));
    }
  return worst;
}

Solution solve(const ScatteringProblem& p, const AssembledSystem& sys) {
  const FunctionSpace& space = p.ctx->space();
  auto t0 = std::chrono::steady_clock::now();

  DirectSolver lu;
  lu.compute(sys.matrix);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error(
        "solve: singular factorization; likely an eigenvalue/resonance configuration of (omega, "
        "r)");
  Eigen::VectorXcd x = lu.solve(sys.rhs);
  if (lu.info() != Eigen::Success) throw std::runtime_error("solve: backsubstitution failed");

  Solution sol;
  sol.space = &space;
  sol.stats.free_dofs = static_cast<int>(sys.dof_of_free.size());
  sol.stats.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double bnorm = sys.rhs.norm();
  sol.residual = bnorm > 0.0 ? (sys.matrix * x - sys.rhs).norm() / bnorm : 0.0;

  // scatter to the full dof vector (eliminated dofs are zero)
  DisplacementField w(space);
  for (size_t f = 0; f < sys.dof_of_free.size(); ++f) w.values[sys.dof_of_free[f]] = x[f];

  sol.node_active = sys.node_active;
  sol.incident = p.incident;
  sol.source = p.source;

  const Mesh& mesh = space.mesh();
  sol.node_on_shell.assign(space.n_nodes(), 0);
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    if (mesh.triangles[t].region != Region::Shell) continue;
    const auto& en = space.element_nodes(t);
    for (int i = 0; i < space.nodes_per_element(); ++i) sol.node_on_shell[en[i]] = 1;
  }

  RadialCutoff chi = make_lifting_cutoff(p);
  sol.total = DisplacementField(space);
  sol.scattered = DisplacementField(space);
  for (int n = 0; n < space.n_nodes(); ++n) {
    if (!sol.node_active[n]) continue;
    CVec2 wn = w.at_node(n);
    if (!sol.node_on_shell[n]) {
      sol.total.set_node(n, wn);
      continue;
    }
    const Vec2& pos = space.node_pos(n);
    CVec2 uin = p.incident.is_zero() ? CVec2(CVec2::Zero()) : CVec2(p.incident.value(pos));
    double c = chi.value(pos.norm());
    CVec2 us = wn - c * uin;
    sol.scattered.set_node(n, us);
    sol.total.set_node(n, us + uin);  // total = scattered + incident, by construction
  }
  return sol;
}

Solution solve_scattering(const SceneContext& ctx, const MaterialScene& scene,
                          ObstacleCondition condition, const IncidentField& incident,
                          const VolumeSource& source) {
  ScatteringProblem p;
  p.ctx = &ctx;
  p.scene = &scene;
  p.condition = condition;
  p.incident = incident;
  p.source = source;
  AssembledSystem sys = assemble(p);
  return solve(p, sys);
}

Solution solve_obstacle(const MaterialScene& scene, const SceneGeometry& geom,
                        ObstacleCondition condition, const IncidentField& incident,
                        const VolumeSource& source, double h, int degree, int dtn_order) {
  if (condition == ObstacleCondition::None)
    throw std::invalid_argument("solve_obstacle: condition must be Rigid or TractionFree");
  SceneContext ctx(geom, scene.exterior(), h, degree, dtn_order);
  return solve_scattering(ctx, scene, condition, incident, source);
}

MaterialScene effective_scene(const MaterialScene& base, int case_id, double eps,
                              const EffectiveParams& params) {
  if (case_id != 1 && case_id != 2)
    throw std::invalid_argument("effective_scene: case must be 1 or 2");
  MaterialScene scene = base;
  IsotropicMaterial mat =
      case_id == 1
          ? effective_material_case1(eps, params.lambda0, params.mu0, params.eta0, params.tau0)
          : effective_material_case2(eps, params.lambda0, params.mu0, params.eta0, params.tau0);
  scene.set_region(Region::D, std::move(mat));
  return scene;
}

Solution solve_effective(const MaterialScene& base, const SceneGeometry& geom, int case_id,
                         double eps, const EffectiveParams& params, const IncidentField& incident,
                         const VolumeSource& source, double h, int degree, int dtn_order) {
  SceneContext ctx(geom, base.exterior(), h, degree, dtn_order);
  MaterialScene scene = effective_scene(base, case_id, eps, params);
  return solve_scattering(ctx, scene, ObstacleCondition::None, incident, source);
}

BoundarySamples boundary_traction(const DisplacementField& u, const MaterialScene& scene,
                                  BoundaryTag tag, Side side) {
  const FunctionSpace& space = *u.space;
  const auto& ring = space.ring(tag);  // circles only; polygons use L2 surrogates
  std::map<int, int> ring_pos;
  for (size_t i = 0; i < ring.node_ids.size(); ++i)
    ring_pos[ring.node_ids[i]] = static_cast<int>(i);

  BoundarySamples acc(ring.node_ids.size(), CVec2::Zero());
  std::vector<double> weight(ring.node_ids.size(), 0.0);
  const Mesh& mesh = space.mesh();
  int found = 0;
  for (const auto& bn : space.boundary_edge_nodes()) {
    if (bn.tag != tag) continue;
    int tri = bn.adjacent_tri[side == Side::Inner ? 0 : 1];
    if (tri < 0) continue;
    ++found;
    Region region = mesh.triangles[tri].region;
    const IsotropicMaterial& mat = scene.material(region);
    double edge_len = (mesh.nodes[bn.n[0]] - mesh.nodes[bn.n[1]]).norm();
    int n_edge_nodes = space.degree() == 2 ? 3 : 2;
    const auto& en = space.element_nodes(tri);
    for (int k = 0; k < n_edge_nodes; ++k) {
      int node = bn.n[k];
      const Vec2& pos = space.node_pos(node);
      std::array<double, 6> shp;
      std::array<Vec2, 6> grads;
      space.shape_at(tri, pos, shp, &grads);
      CMat2 jac = CMat2::Zero();
      for (int i = 0; i < space.nodes_per_element(); ++i) {
        CVec2 ui = u.at_node(en[i]);
        jac(0, 0) += ui[0] * grads[i].x();
        jac(0, 1) += ui[0] * grads[i].y();
        jac(1, 0) += ui[1] * grads[i].x();
        jac(1, 1) += ui[1] * grads[i].y();
      }
      Vec2 nu = (pos - ring.circle.center).normalized();
      CVec2 trac = elastic_traction(jac, mat.tensor.lambda(), mat.tensor.mu(), nu);
      int rp = ring_pos.at(node);
      acc[rp] += edge_len * trac;
      weight[rp] += edge_len;
    }
  }
  if (!found)
    throw std::runtime_error("boundary_traction: requested side has no adjacent elements");
  for (size_t i = 0; i < acc.size(); ++i)
    if (weight[i] > 0.0) acc[i] /= weight[i];
  return acc;
}

SurfaceData scattered_surface_data(const Solution& sol, const SceneContext& ctx,
                                   const MaterialScene& scene, BoundaryTag surface) {
  const FunctionSpace& space = ctx.space();
  const auto& ring = space.ring(surface);
  int m = static_cast<int>(ring.node_ids.size());
  SurfaceData surf;
  surf.radius = ring.circle.radius;
  surf.angles = ring.angles;
  surf.trace.resize(m);
  surf.traction.resize(m);

  for (int i = 0; i < m; ++i) {
    Vec2 pos = surf.radius * Vec2(std::cos(ring.angles[i]), std::sin(ring.angles[i]));
    CVec2 uin = sol.incident.is_zero() ? CVec2(CVec2::Zero()) : CVec2(sol.incident.value(pos));
    surf.trace[i] = sol.total.at_node(ring.node_ids[i]) - uin;
  }

  if (surface == BoundaryTag::TruncationBr) {
    surf.traction = ctx.dtn().apply(ring, surf.trace);
  } else {
    BoundarySamples total_trac = boundary_traction(sol.total, scene, surface, Side::Outer);
    for (int i = 0; i < m; ++i) {
      Vec2 nu(std::cos(ring.angles[i]), std::sin(ring.angles[i]));
      Vec2 pos = surf.radius * nu;
      CVec2 tin =
          sol.incident.is_zero() ? CVec2(CVec2::Zero()) : CVec2(sol.incident.traction(pos, nu));
      surf.traction[i] = total_trac[i] - tin;
    }
  }
  return surf;
}

FarFieldPattern far_field(const Solution& sol, const SceneContext& ctx, const MaterialScene& scene,
                          int n_directions, BoundaryTag surface) {
  SurfaceData surf = scattered_surface_data(sol, ctx, scene, surface);
  FarFieldPattern pat = ctx.far_engine().pattern(surf, n_directions);
  if (surface == BoundaryTag::MediumOmega && !sol.source.empty()) {
    FarFieldPattern vol = ctx.far_engine().volume_pattern(ctx.space(), sol.source, n_directions);
    std::vector<CVec2> sum(pat.total.size());
    for (size_t i = 0; i < sum.size(); ++i) sum[i] = pat.total[i] + vol.total[i];
    return FarFieldPattern::from_total(pat.angles, std::move(sum));
  }
  return pat;
}

std::vector<CVec2> represent_scattered(const Solution& sol, const SceneContext& ctx,
                                       const MaterialScene& scene,
                                       const std::vector<Vec2>& points) {
  SurfaceData surf = scattered_surface_data(sol, ctx, scene, BoundaryTag::MediumOmega);
  double h = ctx.mesh().h;
  std::vector<CVec2> out(points.size());
  for (size_t i = 0; i < points.size(); ++i) {
    if (!sol.source.empty() &&
        (points[i] - sol.source.center).norm() < sol.source.width + 2.0 * h)
      throw std::invalid_argument("represent_scattered: evaluation point inside source support");
    out[i] = represent_scattered_boundary(surf, points[i], ctx.exterior());
    if (!sol.source.empty())
      out[i] -= volume_potential(ctx.space(), sol.source, points[i], ctx.exterior());
  }
  return out;
}

double manufactured_h1_error(const Mesh& mesh, int degree, const IsotropicMaterial& material,
                             double omega, const ManufacturedSolution& exact) {
  FunctionSpace space(mesh, degree);
  int n_nodes = space.n_nodes();

  // Dirichlet ring: every node of the truncation circle
  std::vector<char> fixed(n_nodes, 0);
  for (const auto& bn : space.boundary_edge_nodes())
    if (bn.tag == BoundaryTag::TruncationBr)
      for (int k = 0; k < 3; ++k)
        if (bn.n[k] >= 0) fixed[bn.n[k]] = 1;

  std::vector<int> free_of_dof(2 * n_nodes, -1);
  std::vector<int> dof_of_free;
  for (int n = 0; n < n_nodes; ++n) {
    if (fixed[n]) continue;
    for (int c = 0; c < 2; ++c) {
      free_of_dof[2 * n + c] = static_cast<int>(dof_of_free.size());
      dof_of_free.push_back(2 * n + c);
    }
  }
  Eigen::VectorXcd fixed_values = Eigen::VectorXcd::Zero(2 * n_nodes);
  for (int n = 0; n < n_nodes; ++n)
    if (fixed[n]) {
      CVec2 v = exact.value(space.node_pos(n));
      fixed_values[2 * n] = v[0];
      fixed_values[2 * n + 1] = v[1];
    }

  const ElasticTensor& c = material.tensor;
  Complex rho = material.density.value;
  std::vector<Eigen::Triplet<Complex>> triplets;
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(dof_of_free.size());
  int npe = space.nodes_per_element();
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    auto q = space.element_quadrature(t);
    const auto& en = space.element_nodes(t);
    Eigen::Matrix<Complex, 12, 12> ke = Eigen::Matrix<Complex, 12, 12>::Zero();
    Eigen::Matrix<Complex, 12, 1> fe = Eigen::Matrix<Complex, 12, 1>::Zero();
    for (size_t qp = 0; qp < q.points.size(); ++qp) {
      double w = q.weights[qp];
      CVec2 load = exact.load(q.points[qp]);
      for (int i = 0; i < npe; ++i) {
        for (int a = 0; a < 2; ++a) fe(2 * i + a) -= w * q.shape[qp][i] * load[a];
        for (int j = 0; j < npe; ++j)
          for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
              double stiff = 0.0;
              for (int cc = 0; cc < 2; ++cc)
                for (int dd = 0; dd < 2; ++dd)
                  stiff += c(a, cc, b, dd) * q.grad[qp][j][dd] * q.grad[qp][i][cc];
              Complex entry = w * stiff;
              if (a == b) entry -= w * omega * omega * rho * q.shape[qp][i] * q.shape[qp][j];
              ke(2 * i + a, 2 * j + b) += entry;
            }
      }
    }
    for (int i = 0; i < npe; ++i)
      for (int a = 0; a < 2; ++a) {
        int fi = free_of_dof[2 * en[i] + a];
        if (fi < 0) continue;
        rhs[fi] += fe(2 * i + a);
        for (int j = 0; j < npe; ++j)
          for (int b = 0; b < 2; ++b) {
            int dof_j = 2 * en[j] + b;
            int fj = free_of_dof[dof_j];
            Complex entry = ke(2 * i + a, 2 * j + b);
            if (fj >= 0)
              triplets.emplace_back(fi, fj, entry);
            else
              rhs[fi] -= entry * fixed_values[dof_j];
          }
      }
  }

  Eigen::SparseMatrix<Complex> mat(dof_of_free.size(), dof_of_free.size());
  mat.setFromTriplets(triplets.begin(), triplets.end());
  mat.makeCompressed();
  DirectSolver lu;
  lu.compute(mat);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("manufactured_h1_error: factorization failed");
  Eigen::VectorXcd x = lu.solve(rhs);

  DisplacementField u(space);
  u.values = fixed_values;
  for (size_t f = 0; f < dof_of_free.size(); ++f) u.values[dof_of_free[f]] = x[f];

  // H1 error against the analytic solution by element quadrature
  KahanSum err;
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    auto q = space.element_quadrature(t);
    const auto& en = space.element_nodes(t);
    for (size_t qp = 0; qp < q.points.size(); ++qp) {
      CVec2 uh = CVec2::Zero();
      CMat2 jh = CMat2::Zero();
      for (int i = 0; i < npe; ++i) {
        CVec2 ui = u.at_node(en[i]);
        uh += q.shape[qp][i] * ui;
        jh(0, 0) += ui[0] * q.grad[qp][i].x();
        jh(0, 1) += ui[0] * q.grad[qp][i].y();
        jh(1, 0) += ui[1] * q.grad[qp][i].x();
        jh(1, 1) += ui[1] * q.grad[qp][i].y();
      }
      CVec2 du = uh - exact.value(q.points[qp]);
      CMat2 dj = jh - exact.gradient(q.points[qp]);
      err.add(q.weights[qp] * (du.squaredNorm() + dj.squaredNorm()));
    }
  }
  return std::sqrt(std::max(0.0, err.value()));
}

void write_solution_text(const Solution& sol, const std::string& path, double omega, double eps,
                         int case_id) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_solution_text: cannot open " + path);
  const FunctionSpace& space = *sol.space;
  os << "elscat solution 1\n";
  char buf[320];
  std::snprintf(buf, sizeof buf, "nodes %d dofs %d omega %.17g eps %.17g case %d\n",
                space.n_nodes(), space.n_dofs(), omega, eps, case_id);
  os << buf;
  std::snprintf(buf, sizeof buf, "residual %.17g free_dofs %d\n", sol.residual,
                sol.stats.free_dofs);
  os << buf;
  os << "# node x y active shell re_ux im_ux re_uy im_uy re_usx im_usx re_usy im_usy\n";
  for (int n = 0; n < space.n_nodes(); ++n) {
    CVec2 t = sol.total.at_node(n);
    CVec2 s = sol.scattered.at_node(n);
    std::snprintf(buf, sizeof buf,
                  "%d %.17g %.17g %d %d %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n", n,
                  space.node_pos(n).x(), space.node_pos(n).y(), int(sol.node_active[n]),
                  int(sol.node_on_shell[n]), t[0].real(), t[0].imag(), t[1].real(), t[1].imag(),
                  s[0].real(), s[0].imag(), s[1].real(), s[1].imag());
    os << buf;
  }
}

void write_region_norms_csv(const Solution& sol, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_region_norms_csv: cannot open " + path);
  os << "region,l2_total,h1_total\n";
  char buf[160];
  for (Region r : {Region::D, Region::Annulus, Region::Shell}) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g\n", to_string(r), l2_norm(sol.total, {r}),
                  h1_norm(sol.total, {r}));
    os << buf;
  }
}

}  // namespace elscat
