#ifndef ELSCAT_FEM_HPP
#define ELSCAT_FEM_HPP

#include <Eigen/Sparse>
#include <functional>
#include <memory>
#include <string>

#include "elscat/dtn.hpp"
#include "elscat/fespace.hpp"
#include "elscat/materials.hpp"
#include "elscat/waves.hpp"

namespace elscat {

enum class ObstacleCondition { TractionFree, Rigid, None };
enum class Side { Inner, Outer };

// Shared per-scene state: mesh, space, nonreflecting operator and the
// calibrated far-field engine. Rate studies reuse one context for the
// obstacle solve and every effective solve.
class SceneContext {
public:
  SceneContext(const SceneGeometry& geom, const ExteriorConstants& ext, double h, int degree,
               int dtn_order = 0);

  const SceneGeometry& geometry() const { return geom_; }
  const ExteriorConstants& exterior() const { return ext_; }
  const Mesh& mesh() const { return mesh_; }
  const FunctionSpace& space() const { return space_; }
  const DtnOperator& dtn() const { return dtn_; }
  const FarFieldEngine& far_engine() const { return far_; }

private:
  SceneGeometry geom_;
  ExteriorConstants ext_;
  Mesh mesh_;
  FunctionSpace space_;
  DtnOperator dtn_;
  FarFieldEngine far_;
};

struct ScatteringProblem {
  const SceneContext* ctx = nullptr;
  const MaterialScene* scene = nullptr;
  ObstacleCondition condition = ObstacleCondition::TractionFree;
  IncidentField incident = IncidentField::none(ExteriorConstants());
  VolumeSource source;

  void validate() const;
};

struct AssembledSystem {
  Eigen::SparseMatrix<Complex> matrix;  // free dofs only
  Eigen::VectorXcd rhs;
  std::vector<int> free_of_dof;   // 2*n_nodes entries, -1 when eliminated/inactive
  std::vector<int> dof_of_free;
  std::vector<char> node_active;
  std::vector<char> dof_on_dtn_ring;  // rows coupled through the DtN block

  // || A - A^T || over rows and columns away from the DtN ring
  double offring_asymmetry() const;
};

struct Solution {
  const FunctionSpace* space = nullptr;
  DisplacementField total;      // active nodes (excluded obstacle interior = 0)
  DisplacementField scattered;  // shell nodes; total = scattered + incident there
  std::vector<char> node_active;
  std::vector<char> node_on_shell;
  IncidentField incident = IncidentField::none(ExteriorConstants());
  VolumeSource source;
  double residual = 0.0;
  struct Stats {
    int free_dofs = 0;
    long factor_nnz = 0;
    double seconds = 0.0;
  } stats;
};

AssembledSystem assemble(const ScatteringProblem& problem);

// Direct sparse factorization; relative residual reported in the solution.
Solution solve(const ScatteringProblem& problem, const AssembledSystem& system);

Solution solve_scattering(const SceneContext& ctx, const MaterialScene& scene,
                          ObstacleCondition condition, const IncidentField& incident,
                          const VolumeSource& source = {});

// End-to-end pipelines (mesh -> DtN -> assemble -> solve).
Solution solve_obstacle(const MaterialScene& scene, const SceneGeometry& geom,
                        ObstacleCondition condition, const IncidentField& incident,
                        const VolumeSource& source, double h, int degree, int dtn_order = 0);

struct EffectiveParams {
  double lambda0 = 1.0;
  double mu0 = 1.0;
  double eta0 = 1.0;
  double tau0 = 1.0;
};

// Base scene with D filled by the case-1/case-2 effective material.
MaterialScene effective_scene(const MaterialScene& base, int case_id, double eps,
                              const EffectiveParams& params);

Solution solve_effective(const MaterialScene& base, const SceneGeometry& geom, int case_id,
                         double eps, const EffectiveParams& params, const IncidentField& incident,
                         const VolumeSource& source, double h, int degree, int dtn_order = 0);

// Per-edge traction nu . (C : grad u) from the adjacent element on the given
// side, averaged to ring-node samples with edge-length weights.
BoundarySamples boundary_traction(const DisplacementField& u, const MaterialScene& scene,
                                  BoundaryTag tag, Side side);

// Scattered trace/traction samples on a circle enclosing the scatterer.
// On dBr the traction comes from the DtN map; on dOmega from the outer-side
// element gradients minus the incident traction.
SurfaceData scattered_surface_data(const Solution& sol, const SceneContext& ctx,
                                   const MaterialScene& scene, BoundaryTag surface);

FarFieldPattern far_field(const Solution& sol, const SceneContext& ctx,
                          const MaterialScene& scene, int n_directions,
                          BoundaryTag surface = BoundaryTag::TruncationBr);

// Betti representation of the scattered field at exterior points from the
// dOmega data plus the source volume potential.
std::vector<CVec2> represent_scattered(const Solution& sol, const SceneContext& ctx,
                                       const MaterialScene& scene,
                                       const std::vector<Vec2>& points);

// Manufactured-solution Dirichlet solve on the full ball with a uniform
// material; returns the H1 error against the analytic solution.
struct ManufacturedSolution {
  std::function<CVec2(const Vec2&)> value;
  std::function<CMat2(const Vec2&)> gradient;  // (k,l) = d_l u_k
  std::function<CVec2(const Vec2&)> load;      // f = L_C u + w^2 rho u
};
double manufactured_h1_error(const Mesh& mesh, int degree, const IsotropicMaterial& material,
                             double omega, const ManufacturedSolution& exact);

// Text serialization: header (counts, omega, eps, case) then one dof per
// line with 17 significant digits; plus a CSV of per-region norms.
void write_solution_text(const Solution& sol, const std::string& path, double omega, double eps,
                         int case_id);
void write_region_norms_csv(const Solution& sol, const std::string& path);

}  // namespace elscat

#endif  // ELSCAT_FEM_HPP
