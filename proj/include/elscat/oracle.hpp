#ifndef ELSCAT_ORACLE_HPP
#define ELSCAT_ORACLE_HPP

#include <optional>
#include <vector>

#include "elscat/materials.hpp"
#include "elscat/waves.hpp"

namespace elscat {

// Semi-analytic separation-of-variables solutions for a disk at the origin
// in a homogeneous background: the brute-force reference the FEM pipeline is
// checked against.
enum class DiskObstacle { Rigid, TractionFree, Penetrable };

struct PenetrableInterior {
  double lambda = 1.0;
  double mu = 1.0;
  Complex rho{1.0, 0.0};
};

class DiskSeriesSolution {
public:
  // Plane-wave incidence only; order_max <= 0 selects the truncation
  // adaptively and verifies trailing-coefficient decay below 1e-14.
  static DiskSeriesSolution solve(double radius, const ExteriorConstants& ext, DiskObstacle type,
                                  const std::optional<PenetrableInterior>& interior,
                                  const IncidentField& incident, int order_max = 0);

  int order_max() const { return order_max_; }
  double radius() const { return radius_; }
  DiskObstacle type() const { return type_; }

  // normalized modal coefficients (scattered p/s; interior p/s) of mode k
  CVec2 scattered_coeff(int k) const { return modes_[k + order_max_].scattered; }
  CVec2 interior_coeff(int k) const { return modes_[k + order_max_].interior; }

  // pointwise evaluation
  CVec2 scattered_at(const Vec2& x) const;
  CVec2 incident_at(const Vec2& x) const { return incident_.value(x); }
  CVec2 total_at(const Vec2& x) const;  // interior field inside a penetrable disk
  CVec2 interior_at(const Vec2& x) const;

  // polar-frame modal coefficients of displacement and traction on the
  // circle of given radius (exterior side; total = incident + scattered)
  struct ModalBoundary {
    std::vector<CVec2> disp;      // index k + order_max
    std::vector<CVec2> traction;
  };
  ModalBoundary scattered_modal_on_circle(double rho) const;
  ModalBoundary total_modal_on_circle(double rho) const;
  ModalBoundary interior_modal_on_circle(double rho) const;

  // sup-norm residual of the defining boundary/transmission conditions
  // sampled on test angles
  double boundary_residual(int n_angles = 720) const;

  // exact modal far field of the scattered wave
  FarFieldPattern far_field(int n_directions) const;

  // analytic surface data for the kernel-based far field (cross-check)
  SurfaceData surface_data(double rho, int n_samples) const;

  // interior norms over the disk (penetrable): {L2, H1}
  struct InteriorNorms {
    double l2 = 0.0;
    double h1 = 0.0;
  };
  InteriorNorms interior_norms() const;

  const ExteriorConstants& exterior() const { return ext_; }

private:
  DiskSeriesSolution() = default;

  struct Mode {
    CVec2 scattered = CVec2::Zero();  // coefficients in the H-basis normalized at rho = a
    CVec2 interior = CVec2::Zero();   // coefficients in the J-basis normalized at rho = a
  };

  double radius_ = 0.5;
  ExteriorConstants ext_;
  DiskObstacle type_ = DiskObstacle::Rigid;
  std::optional<PenetrableInterior> interior_;
  IncidentField incident_ = IncidentField::none(ExteriorConstants());
  int order_max_ = 0;
  std::vector<Mode> modes_;
  // boundary radial factors per |k| (basis normalization denominators)
  std::vector<Complex> hp_a_, hs_a_;      // H_{|k|}(kappa_t a)
  std::vector<Complex> jp_a_, js_a_;      // interior J_{|k|}(kappa_t^i a)
  ComplexWavenumbers interior_k_;
};

// H1(B_r \ D) norm of the difference of two scattered series (same incident,
// same exterior), by per-mode radial quadrature.
double scattered_difference_h1(const DiskSeriesSolution& s1, const DiskSeriesSolution& s2,
                               double r_outer);

// L2(dB_r) norm of the scattered-field difference.
double scattered_difference_l2_circle(const DiskSeriesSolution& s1, const DiskSeriesSolution& s2,
                                      double rho);

// H^{-1/2}(dD) of the total traction (exterior side) in Cartesian modal form.
double traction_hminushalf(const DiskSeriesSolution& s, double rho);

// Mesh-free rate study: impenetrable disk vs effective penetrable disk.
struct RateOracleRow {
  double eps = 0.0;
  double h1_diff = 0.0;          // H1(B_r \ D) of u_eff - u_obstacle
  double traction_dD = 0.0;      // H^{-1/2}(dD) of the effective total traction
  double interior_h1 = 0.0;      // H1(D) of the effective interior field
  double farfield_sup = 0.0;     // sup-norm far-field distance
  int n_modes = 0;
};

struct EffectiveOracleParams {
  double lambda0 = 1.0;
  double mu0 = 1.0;
  double eta0 = 1.0;
  double tau0 = 1.0;
};

std::vector<RateOracleRow> effective_rate_oracle(double radius, const ExteriorConstants& ext,
                                                 int case_id, const EffectiveOracleParams& params,
                                                 const std::vector<double>& eps_list,
                                                 const IncidentField& incident, double r_outer,
                                                 int n_farfield = 256);

}  // namespace elscat

#endif  // ELSCAT_ORACLE_HPP
