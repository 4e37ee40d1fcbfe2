#ifndef ELSCAT_WAVES_HPP
#define ELSCAT_WAVES_HPP

#include <string>
#include <vector>

#include "elscat/fespace.hpp"
#include "elscat/geometry.hpp"
#include "elscat/materials.hpp"
#include "elscat/types.hpp"

namespace elscat {

// sigma(J) . nu for an isotropic material, J(k,l) = d_l u_k.
inline CVec2 elastic_traction(const CMat2& jacobian, double lambda, double mu, const Vec2& nu) {
  Complex div = jacobian(0, 0) + jacobian(1, 1);
  CMat2 sigma = lambda * div * CMat2::Identity() + mu * (jacobian + jacobian.transpose());
  return sigma * nu.cast<Complex>();
}

// 2D fundamental solution of the homogeneous Navier equation:
//   Phi(x,y) = (i/4)(1/mu) H0(ks R) I + (i/(4 w^2 rho)) Hess_x[H0(ks R) - H0(kp R)]
CMat2 fundamental_solution(const Vec2& x, const Vec2& y, const ExteriorConstants& ext);

// Jacobian of the field x -> Phi(x,y) e.
CMat2 fundamental_solution_gradient(const Vec2& x, const Vec2& y, const CVec2& e,
                                    const ExteriorConstants& ext);

// Incident fields: entire plane waves plus the active point source.
class IncidentField {
public:
  enum class Kind { PlaneP, PlaneS, PointSource, None };

  static IncidentField none(const ExteriorConstants& ext);
  static IncidentField plane_p(const Vec2& direction, const ExteriorConstants& ext);
  static IncidentField plane_s(const Vec2& direction, const ExteriorConstants& ext);
  static IncidentField point_source(const Vec2& location, const CVec2& polarization,
                                    const ExteriorConstants& ext);

  Kind kind() const { return kind_; }
  const ExteriorConstants& exterior() const { return ext_; }
  const Vec2& direction() const { return dir_; }
  const Vec2& location() const { return loc_; }
  bool is_entire() const { return kind_ != Kind::PointSource; }
  bool is_zero() const { return kind_ == Kind::None; }

  CVec2 value(const Vec2& x) const;
  CMat2 gradient(const Vec2& x) const;  // (k,l) = d_l u_k
  CVec2 traction(const Vec2& x, const Vec2& nu) const;

  // point sources must sit outside Omega and inside the source ball
  void validate_against(const SceneGeometry& geom) const;

private:
  IncidentField() = default;
  Kind kind_ = Kind::None;
  ExteriorConstants ext_;
  Vec2 dir_ = Vec2(1.0, 0.0);
  Vec2 loc_ = Vec2::Zero();
  CVec2 pol_ = CVec2(1.0, 0.0);
};

// Compactly supported smooth volume source: amplitude * bump(|x-center|/width).
struct VolumeSource {
  Vec2 center = Vec2::Zero();
  double width = 0.0;
  CVec2 amplitude = CVec2::Zero();

  bool empty() const { return width <= 0.0 || amplitude.norm() == 0.0; }
  CVec2 value(const Vec2& x) const;
  void validate_against(const SceneGeometry& geom) const;
};

// Far-field pattern on uniformly sampled directions; the p/s split is
// defined from the total by radial/tangential projection.
struct FarFieldPattern {
  std::vector<double> angles;
  std::vector<CVec2> total;
  std::vector<CVec2> p_part;  // (u . xhat) xhat
  std::vector<CVec2> s_part;  // total - p_part

  static FarFieldPattern from_total(std::vector<double> angles, std::vector<CVec2> totals);
  void write_csv(const std::string& path) const;
};

// sup-norm over shared sample directions
double far_field_distance(const FarFieldPattern& p1, const FarFieldPattern& p2);

// Scattered-field samples on a circle (trace and traction), used for the
// kernel integrals and the Betti representation.
struct SurfaceData {
  double radius = 0.0;
  std::vector<double> angles;
  std::vector<CVec2> trace;
  std::vector<CVec2> traction;
};

// Betti boundary-integral representation of the scattered field from its
// trace and traction on an enclosing circle (usually dOmega):
//   u^s(x) = -int [{T_nu^y Phi(x,y)}^T u^s(y) - Phi(x,y) T_nu u^s(y)] ds(y)
// for x strictly outside the circle (guarded against quadrature breakdown).
CVec2 represent_scattered_boundary(const SurfaceData& surface, const Vec2& x,
                                   const ExteriorConstants& ext);

// Volume potential int Phi(x,y) f(y) dy over the source support.
CVec2 volume_potential(const FunctionSpace& space, const VolumeSource& f, const Vec2& x,
                       const ExteriorConstants& ext);

// Far-field kernel integrals with the 2D normalization constants fixed once
// against the definitional large-radius limit of a point source.
class FarFieldEngine {
public:
  explicit FarFieldEngine(const ExteriorConstants& ext);

  Complex gamma_p() const { return gamma_p_; }
  Complex gamma_s() const { return gamma_s_; }

  // far-field amplitudes of the unit point source (volume-term kernels)
  Complex source_gamma_p() const { return source_gamma_p_; }
  Complex source_gamma_s() const { return source_gamma_s_; }

  struct Calibration {
    double max_rel_dev_p = 0.0;  // across the check radii {50, 100, 200}
    double max_rel_dev_s = 0.0;
  };
  const Calibration& calibration() const { return calibration_; }

  // Raw kernel integrals (no gamma): K_p is radial, K_s tangential.
  void kernels(const SurfaceData& surface, const std::vector<double>& directions,
               std::vector<CVec2>& kp, std::vector<CVec2>& ks) const;

  // Pattern from scattered boundary data on an enclosing circle.
  FarFieldPattern pattern(const SurfaceData& surface, int n_directions) const;

  // Far field radiated by a volume source (plane-wave kernels against f),
  // for integration surfaces that do not enclose the source support.
  FarFieldPattern volume_pattern(const FunctionSpace& space, const VolumeSource& f,
                                 int n_directions) const;

  static std::vector<double> direction_grid(int n_directions);

private:
  ExteriorConstants ext_;
  Complex gamma_p_{0.0, 0.0};
  Complex gamma_s_{0.0, 0.0};
  Complex source_gamma_p_{0.0, 0.0};
  Complex source_gamma_s_{0.0, 0.0};
  Calibration calibration_;
};

}  // namespace elscat

#endif  // ELSCAT_WAVES_HPP
