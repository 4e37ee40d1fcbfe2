#ifndef ELSCAT_MODAL_HPP
#define ELSCAT_MODAL_HPP

#include "elscat/types.hpp"

namespace elscat {

// Angular-mode cylinder solutions of the isotropic Navier equation.
//
// A compressional mode derives from the potential  phi = F(kappa rho) e^{ik theta}
// as u = grad phi; a shear mode from  chi = F(kappa rho) e^{ik theta}  as
// u = grad^perp chi = ((1/rho) d_theta chi, -d_rho chi).
// Values below are the coefficients of e^{ik theta} in the polar frame
// (e_rho, e_theta): displacement and the traction sigma . e_rho on a circle
// of radius rho, for the material (lambda, mu) the mode lives in.
//
// The formulas are linear in (F, dF) = (F(kappa rho), F'(kappa rho)); passing
// (1, F'/F) yields the basis normalized by its boundary radial factor.
struct ModalTrace {
  CVec2 disp;
  CVec2 traction;
};

template <typename K>
ModalTrace modal_p_trace(int k, K kappa, double rho, double lambda, double mu, Complex f,
                         Complex df) {
  ModalTrace out;
  Complex ik = iu * static_cast<double>(k);
  out.disp[0] = kappa * df;
  out.disp[1] = ik / rho * f;
  out.traction[0] = -(lambda + 2.0 * mu) * kappa * kappa * f - 2.0 * mu * kappa * df / rho +
                    2.0 * mu * static_cast<double>(k) * k / (rho * rho) * f;
  out.traction[1] = 2.0 * mu * ik * (kappa * df / rho - f / (rho * rho));
  return out;
}

template <typename K>
ModalTrace modal_s_trace(int k, K kappa, double rho, double lambda, double mu, Complex f,
                         Complex df) {
  (void)lambda;  // shear modes are trace-free
  ModalTrace out;
  Complex ik = iu * static_cast<double>(k);
  out.disp[0] = ik / rho * f;
  out.disp[1] = -kappa * df;
  out.traction[0] = 2.0 * mu * ik * (kappa * df / rho - f / (rho * rho));
  out.traction[1] =
      mu * (2.0 * kappa * df / rho - 2.0 * static_cast<double>(k) * k / (rho * rho) * f +
            kappa * kappa * f);
  return out;
}

// Rotation helpers between Cartesian and polar frames at angle theta.
inline CVec2 polar_to_cartesian(const CVec2& v, double theta) {
  double c = std::cos(theta), s = std::sin(theta);
  return CVec2(c * v[0] - s * v[1], s * v[0] + c * v[1]);
}
inline CVec2 cartesian_to_polar(const CVec2& v, double theta) {
  double c = std::cos(theta), s = std::sin(theta);
  return CVec2(c * v[0] + s * v[1], -s * v[0] + c * v[1]);
}

}  // namespace elscat

#endif  // ELSCAT_MODAL_HPP
