#ifndef ELSCAT_DTN_HPP
#define ELSCAT_DTN_HPP

#include <string>
#include <vector>

#include "elscat/fespace.hpp"
#include "elscat/materials.hpp"
#include "elscat/types.hpp"

namespace elscat {

// Samples of a boundary field, aligned with FunctionSpace::ring(tag).node_ids.
using BoundarySamples = std::vector<CVec2>;

// Exact nonreflecting map on the truncation circle: per angular mode k the
// 2x2 matrix taking polar displacement coefficients to polar traction
// coefficients of the radiating exterior solution. Built from the two
// radiating Hankel basis solutions by trace matching; ratio-normalized so
// high orders never overflow.
class DtnOperator {
public:
  DtnOperator(const ExteriorConstants& ext, double radius, int order_max);

  static int default_order(const ExteriorConstants& ext, double radius);

  int order_max() const { return order_max_; }
  double radius() const { return radius_; }
  const ExteriorConstants& exterior() const { return ext_; }

  // Lambda_k, |k| <= order_max
  const CMat2& mode(int k) const { return modes_[k + order_max_]; }

  // Polar modal application (coefficients of e^{ik theta}).
  CVec2 apply_mode(int k, const CVec2& disp_coeff) const { return mode(k) * disp_coeff; }

  // Nodal application on a circular ring: Cartesian trace samples in,
  // Cartesian traction samples out. Modes beyond the band are dropped.
  BoundarySamples apply(const FunctionSpace::BoundaryRing& ring,
                        const BoundarySamples& trace) const;

  // Dense matrix of the nodal map (2m x 2m), consumed by assembly.
  Eigen::MatrixXcd nodal_matrix(const FunctionSpace::BoundaryRing& ring) const;

  // Sign diagnostic on the asymptotic blocks (static-limit behaviour):
  // the Hermitian part of -Lambda_k must be PSD for |k| >= k_start.
  struct SignReport {
    int k_start = 0;
    double min_eigenvalue = 0.0;
    bool pass = false;
  };
  SignReport asymptotic_sign_report() const;

  // Diagnostic text dump: one line per mode, four complex entries.
  void dump(const std::string& path) const;

private:
  ExteriorConstants ext_;
  double radius_;
  int order_max_;
  std::vector<CMat2> modes_;
};

// Im int_{dBr} traction . conj(trace) ds by quadrature over the ring nodes.
double radiation_flux(const FunctionSpace::BoundaryRing& ring, const BoundarySamples& trace,
                      const BoundarySamples& traction);

}  // namespace elscat

#endif  // ELSCAT_DTN_HPP
