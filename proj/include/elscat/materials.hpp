#ifndef ELSCAT_MATERIALS_HPP
#define ELSCAT_MATERIALS_HPP

#include <array>
#include <string>

#include "elscat/types.hpp"

namespace elscat {

// Fourth-rank stiffness tensor in 2D with the minor and major symmetries
//   C_ijkl = C_jikl = C_ijlk = C_klij
// enforced at construction. Stored as the full 2x2x2x2 table; isotropic
// tensors remember their Lame pair.
class ElasticTensor {
public:
  enum class Kind { Isotropic, Anisotropic };

  // C_ijkl = lambda d_ij d_kl + mu (d_ik d_jl + d_il d_jk)
  static ElasticTensor isotropic(double lambda, double mu);

  // General table; symmetrized entries must already satisfy the tensor
  // symmetries (checked, throws std::invalid_argument otherwise).
  static ElasticTensor anisotropic(const std::array<double, 16>& entries);

  double operator()(int i, int j, int k, int l) const {
    return c_[((i * 2 + j) * 2 + k) * 2 + l];
  }

  Kind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  double mu() const { return mu_; }

  ElasticTensor scaled(double factor) const;

  // (C:A)_ij = sum_kl C_ijkl A_kl
  CMat2 contract(const CMat2& a) const;

private:
  ElasticTensor() = default;
  std::array<double, 16> c_{};
  Kind kind_ = Kind::Isotropic;
  double lambda_ = 0.0;
  double mu_ = 0.0;
};

CMat2 double_contract(const ElasticTensor& c, const CMat2& a);

// rho with Re > 0, Im >= 0 (density and damping).
struct ComplexDensity {
  Complex value{1.0, 0.0};

  ComplexDensity() = default;
  explicit ComplexDensity(Complex v);
};

// Homogeneous isotropic background (lambda_e, mu_e, rho_e) and frequency.
struct ExteriorConstants {
  double lambda_e = 2.0;
  double mu_e = 1.0;
  double rho_e = 1.0;  // participates in the wavenumbers; default 1 keeps
                       // kappa_s = omega sqrt(1/mu_e), kappa_p = omega sqrt(1/(lambda_e+2 mu_e))
  double omega = pi;

  ExteriorConstants() = default;
  ExteriorConstants(double lambda, double mu, double rho, double omega_);

  // Satisfied by construction: mu_e > 0, 2 lambda_e + 2 mu_e > 0, rho_e > 0.
  ElasticTensor tensor() const { return ElasticTensor::isotropic(lambda_e, mu_e); }
};

struct Wavenumbers {
  double kp = 0.0;
  double ks = 0.0;
};

// kappa_p = omega sqrt(rho_e/(lambda_e+2 mu_e)), kappa_s = omega sqrt(rho_e/mu_e)
Wavenumbers wavenumbers(const ExteriorConstants& ext);

// Interior (possibly lossy) material gives complex wavenumbers.
struct ComplexWavenumbers {
  Complex kp{0.0, 0.0};
  Complex ks{0.0, 0.0};
};
ComplexWavenumbers wavenumbers(double lambda, double mu, Complex rho, double omega);

struct IsotropicMaterial {
  ElasticTensor tensor = ElasticTensor::isotropic(2.0, 1.0);
  ComplexDensity density;
};

// Effective-medium parameter laws.
// Case 1 (traction-free): lambda = eps lambda0, mu = eps mu0, rho = eta0 + i tau0.
IsotropicMaterial effective_material_case1(double eps, double lambda0, double mu0,
                                           double eta0, double tau0);
// Case 2 (rigid): lambda = eps^-2 lambda0, mu = eps^-2 mu0, rho = eta0 + i eps^-1 tau0.
IsotropicMaterial effective_material_case2(double eps, double lambda0, double mu0,
                                           double eta0, double tau0);

// Per-region material assignment plus the exterior constants. The shell
// entry always equals the exterior material.
class MaterialScene {
public:
  MaterialScene(const ExteriorConstants& ext, IsotropicMaterial annulus);

  const ExteriorConstants& exterior() const { return ext_; }

  void set_region(Region r, IsotropicMaterial m);
  const IsotropicMaterial& material(Region r) const;
  bool has_material(Region r) const { return assigned_[static_cast<int>(r)]; }

private:
  ExteriorConstants ext_;
  std::array<IsotropicMaterial, region_count> materials_{};
  std::array<bool, region_count> assigned_{};
};

struct EllipticityReport {
  bool pass = false;
  double min_form = 0.0;
  double max_form = 0.0;
  int n_samples = 0;
  std::string witness;  // offending sample, empty on pass
};

// Samples random unit-Frobenius complex symmetric matrices xi (fixed seed)
// and checks c_min <= Re(xi : C : conj(xi)) <= c_max.
EllipticityReport check_legendre_ellipticity(const ElasticTensor& c, double c_min,
                                             double c_max, int n_samples,
                                             std::uint64_t seed = 0x5eed);

}  // namespace elscat

#endif  // ELSCAT_MATERIALS_HPP
