#include "elscat/materials.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace elscat {

const char* to_string(Region r) {
  switch (r) {
    case Region::D: return "D";
    case Region::Annulus: return "ANNULUS";
    case Region::Shell: return "SHELL";
  }
  return "?";
}

const char* to_string(BoundaryTag t) {
  switch (t) {
    case BoundaryTag::ObstacleD: return "dD";
    case BoundaryTag::MediumOmega: return "dOmega";
    case BoundaryTag::TruncationBr: return "dBr";
  }
  return "?";
}

namespace {
inline double kron(int a, int b) { return a == b ? 1.0 : 0.0; }
}  // namespace

ElasticTensor ElasticTensor::isotropic(double lambda, double mu) {
  ElasticTensor t;
  t.kind_ = Kind::Isotropic;
  t.lambda_ = lambda;
  t.mu_ = mu;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          t.c_[((i * 2 + j) * 2 + k) * 2 + l] =
              lambda * kron(i, j) * kron(k, l) +
              mu * (kron(i, k) * kron(j, l) + kron(i, l) * kron(j, k));
  return t;
}

ElasticTensor ElasticTensor::anisotropic(const std::array<double, 16>& entries) {
  ElasticTensor t;
  t.kind_ = Kind::Anisotropic;
  t.c_ = entries;
  auto at = [&](int i, int j, int k, int l) { return entries[((i * 2 + j) * 2 + k) * 2 + l]; };
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          if (at(i, j, k, l) != at(k, l, i, j) || at(i, j, k, l) != at(j, i, k, l) ||
              at(i, j, k, l) != at(i, j, l, k))
            throw std::invalid_argument("ElasticTensor: entries violate tensor symmetries");
        }
  return t;
}

ElasticTensor ElasticTensor::scaled(double factor) const {
  ElasticTensor t = *this;
  for (double& v : t.c_) v *= factor;
  t.lambda_ *= factor;
  t.mu_ *= factor;
  return t;
}

CMat2 ElasticTensor::contract(const CMat2& a) const {
  CMat2 out = CMat2::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Complex s = 0.0;
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) s += (*this)(i, j, k, l) * a(k, l);
      out(i, j) = s;
    }
  return out;
}

CMat2 double_contract(const ElasticTensor& c, const CMat2& a) { return c.contract(a); }

ComplexDensity::ComplexDensity(Complex v) : value(v) {
  if (!(v.real() > 0.0) || v.imag() < 0.0)
    throw std::invalid_argument("ComplexDensity: requires Re rho > 0 and Im rho >= 0");
}

ExteriorConstants::ExteriorConstants(double lambda, double mu, double rho, double omega_)
    : lambda_e(lambda), mu_e(mu), rho_e(rho), omega(omega_) {
  if (!(mu_e > 0.0) || !(2.0 * lambda_e + 2.0 * mu_e > 0.0) || !(rho_e > 0.0))
    throw std::invalid_argument("ExteriorConstants: strong convexity violated");
  if (!(omega > 0.0)) throw std::invalid_argument("ExteriorConstants: omega must be positive");
}

Wavenumbers wavenumbers(const ExteriorConstants& ext) {
  return {ext.omega * std::sqrt(ext.rho_e / (ext.lambda_e + 2.0 * ext.mu_e)),
          ext.omega * std::sqrt(ext.rho_e / ext.mu_e)};
}

ComplexWavenumbers wavenumbers(double lambda, double mu, Complex rho, double omega) {
  auto root = [](Complex z) {
    Complex w = std::sqrt(z);
    // principal branch; radiating convention needs Im kappa >= 0
    if (w.imag() < 0.0) w = -w;
    return w;
  };
  return {omega * root(rho / Complex(lambda + 2.0 * mu)), omega * root(rho / Complex(mu))};
}

IsotropicMaterial effective_material_case1(double eps, double lambda0, double mu0,
                                           double eta0, double tau0) {
  if (!(eps > 0.0)) throw std::invalid_argument("effective_material_case1: eps must be positive");
  if (!(mu0 > 0.0) || !(2.0 * lambda0 + 2.0 * mu0 > 0.0))
    throw std::invalid_argument("effective_material_case1: (lambda0, mu0) not strongly convex");
  if (!(eta0 > 0.0) || !(tau0 > 0.0))
    throw std::invalid_argument("effective_material_case1: eta0, tau0 must be positive");
  return {ElasticTensor::isotropic(eps * lambda0, eps * mu0),
          ComplexDensity(Complex(eta0, tau0))};
}

IsotropicMaterial effective_material_case2(double eps, double lambda0, double mu0,
                                           double eta0, double tau0) {
  if (!(eps > 0.0)) throw std::invalid_argument("effective_material_case2: eps must be positive");
  if (!(mu0 > 0.0) || !(2.0 * lambda0 + 2.0 * mu0 > 0.0))
    throw std::invalid_argument("effective_material_case2: (lambda0, mu0) not strongly convex");
  if (!(eta0 > 0.0) || !(tau0 > 0.0))
    throw std::invalid_argument("effective_material_case2: eta0, tau0 must be positive");
  double s = 1.0 / (eps * eps);
  return {ElasticTensor::isotropic(s * lambda0, s * mu0),
          ComplexDensity(Complex(eta0, tau0 / eps))};
}

MaterialScene::MaterialScene(const ExteriorConstants& ext, IsotropicMaterial annulus)
    : ext_(ext) {
  set_region(Region::Annulus, std::move(annulus));
  set_region(Region::Shell, {ext.tensor(), ComplexDensity(Complex(ext.rho_e, 0.0))});
}

void MaterialScene::set_region(Region r, IsotropicMaterial m) {
  if (r == Region::Shell) {
    // the shell is pinned to the exterior constants
    ElasticTensor e = ext_.tensor();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l)
            if (m.tensor(i, j, k, l) != e(i, j, k, l))
              throw std::invalid_argument("MaterialScene: shell material must equal exterior");
    if (m.density.value != Complex(ext_.rho_e, 0.0))
      throw std::invalid_argument("MaterialScene: shell density must equal rho_e");
  }
  materials_[static_cast<int>(r)] = std::move(m);
  assigned_[static_cast<int>(r)] = true;
}

const IsotropicMaterial& MaterialScene::material(Region r) const {
  if (!assigned_[static_cast<int>(r)])
    throw std::runtime_error(std::string("MaterialScene: no material for region ") + to_string(r));
  return materials_[static_cast<int>(r)];
}

EllipticityReport check_legendre_ellipticity(const ElasticTensor& c, double c_min,
                                             double c_max, int n_samples,
                                             std::uint64_t seed) {
  if (c_min > c_max || n_samples < 1)
    throw std::invalid_argument("check_legendre_ellipticity: bad arguments");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  EllipticityReport rep;
  rep.n_samples = n_samples;
  rep.pass = true;
  rep.min_form = std::numeric_limits<double>::infinity();
  rep.max_form = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < n_samples; ++s) {
    CMat2 xi;
    Complex a(gauss(rng), gauss(rng)), b(gauss(rng), gauss(rng)), d(gauss(rng), gauss(rng));
    xi << a, b, b, d;
    double nrm = std::sqrt(std::norm(a) + 2.0 * std::norm(b) + std::norm(d));
    xi /= nrm;
    CMat2 cxi = c.contract(xi);
    Complex form = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) form += xi(i, j) * std::conj(cxi(i, j));
    double q = form.real();
    rep.min_form = std::min(rep.min_form, q);
    rep.max_form = std::max(rep.max_form, q);
    if (q < c_min || q > c_max) {
      rep.pass = false;
      if (rep.witness.empty()) {
        std::ostringstream os;
        os << "xi = [" << xi(0, 0) << ", " << xi(0, 1) << "; " << xi(1, 0) << ", " << xi(1, 1)
           << "], form = " << q;
        rep.witness = os.str();
      }
    }
  }
  return rep;
}

}  // namespace elscat
