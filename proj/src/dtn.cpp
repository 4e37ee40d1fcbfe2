#include "elscat/dtn.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "elscat/modal.hpp"
#include "elscat/special.hpp"

namespace elscat {

int DtnOperator::default_order(const ExteriorConstants& ext, double radius) {
  auto kk = wavenumbers(ext);
  return std::max(40, static_cast<int>(std::ceil(1.5 * kk.ks * radius)) + 20);
}

DtnOperator::DtnOperator(const ExteriorConstants& ext, double radius, int order_max)
    : ext_(ext), radius_(radius), order_max_(order_max) {
  if (!(radius > 0.0) || order_max < 1)
    throw std::invalid_argument("DtnOperator: radius must be positive and order >= 1");
  auto kk = wavenumbers(ext);
  auto ratio_p = hankel1_prev_ratio_seq(kk.kp * radius, order_max + 1);
  auto ratio_s = hankel1_prev_ratio_seq(kk.ks * radius, order_max + 1);

  modes_.resize(2 * order_max + 1);
  for (int k = -order_max; k <= order_max; ++k) {
    int ka = std::abs(k);
    Complex ldp = hankel1_logderiv(ratio_p, ka, kk.kp * radius);
    Complex lds = hankel1_logderiv(ratio_s, ka, kk.ks * radius);
    // basis columns normalized by H_k(kappa r); log-derivatives carry the rest
    ModalTrace p = modal_p_trace(k, kk.kp, radius, ext.lambda_e, ext.mu_e, 1.0, ldp);
    ModalTrace s = modal_s_trace(k, kk.ks, radius, ext.lambda_e, ext.mu_e, 1.0, lds);
    CMat2 disp, trac;
    disp.col(0) = p.disp;
    disp.col(1) = s.disp;
    trac.col(0) = p.traction;
    trac.col(1) = s.traction;
    double scale = disp.cwiseAbs().maxCoeff();
    if (std::abs(disp.determinant()) <= 1e-12 * scale * scale)
      throw std::runtime_error(
          "DtnOperator: modal trace system is singular (resonant (omega, r) configuration) at "
          "mode " +
          std::to_string(k));
    modes_[k + order_max] = trac * disp.inverse();
  }

  // reflection symmetry of the polar frame: Lambda_{-k} = S Lambda_k S, S = diag(1,-1)
  Mat2 s_flip;
  s_flip << 1.0, 0.0, 0.0, -1.0;
  for (int k = 1; k <= order_max; ++k) {
    CMat2 expect = s_flip * mode(k) * s_flip;
    if ((mode(-k) - expect).norm() > 1e-10 * (1.0 + mode(k).norm()))
      throw std::runtime_error("DtnOperator: reflection symmetry violated at mode " +
                               std::to_string(k));
  }
}

BoundarySamples DtnOperator::apply(const FunctionSpace::BoundaryRing& ring,
                                   const BoundarySamples& trace) const {
  int m = static_cast<int>(ring.node_ids.size());
  if (static_cast<int>(trace.size()) != m)
    throw std::invalid_argument("DtnOperator::apply: sample count does not match the ring");
  if (std::abs(ring.circle.radius - radius_) > 1e-9 * radius_)
    throw std::invalid_argument("DtnOperator::apply: ring radius does not match the operator");

  std::vector<double> w(m);
  for (int i = 0; i < m; ++i) {
    double next = (i + 1 < m ? ring.angles[i + 1] : ring.angles[0] + 2.0 * pi);
    double prev = (i > 0 ? ring.angles[i - 1] : ring.angles[m - 1] - 2.0 * pi);
    w[i] = 0.5 * (next - prev);
  }

  int nk = 2 * order_max_ + 1;
  std::vector<CVec2> coeff(nk, CVec2::Zero());
  for (int i = 0; i < m; ++i) {
    CVec2 polar = cartesian_to_polar(trace[i], ring.angles[i]);
    for (int k = -order_max_; k <= order_max_; ++k)
      coeff[k + order_max_] +=
          (w[i] / (2.0 * pi)) * std::exp(-iu * static_cast<double>(k) * ring.angles[i]) * polar;
  }
  for (int k = -order_max_; k <= order_max_; ++k)
    coeff[k + order_max_] = (mode(k) * coeff[k + order_max_]).eval();

  BoundarySamples out(m, CVec2::Zero());
  for (int i = 0; i < m; ++i) {
    CVec2 polar = CVec2::Zero();
    for (int k = -order_max_; k <= order_max_; ++k)
      polar += std::exp(iu * static_cast<double>(k) * ring.angles[i]) * coeff[k + order_max_];
    out[i] = polar_to_cartesian(polar, ring.angles[i]);
  }
  return out;
}

Eigen::MatrixXcd DtnOperator::nodal_matrix(const FunctionSpace::BoundaryRing& ring) const {
  int m = static_cast<int>(ring.node_ids.size());
  if (std::abs(ring.circle.radius - radius_) > 1e-9 * radius_)
    throw std::invalid_argument("DtnOperator::nodal_matrix: ring radius mismatch");
  std::vector<double> w(m);
  for (int i = 0; i < m; ++i) {
    double next = (i + 1 < m ? ring.angles[i + 1] : ring.angles[0] + 2.0 * pi);
    double prev = (i > 0 ? ring.angles[i - 1] : ring.angles[m - 1] - 2.0 * pi);
    w[i] = 0.5 * (next - prev);
  }

  int nk = 2 * order_max_ + 1;
  // analysis: polar modal coefficients from Cartesian nodal values
  Eigen::MatrixXcd analysis(2 * nk, 2 * m);
  for (int i = 0; i < m; ++i) {
    double th = ring.angles[i];
    double c = std::cos(th), s = std::sin(th);
    for (int k = -order_max_; k <= order_max_; ++k) {
      Complex e = (w[i] / (2.0 * pi)) * std::exp(-iu * static_cast<double>(k) * th);
      int row = 2 * (k + order_max_);
      analysis(row, 2 * i) = e * c;
      analysis(row, 2 * i + 1) = e * s;
      analysis(row + 1, 2 * i) = -e * s;
      analysis(row + 1, 2 * i + 1) = e * c;
    }
  }
  for (int k = -order_max_; k <= order_max_; ++k)
    analysis.middleRows(2 * (k + order_max_), 2) =
        (mode(k) * analysis.middleRows(2 * (k + order_max_), 2)).eval();

  // synthesis back to Cartesian nodal samples
  Eigen::MatrixXcd synthesis(2 * m, 2 * nk);
  for (int i = 0; i < m; ++i) {
    double th = ring.angles[i];
    double c = std::cos(th), s = std::sin(th);
    for (int k = -order_max_; k <= order_max_; ++k) {
      Complex e = std::exp(iu * static_cast<double>(k) * th);
      int col = 2 * (k + order_max_);
      synthesis(2 * i, col) = e * c;
      synthesis(2 * i, col + 1) = -e * s;
      synthesis(2 * i + 1, col) = e * s;
      synthesis(2 * i + 1, col + 1) = e * c;
    }
  }
  return synthesis * analysis;
}

DtnOperator::SignReport DtnOperator::asymptotic_sign_report() const {
  auto kk = wavenumbers(ext_);
  SignReport rep;
  rep.k_start = static_cast<int>(std::ceil(1.5 * kk.ks * radius_)) + 5;
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  rep.pass = rep.k_start <= order_max_;
  for (int k = rep.k_start; k <= order_max_; ++k) {
    for (int sk : {-k, k}) {
      CMat2 herm = -0.5 * (mode(sk) + mode(sk).adjoint());
      Eigen::SelfAdjointEigenSolver<CMat2> eig(herm);
      double lo = eig.eigenvalues().minCoeff();
      rep.min_eigenvalue = std::min(rep.min_eigenvalue, lo);
      if (lo < -1e-8 * mode(sk).norm()) rep.pass = false;
    }
  }
  return rep;
}

void DtnOperator::dump(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("DtnOperator::dump: cannot open " + path);
  os << "# mode  L00.re L00.im  L01.re L01.im  L10.re L10.im  L11.re L11.im\n";
  char buf[256];
  for (int k = -order_max_; k <= order_max_; ++k) {
    const CMat2& L = mode(k);
    std::snprintf(buf, sizeof buf, "%d %.17g %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n", k,
                  L(0, 0).real(), L(0, 0).imag(), L(0, 1).real(), L(0, 1).imag(), L(1, 0).real(),
                  L(1, 0).imag(), L(1, 1).real(), L(1, 1).imag());
    os << buf;
  }
}

double radiation_flux(const FunctionSpace::BoundaryRing& ring, const BoundarySamples& trace,
                      const BoundarySamples& traction) {
  int m = static_cast<int>(ring.node_ids.size());
  if (static_cast<int>(trace.size()) != m || static_cast<int>(traction.size()) != m)
    throw std::invalid_argument("radiation_flux: sample count does not match the ring");
  KahanSum acc;
  for (int i = 0; i < m; ++i) {
    double next = (i + 1 < m ? ring.angles[i + 1] : ring.angles[0] + 2.0 * pi);
    double prev = (i > 0 ? ring.angles[i - 1] : ring.angles[m - 1] - 2.0 * pi);
    double w = 0.5 * (next - prev) * ring.circle.radius;
    Complex dot = traction[i][0] * std::conj(trace[i][0]) + traction[i][1] * std::conj(trace[i][1]);
    acc.add(w * dot.imag());
  }
  return acc.value();
}

}  // namespace elscat
