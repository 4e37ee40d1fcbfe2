#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "elscat/dtn.hpp"
#include "elscat/modal.hpp"
#include "elscat/special.hpp"

using namespace elscat;

namespace {

Complex hankel_at(int k, double z) { return hankel1_seq(z, std::max(k + 1, 2))[k]; }
Complex hankel_d_at(int k, double z) {
  auto h = hankel1_seq(z, std::max(k + 1, 2));
  return cyl_derivative(h, k, z);
}

// Cartesian displacement of the radiating P/S mode via the modal formulas.
CVec2 mode_disp_cart(bool p_mode, int k, double kappa, double lambda, double mu, const Vec2& x) {
  double rho = x.norm(), th = std::atan2(x.y(), x.x());
  int ka = std::abs(k);
  Complex f = hankel_at(ka, kappa * rho), df = hankel_d_at(ka, kappa * rho);
  if (k < 0 && (ka % 2 == 1)) {
    f = -f;
    df = -df;
  }
  ModalTrace t = p_mode ? modal_p_trace(k, kappa, rho, lambda, mu, f, df)
                        : modal_s_trace(k, kappa, rho, lambda, mu, f, df);
  Complex phase = std::exp(iu * static_cast<double>(k) * th);
  return polar_to_cartesian(CVec2(t.disp[0] * phase, t.disp[1] * phase), th);
}

ExteriorConstants default_ext() { return ExteriorConstants(2.0, 1.0, 1.0, pi); }

SceneGeometry default_scene() {
  SceneGeometry g;
  g.obstacle = CircleSpec{Vec2::Zero(), 0.5};
  g.omega = CircleSpec{Vec2::Zero(), 1.0};
  g.truncation_radius = 2.0;
  g.source_radius = 1.5;
  return g;
}

}  // namespace

TEST_CASE("modal displacement equals the gradient of its potential") {
  double kappa = 1.3, lambda = 2.0, mu = 1.0;
  int k = 3;
  auto potential = [&](const Vec2& x) {
    double rho = x.norm(), th = std::atan2(x.y(), x.x());
    return hankel_at(k, kappa * rho) * std::exp(iu * static_cast<double>(k) * th);
  };
  double fd = 1e-6;
  for (Vec2 x : {Vec2(1.1, 0.4), Vec2(-0.8, 1.3), Vec2(0.3, -1.7)}) {
    CVec2 grad;
    grad[0] = (potential(x + Vec2(fd, 0)) - potential(x - Vec2(fd, 0))) / (2.0 * fd);
    grad[1] = (potential(x + Vec2(0, fd)) - potential(x - Vec2(0, fd))) / (2.0 * fd);
    CVec2 u = mode_disp_cart(true, k, kappa, lambda, mu, x);
    CHECK((u - grad).norm() <= 1e-6 * grad.norm());
  }
}

TEST_CASE("modal traction equals nu . (C : grad u) by finite differences") {
  double lambda = 2.0, mu = 1.0;
  double fd = 1e-5;
  for (bool p_mode : {true, false}) {
    double kappa = p_mode ? 1.1 : 2.3;
    for (int k : {0, 1, 4, -3}) {
      for (double rho : {1.4, 2.0}) {
        double th = 0.83;
        Vec2 x(rho * std::cos(th), rho * std::sin(th));
        auto u_at = [&](const Vec2& p) { return mode_disp_cart(p_mode, k, kappa, lambda, mu, p); };
        CMat2 jac;  // jac(c, d) = d_d u_c
        for (int d = 0; d < 2; ++d) {
          Vec2 step = Vec2::Zero();
          step[d] = fd;
          CVec2 diff = (u_at(x + step) - u_at(x - step)) / (2.0 * fd);
          jac(0, d) = diff[0];
          jac(1, d) = diff[1];
        }
        Complex div = jac(0, 0) + jac(1, 1);
        CMat2 sigma = lambda * div * CMat2::Identity() + mu * (jac + jac.transpose());
        Vec2 nu = x / rho;
        CVec2 traction_fd = sigma * nu.cast<Complex>();

        int ka = std::abs(k);
        Complex f = hankel_at(ka, kappa * rho), df = hankel_d_at(ka, kappa * rho);
        if (k < 0 && (ka % 2 == 1)) {
          f = -f;
          df = -df;
        }
        ModalTrace t = p_mode ? modal_p_trace(k, kappa, rho, lambda, mu, f, df)
                              : modal_s_trace(k, kappa, rho, lambda, mu, f, df);
        Complex phase = std::exp(iu * static_cast<double>(k) * th);
        CVec2 traction =
            polar_to_cartesian(CVec2(t.traction[0] * phase, t.traction[1] * phase), th);
        CHECK((traction - traction_fd).norm() <= 2e-6 * traction_fd.norm());
      }
    }
  }
}

TEST_CASE("apply_dtn reproduces analytic radiating tractions for all banded modes") {
  ExteriorConstants ext = default_ext();
  auto kk = wavenumbers(ext);
  double r = 2.0;
  int order = 40;
  DtnOperator dtn(ext, r, order);

  Mesh mesh = build_scene_mesh(default_scene(), 0.05);
  FunctionSpace space(mesh, 2);
  const auto& ring = space.ring(BoundaryTag::TruncationBr);
  int m = static_cast<int>(ring.node_ids.size());
  REQUIRE(m > 2 * (2 * order + 1));

  double worst = 0.0;
  for (int k = -order; k <= order; ++k) {
    for (bool p_mode : {true, false}) {
      double kappa = p_mode ? kk.kp : kk.ks;
      int ka = std::abs(k);
      Complex f = hankel_at(ka, kappa * r), df = hankel_d_at(ka, kappa * r);
      if (k < 0 && (ka % 2 == 1)) {
        f = -f;
        df = -df;
      }
      ModalTrace t = p_mode ? modal_p_trace(k, kappa, r, ext.lambda_e, ext.mu_e, f, df)
                            : modal_s_trace(k, kappa, r, ext.lambda_e, ext.mu_e, f, df);
      BoundarySamples trace(m), exact(m);
      for (int i = 0; i < m; ++i) {
        Complex phase = std::exp(iu * static_cast<double>(k) * ring.angles[i]);
        trace[i] = polar_to_cartesian(CVec2(t.disp[0] * phase, t.disp[1] * phase), ring.angles[i]);
        exact[i] = polar_to_cartesian(CVec2(t.traction[0] * phase, t.traction[1] * phase),
                                      ring.angles[i]);
      }
      BoundarySamples got = dtn.apply(ring, trace);
      double num = 0.0, den = 0.0;
      for (int i = 0; i < m; ++i) {
        num += (got[i] - exact[i]).squaredNorm();
        den += exact[i].squaredNorm();
      }
      worst = std::max(worst, std::sqrt(num / den));
    }
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("band truncation drops out-of-band modes") {
  ExteriorConstants ext = default_ext();
  DtnOperator dtn(ext, 2.0, 1);
  Mesh mesh = build_scene_mesh(default_scene(), 0.1);
  FunctionSpace space(mesh, 1);
  const auto& ring = space.ring(BoundaryTag::TruncationBr);
  int m = static_cast<int>(ring.node_ids.size());
  BoundarySamples trace(m);
  for (int i = 0; i < m; ++i) {
    Complex mode5 = std::exp(iu * 5.0 * ring.angles[i]);
    trace[i] = polar_to_cartesian(CVec2(mode5, Complex(0.0, 0.0)), ring.angles[i]);
  }
  BoundarySamples out = dtn.apply(ring, trace);
  double mx = 0.0;
  for (const auto& v : out) mx = std::max(mx, v.norm());
  CHECK(mx <= 1e-12);
}

TEST_CASE("apply_dtn linearity") {
  ExteriorConstants ext = default_ext();
  DtnOperator dtn(ext, 2.0, 12);
  Mesh mesh = build_scene_mesh(default_scene(), 0.1);
  FunctionSpace space(mesh, 2);
  const auto& ring = space.ring(BoundaryTag::TruncationBr);
  int m = static_cast<int>(ring.node_ids.size());
  std::mt19937_64 rng(23);
  std::normal_distribution<double> gauss;
  BoundarySamples u(m), v(m), combo(m);
  Complex alpha(1.3, -0.4), beta(-0.2, 2.1);
  for (int i = 0; i < m; ++i) {
    u[i] = CVec2(Complex(gauss(rng), gauss(rng)), Complex(gauss(rng), gauss(rng)));
    v[i] = CVec2(Complex(gauss(rng), gauss(rng)), Complex(gauss(rng), gauss(rng)));
    combo[i] = alpha * u[i] + beta * v[i];
  }
  auto au = dtn.apply(ring, u), av = dtn.apply(ring, v), ac = dtn.apply(ring, combo);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < m; ++i) {
    num += (ac[i] - alpha * au[i] - beta * av[i]).squaredNorm();
    den += ac[i].squaredNorm();
  }
  CHECK(std::sqrt(num) <= 1e-13 * std::sqrt(den) + 1e-300);
}

TEST_CASE("nodal matrix agrees with vector application") {
  ExteriorConstants ext = default_ext();
  DtnOperator dtn(ext, 2.0, 8);
  Mesh mesh = build_scene_mesh(default_scene(), 0.2);
  FunctionSpace space(mesh, 2);
  const auto& ring = space.ring(BoundaryTag::TruncationBr);
  int m = static_cast<int>(ring.node_ids.size());
  Eigen::MatrixXcd mat = dtn.nodal_matrix(ring);
  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss;
  BoundarySamples trace(m);
  Eigen::VectorXcd flat(2 * m);
  for (int i = 0; i < m; ++i) {
    trace[i] = CVec2(Complex(gauss(rng), gauss(rng)), Complex(gauss(rng), gauss(rng)));
    flat[2 * i] = trace[i][0];
    flat[2 * i + 1] = trace[i][1];
  }
  auto applied = dtn.apply(ring, trace);
  Eigen::VectorXcd via_mat = mat * flat;
  double err = 0.0;
  for (int i = 0; i < m; ++i)
    err = std::max(err, std::abs(via_mat[2 * i] - applied[i][0]) +
                            std::abs(via_mat[2 * i + 1] - applied[i][1]));
  CHECK(err <= 1e-11);
}

TEST_CASE("radiation flux signs") {
  ExteriorConstants ext = default_ext();
  auto kk = wavenumbers(ext);
  double r = 2.0;
  Mesh mesh = build_scene_mesh(default_scene(), 0.05);
  FunctionSpace space(mesh, 2);
  const auto& ring = space.ring(BoundaryTag::TruncationBr);
  int m = static_cast<int>(ring.node_ids.size());

  SUBCASE("zero field has zero flux") {
    BoundarySamples z(m, CVec2::Zero());
    CHECK(radiation_flux(ring, z, z) == 0.0);
  }

  SUBCASE("radiating k=0 compressional mode carries positive flux; its conjugate negative") {
    Complex f = hankel_at(0, kk.kp * r), df = hankel_d_at(0, kk.kp * r);
    ModalTrace t = modal_p_trace(0, kk.kp, r, ext.lambda_e, ext.mu_e, f, df);
    BoundarySamples trace(m), traction(m), trace_c(m), traction_c(m);
    for (int i = 0; i < m; ++i) {
      trace[i] = polar_to_cartesian(t.disp, ring.angles[i]);
      traction[i] = polar_to_cartesian(t.traction, ring.angles[i]);
      trace_c[i] = trace[i].conjugate();
      traction_c[i] = traction[i].conjugate();
    }
    double flux = radiation_flux(ring, trace, traction);
    CHECK(flux > 1e-6);
    CHECK(radiation_flux(ring, trace_c, traction_c) == doctest::Approx(-flux));
  }

  SUBCASE("flux of any banded trace through the operator is nonnegative") {
    DtnOperator dtn(ext, r, 25);
    std::mt19937_64 rng(31);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 4; ++trial) {
      BoundarySamples trace(m, CVec2::Zero());
      for (int k = -25; k <= 25; ++k) {
        CVec2 c(Complex(gauss(rng), gauss(rng)), Complex(gauss(rng), gauss(rng)));
        for (int i = 0; i < m; ++i) {
          Complex phase = std::exp(iu * static_cast<double>(k) * ring.angles[i]);
          trace[i] += polar_to_cartesian(CVec2(c[0] * phase, c[1] * phase), ring.angles[i]);
        }
      }
      double norm_sq = 0.0;
      for (const auto& v : trace) norm_sq += v.squaredNorm();
      double flux = radiation_flux(ring, trace, dtn.apply(ring, trace));
      CHECK(flux >= -1e-10 * norm_sq);
    }
  }
}

TEST_CASE("asymptotic blocks have the static sign property") {
  DtnOperator dtn(default_ext(), 2.0, DtnOperator::default_order(default_ext(), 2.0));
  auto rep = dtn.asymptotic_sign_report();
  CHECK(rep.pass);
  CHECK(rep.min_eigenvalue >= -1e-8);
}

TEST_CASE("operator dump writes one line per mode") {
  DtnOperator dtn(default_ext(), 2.0, 5);
  std::string path = "/tmp/elscat_dtn_dump.txt";
  dtn.dump(path);
  std::ifstream is(path);
  REQUIRE(is.good());
  int lines = 0;
  std::string line;
  while (std::getline(is, line))
    if (!line.empty() && line[0] != '#') ++lines;
  CHECK(lines == 11);
  std::remove(path.c_str());
}
