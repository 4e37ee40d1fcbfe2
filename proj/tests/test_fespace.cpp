#include <doctest.h>

#include <random>

#include "elscat/fespace.hpp"

using namespace elscat;

namespace {
SceneGeometry default_scene() {
  SceneGeometry g;
  g.obstacle = CircleSpec{Vec2::Zero(), 0.5};
  g.omega = CircleSpec{Vec2::Zero(), 1.0};
  g.truncation_radius = 2.0;
  g.source_radius = 1.5;
  return g;
}
}  // namespace

TEST_CASE("h1 norm oracles") {
  Mesh mesh = build_scene_mesh(default_scene(), 0.1);
  for (int degree : {1, 2}) {
    FunctionSpace space(mesh, degree);
    SUBCASE(degree == 1 ? "P1" : "P2") {
      DisplacementField zero(space);
      CHECK(h1_norm(zero, {Region::D, Region::Annulus, Region::Shell}) == 0.0);

      DisplacementField c(space);
      for (int n = 0; n < space.n_nodes(); ++n) c.set_node(n, CVec2(1.0, 0.0));
      double area = mesh.region_area(Region::Annulus);
      CHECK(h1_norm(c, {Region::Annulus}) == doctest::Approx(std::sqrt(area)).epsilon(1e-12));
    }
  }
}

TEST_CASE("h1 norm of (x1, 0) on the unit disk") {
  // region D with radius 1: integral of x1^2 + 1 over the disk = pi/4 + pi
  SceneGeometry g;
  g.obstacle = CircleSpec{Vec2::Zero(), 1.0};
  g.omega = CircleSpec{Vec2::Zero(), 1.5};
  g.truncation_radius = 2.5;
  g.source_radius = 2.0;
  Mesh mesh = build_scene_mesh(g, 0.05);
  FunctionSpace space(mesh, 2);
  DisplacementField u(space);
  for (int n = 0; n < space.n_nodes(); ++n) u.set_node(n, CVec2(space.node_pos(n).x(), 0.0));
  double expect = std::sqrt(pi / 4.0 + pi);
  CHECK(h1_norm(u, {Region::D}) == doctest::Approx(expect).epsilon(1e-3));
}

TEST_CASE("h1 norm homogeneity and triangle inequality") {
  Mesh mesh = build_scene_mesh(default_scene(), 0.15);
  FunctionSpace space(mesh, 2);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  auto random_field = [&] {
    DisplacementField f(space);
    for (int i = 0; i < f.values.size(); ++i) f.values[i] = Complex(gauss(rng), gauss(rng));
    return f;
  };
  std::set<Region> all{Region::D, Region::Annulus, Region::Shell};
  for (int trial = 0; trial < 5; ++trial) {
    DisplacementField u = random_field(), v = random_field();
    Complex alpha(gauss(rng), gauss(rng));
    DisplacementField au(space);
    au.values = alpha * u.values;
    CHECK(h1_norm(au, all) == doctest::Approx(std::abs(alpha) * h1_norm(u, all)).epsilon(1e-12));
    DisplacementField sum(space);
    sum.values = u.values + v.values;
    CHECK(h1_norm(sum, all) <= h1_norm(u, all) + h1_norm(v, all) + 1e-12);
  }
}

TEST_CASE("boundary modal coefficients") {
  Mesh mesh = build_scene_mesh(default_scene(), 0.1);
  FunctionSpace space(mesh, 2);
  const auto& ring = space.ring(BoundaryTag::TruncationBr);
  REQUIRE(ring.uniform);

  SUBCASE("constant trace is pure k=0") {
    DisplacementField u(space);
    for (int n : ring.node_ids) u.set_node(n, CVec2(1.0, 0.0));
    auto c = boundary_modal_coeffs(u, BoundaryTag::TruncationBr, 10);
    CHECK(std::abs(c.at(0)[0] - 1.0) < 1e-10);
    for (int k = -10; k <= 10; ++k) {
      if (k == 0) continue;
      CHECK(std::abs(c.at(k)[0]) < 1e-10);
      CHECK(std::abs(c.at(k)[1]) < 1e-10);
    }
  }
  SUBCASE("single angular harmonic lands on its own mode") {
    DisplacementField u(space);
    for (size_t i = 0; i < ring.node_ids.size(); ++i)
      u.set_node(ring.node_ids[i], CVec2(std::exp(iu * ring.angles[i]), 0.0));
    auto c = boundary_modal_coeffs(u, BoundaryTag::TruncationBr, 5);
    CHECK(std::abs(c.at(1)[0] - 1.0) < 1e-12);
    CHECK(std::abs(c.at(-1)[0]) < 1e-12);
    CHECK(std::abs(c.at(0)[0]) < 1e-12);
  }
  SUBCASE("Parseval against direct quadrature for band-limited traces") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> gauss;
    int m = static_cast<int>(ring.node_ids.size());
    int band = std::min(12, m / 4);
    std::vector<CVec2> samples(m, CVec2::Zero());
    std::vector<CVec2> modes(2 * band + 1);
    for (auto& mo : modes) mo = CVec2(Complex(gauss(rng), gauss(rng)), Complex(gauss(rng), gauss(rng)));
    for (int i = 0; i < m; ++i)
      for (int k = -band; k <= band; ++k)
        samples[i] += modes[k + band] * std::exp(iu * static_cast<double>(k) * ring.angles[i]);
    int order = m / 2 - 1;
    auto c = boundary_modal_coeffs(space, samples, BoundaryTag::TruncationBr, order);
    double modal_sq = 0.0;
    for (int k = -order; k <= order; ++k) modal_sq += c.at(k).squaredNorm();
    modal_sq *= 2.0 * pi * ring.circle.radius;
    // direct trapezoid quadrature of |u|^2 over the ring
    double direct = 0.0;
    for (int i = 0; i < m; ++i) direct += samples[i].squaredNorm();
    direct *= 2.0 * pi * ring.circle.radius / m;
    CHECK(modal_sq == doctest::Approx(direct).epsilon(1e-8));
  }
}

TEST_CASE("modal sobolev norms") {
  BoundaryModalCoeffs c;
  c.order_max = 4;
  c.radius = 1.0;
  c.c.assign(9, CVec2::Zero());
  SUBCASE("all zero") { CHECK(sobolev_boundary_norm(c, -0.5, 1.0) == 0.0); }
  SUBCASE("single k=0 unit mode, s=-1/2, radius 1") {
    c.at(0) = CVec2(1.0, 0.0);
    CHECK(sobolev_boundary_norm(c, -0.5, 1.0) == doctest::Approx(std::sqrt(2.0 * pi)));
  }
  SUBCASE("monotone in s") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> gauss;
    for (auto& v : c.c) v = CVec2(Complex(gauss(rng), gauss(rng)), Complex(gauss(rng), gauss(rng)));
    double nm = sobolev_boundary_norm(c, -0.5, 2.0);
    double n0 = sobolev_boundary_norm(c, 0.0, 2.0);
    double np = sobolev_boundary_norm(c, 0.5, 2.0);
    CHECK(nm <= n0);
    CHECK(n0 <= np);
  }
  SUBCASE("unsupported order rejected") {
    CHECK_THROWS_AS(sobolev_boundary_norm(c, 0.25, 1.0), std::invalid_argument);
  }
}

TEST_CASE("P2 boundary rings interleave vertices and chord midpoints") {
  Mesh mesh = build_scene_mesh(default_scene(), 0.2);
  FunctionSpace p1(mesh, 1), p2(mesh, 2);
  const auto& r1 = p1.ring(BoundaryTag::ObstacleD);
  const auto& r2 = p2.ring(BoundaryTag::ObstacleD);
  CHECK(r2.node_ids.size() == 2 * r1.node_ids.size());
  CHECK(r2.uniform);  // chord midpoints bisect the vertex angles
}
