#include <doctest.h>

#include <cstdio>
#include <numeric>
#include <random>

#include "elscat/mesh.hpp"

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

double tagged_length(const Mesh& m, BoundaryTag tag) {
  double len = 0.0;
  for (const auto& be : m.boundary_edges)
    if (be.tag == tag) len += (m.nodes[be.v[0]] - m.nodes[be.v[1]]).norm();
  return len;
}
}  // namespace

TEST_CASE("scene mesh structure") {
  Mesh m = build_scene_mesh(default_scene(), 0.1);
  CHECK(m.count_region(Region::D) > 0);
  CHECK(m.count_region(Region::Annulus) > 0);
  CHECK(m.count_region(Region::Shell) > 0);
  CHECK_NOTHROW(m.validate());
  // region areas approach the annular areas
  CHECK(m.region_area(Region::D) == doctest::Approx(pi * 0.25).epsilon(5e-3));
  CHECK(m.region_area(Region::Annulus) == doctest::Approx(pi * 0.75).epsilon(5e-3));
  CHECK(m.region_area(Region::Shell) == doctest::Approx(pi * 3.0).epsilon(5e-3));
}

TEST_CASE("obstacle polyline length converges at second order") {
  double a = 0.5;
  double e1 = std::abs(tagged_length(build_scene_mesh(default_scene(), 0.1), BoundaryTag::ObstacleD) -
                       2.0 * pi * a);
  double e2 = std::abs(tagged_length(build_scene_mesh(default_scene(), 0.05), BoundaryTag::ObstacleD) -
                       2.0 * pi * a);
  CHECK(e2 < e1);
  double rate = std::log2(e1 / e2);
  CHECK(rate > 1.6);
  CHECK(rate < 2.4);
}

TEST_CASE("degenerate geometry is rejected") {
  SceneGeometry g = default_scene();
  g.obstacle = CircleSpec{Vec2::Zero(), 1.0};  // a = R_Omega
  CHECK_THROWS_AS(build_scene_mesh(g, 0.05), std::invalid_argument);
  SceneGeometry g2 = default_scene();
  CHECK_THROWS_AS(build_scene_mesh(g2, 0.9), std::invalid_argument);  // h too coarse
}

TEST_CASE("refinement scaling preserves structure") {
  Mesh coarse = build_scene_mesh(default_scene(), 0.2);
  Mesh fine = build_scene_mesh(default_scene(), 0.1);
  CHECK(fine.triangles.size() >= 4 * coarse.triangles.size() * 0.95);
  CHECK_NOTHROW(fine.validate());
  CHECK(tagged_length(fine, BoundaryTag::MediumOmega) > 0.0);
  CHECK(tagged_length(fine, BoundaryTag::TruncationBr) > 0.0);
}

TEST_CASE("msh roundtrip is lossless") {
  Mesh m = build_scene_mesh(default_scene(), 0.15);
  std::string path = "/tmp/elscat_test_mesh.msh";
  write_msh(m, path);
  Mesh back = read_msh(path);
  REQUIRE(back.nodes.size() == m.nodes.size());
  REQUIRE(back.triangles.size() == m.triangles.size());
  REQUIRE(back.boundary_edges.size() == m.boundary_edges.size());
  for (size_t i = 0; i < m.nodes.size(); ++i) {
    CHECK(back.nodes[i].x() == m.nodes[i].x());  // 17 digits round-trips doubles
    CHECK(back.nodes[i].y() == m.nodes[i].y());
  }
  for (size_t t = 0; t < m.triangles.size(); ++t) {
    CHECK(back.triangles[t].v == m.triangles[t].v);
    CHECK(back.triangles[t].region == m.triangles[t].region);
  }
  CHECK_NOTHROW(back.validate());
  // circles are recovered from the tagged nodes
  REQUIRE(back.circle_of(BoundaryTag::ObstacleD).has_value());
  CHECK(back.circle_of(BoundaryTag::ObstacleD)->radius == doctest::Approx(0.5).epsilon(1e-9));
  std::remove(path.c_str());
}

TEST_CASE("node permutation keeps the mesh valid") {
  Mesh m = build_scene_mesh(default_scene(), 0.2);
  std::vector<int> perm(m.nodes.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(11);
  std::shuffle(perm.begin(), perm.end(), rng);
  Mesh p = m.permuted(perm);
  CHECK_NOTHROW(p.validate());
  CHECK(p.region_area(Region::Annulus) == doctest::Approx(m.region_area(Region::Annulus)));
}

TEST_CASE("polygon obstacle validates but requires import") {
  SceneGeometry g = default_scene();
  g.obstacle = PolygonSpec{{Vec2(0.4, 0.0), Vec2(0.0, 0.4), Vec2(-0.4, 0.0), Vec2(0.0, -0.4)}};
  CHECK_NOTHROW(g.validate());
  CHECK_THROWS_AS(build_scene_mesh(g, 0.05), std::invalid_argument);
  // self-intersecting bowtie
  SceneGeometry bad = default_scene();
  bad.obstacle = PolygonSpec{{Vec2(-0.4, -0.4), Vec2(0.4, 0.4), Vec2(0.4, -0.4), Vec2(-0.4, 0.4)}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
