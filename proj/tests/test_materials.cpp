#include <doctest.h>

#include <random>

#include "elscat/materials.hpp"

using namespace elscat;

TEST_CASE("isotropic tensor entries") {
  SUBCASE("zero moduli give the zero tensor") {
    auto c = ElasticTensor::isotropic(0.0, 0.0);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) CHECK(c(i, j, k, l) == 0.0);
  }
  SUBCASE("lambda=2, mu=3 direct entries") {
    auto c = ElasticTensor::isotropic(2.0, 3.0);
    CHECK(c(0, 0, 1, 1) == 2.0);
    CHECK(c(0, 1, 0, 1) == 3.0);
    CHECK(c(0, 0, 0, 0) == 8.0);
  }
}

TEST_CASE("double contraction") {
  auto c = ElasticTensor::isotropic(1.0, 1.0);
  SUBCASE("identity contracts to lambda tr(A) I + 2 mu A") {
    CMat2 a = CMat2::Identity();
    CMat2 r = double_contract(c, a);
    CHECK(r(0, 0) == Complex(4.0, 0.0));
    CHECK(r(1, 1) == Complex(4.0, 0.0));
    CHECK(r(0, 1) == Complex(0.0, 0.0));
  }
  SUBCASE("antisymmetric input is annihilated") {
    CMat2 a;
    a << 0.0, 1.0, -1.0, 0.0;
    CHECK(double_contract(c, a).norm() == 0.0);
  }
  SUBCASE("zero input") {
    CHECK(double_contract(c, CMat2::Zero()).norm() == 0.0);
  }
  SUBCASE("complex linearity") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    auto rnd = [&] {
      CMat2 m;
      for (int i = 0; i < 4; ++i) m(i / 2, i % 2) = Complex(g(rng), g(rng));
      return m;
    };
    CMat2 a = rnd(), b = rnd();
    Complex alpha(0.3, -1.2), beta(-2.0, 0.7);
    CMat2 lhs = double_contract(c, alpha * a + beta * b);
    CMat2 rhs = alpha * double_contract(c, a) + beta * double_contract(c, b);
    CHECK((lhs - rhs).norm() <= 1e-14 * rhs.norm());
  }
}

TEST_CASE("tensor symmetries hold bit-exactly") {
  std::array<double, 16> e{};
  auto set = [&](int i, int j, int k, int l, double v) {
    for (auto [a, b, c2, d] : {std::array<int, 4>{i, j, k, l},
                               std::array<int, 4>{j, i, k, l},
                               std::array<int, 4>{i, j, l, k},
                               std::array<int, 4>{j, i, l, k},
                               std::array<int, 4>{k, l, i, j},
                               std::array<int, 4>{l, k, i, j},
                               std::array<int, 4>{k, l, j, i},
                               std::array<int, 4>{l, k, j, i}})
      e[((a * 2 + b) * 2 + c2) * 2 + d] = v;
  };
  set(0, 0, 0, 0, 3.0);
  set(1, 1, 1, 1, 2.5);
  set(0, 0, 1, 1, 1.1);
  set(0, 1, 0, 1, 0.9);
  set(0, 0, 0, 1, 0.2);
  set(1, 1, 0, 1, -0.3);
  auto c = ElasticTensor::anisotropic(e);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          CHECK(c(i, j, k, l) == c(k, l, i, j));
          CHECK(c(i, j, k, l) == c(j, i, k, l));
          CHECK(c(i, j, k, l) == c(i, j, l, k));
        }
  std::array<double, 16> bad = e;
  bad[1] += 1e-3;  // break minor symmetry
  CHECK_THROWS_AS(ElasticTensor::anisotropic(bad), std::invalid_argument);
}

TEST_CASE("legendre ellipticity sampling") {
  SUBCASE("isotropic lambda=1, mu=1 in [2, 4]") {
    auto rep = check_legendre_ellipticity(ElasticTensor::isotropic(1.0, 1.0), 2.0, 4.0, 500);
    CHECK(rep.pass);
    CHECK(rep.min_form >= 2.0 - 1e-12);
    CHECK(rep.max_form <= 4.0 + 1e-12);
  }
  SUBCASE("lambda=0, mu=1 gives the constant form 2") {
    auto rep = check_legendre_ellipticity(ElasticTensor::isotropic(0.0, 1.0), 1.9, 2.1, 200);
    CHECK(rep.pass);
    CHECK(rep.min_form == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep.max_form == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("zero tensor fails with a witness") {
    auto rep = check_legendre_ellipticity(ElasticTensor::isotropic(0.0, 0.0), 0.1, 1.0, 10);
    CHECK(!rep.pass);
    CHECK(!rep.witness.empty());
  }
  SUBCASE("isotropic form equals lambda |tr xi|^2 + 2 mu |xi|^2") {
    // sampled identity, 1e-12 relative
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    auto c = ElasticTensor::isotropic(1.7, 0.6);
    for (int t = 0; t < 50; ++t) {
      CMat2 xi;
      Complex a(g(rng), g(rng)), b(g(rng), g(rng)), d(g(rng), g(rng));
      xi << a, b, b, d;
      CMat2 cxi = c.contract(xi);
      Complex form = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) form += xi(i, j) * std::conj(cxi(i, j));
      double expect = 1.7 * std::norm(a + d) +
                      2.0 * 0.6 * (std::norm(a) + 2.0 * std::norm(b) + std::norm(d));
      CHECK(form.real() == doctest::Approx(expect).epsilon(1e-12));
      CHECK(std::abs(form.imag()) <= 1e-12 * expect);
    }
  }
}

TEST_CASE("effective material parameter laws") {
  SUBCASE("case 1 scales linearly in eps") {
    auto m = effective_material_case1(1e-2, 1.0, 1.0, 1.0, 1.0);
    CHECK(m.tensor.lambda() == 0.01);
    CHECK(m.tensor.mu() == 0.01);
    CHECK(m.density.value == Complex(1.0, 1.0));
    auto m2 = effective_material_case1(1e-4, 1.0, 1.0, 2.0, 1.0);
    CHECK(m2.tensor.lambda() == 1e-4);
    CHECK(m2.density.value == Complex(2.0, 1.0));
    auto id = effective_material_case1(1.0, 2.0, 3.0, 1.0, 0.5);
    CHECK(id.tensor.lambda() == 2.0);
    CHECK(id.tensor.mu() == 3.0);
    CHECK(id.density.value == Complex(1.0, 0.5));
  }
  SUBCASE("case 2 scales as eps^-2 with eps^-1 damping") {
    auto m = effective_material_case2(0.1, 1.0, 1.0, 1.0, 1.0);
    CHECK(m.tensor.lambda() == doctest::Approx(100.0).epsilon(1e-15));
    CHECK(m.tensor.mu() == doctest::Approx(100.0).epsilon(1e-15));
    CHECK(m.density.value.real() == doctest::Approx(1.0));
    CHECK(m.density.value.imag() == doctest::Approx(10.0).epsilon(1e-15));
    auto m2 = effective_material_case2(0.01, 2.0, 1.0, 1.0, 3.0);
    CHECK(m2.tensor.lambda() == doctest::Approx(2e4).epsilon(1e-15));
    CHECK(m2.tensor.mu() == doctest::Approx(1e4).epsilon(1e-15));
    CHECK(m2.density.value.imag() == doctest::Approx(300.0).epsilon(1e-15));
  }
  SUBCASE("exact scaling laws across eps") {
    for (double eps : {1.0, 0.5, 1e-3}) {
      auto m1 = effective_material_case1(eps, 2.0, 1.5, 1.0, 1.0);
      CHECK(m1.tensor.lambda() == 2.0 * eps);
      CHECK(m1.tensor.mu() == 1.5 * eps);
      auto m2 = effective_material_case2(eps, 2.0, 1.5, 1.0, 1.0);
      CHECK(m2.tensor.lambda() == 2.0 / (eps * eps));
    }
  }
  SUBCASE("rejects invalid parameters") {
    CHECK_THROWS_AS(effective_material_case1(0.0, 1, 1, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(effective_material_case1(-1.0, 1, 1, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(effective_material_case1(0.5, 1, 1, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(effective_material_case1(0.5, 1, 1, 1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(effective_material_case2(0.5, 1, 1, 1, -2.0), std::invalid_argument);
  }
}

TEST_CASE("wavenumbers") {
  CHECK(wavenumbers(ExteriorConstants(2.0, 1.0, 1.0, 1.0)).ks == doctest::Approx(1.0));
  CHECK(wavenumbers(ExteriorConstants(2.0, 1.0, 1.0, 1.0)).kp == doctest::Approx(0.5));
  auto w = wavenumbers(ExteriorConstants(0.0, 1.0, 1.0, 2.0));
  CHECK(w.ks == doctest::Approx(2.0));
  CHECK(w.kp == doctest::Approx(std::sqrt(2.0)));
  auto w4 = wavenumbers(ExteriorConstants(2.0, 1.0, 4.0, 1.0));
  CHECK(w4.ks == doctest::Approx(2.0));
  CHECK(w4.kp == doctest::Approx(1.0));
}

TEST_CASE("complex density and scene validation") {
  CHECK_THROWS_AS(ComplexDensity(Complex(-1.0, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(ComplexDensity(Complex(1.0, -0.1)), std::invalid_argument);
  ExteriorConstants ext(2.0, 1.0, 1.0, pi);
  MaterialScene scene(ext, {ElasticTensor::isotropic(2.0, 1.0), ComplexDensity(Complex(1.0, 0.2))});
  CHECK(scene.has_material(Region::Shell));
  CHECK(scene.has_material(Region::Annulus));
  CHECK(!scene.has_material(Region::D));
  CHECK_THROWS(scene.material(Region::D));
  CHECK_THROWS_AS(scene.set_region(Region::Shell,
                                   {ElasticTensor::isotropic(1.0, 1.0), ComplexDensity(Complex(1.0, 0.0))}),
                  std::invalid_argument);
}
