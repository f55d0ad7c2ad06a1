#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fastdiff/grid.hpp"
#include "fastdiff/params.hpp"
#include "fastdiff/profiles.hpp"
#include "oracles.hpp"

using namespace fastdiff;
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

TEST_CASE("single uniform cell covers the disk") {
  auto g = build_grid(2, 1.0, 1);
  CHECK(g->volumes().size() == 1);
  CHECK(g->volumes()[0] == doctest::Approx(kPi).epsilon(1e-15));
}

TEST_CASE("uniform 3d grid sums to the ball volume") {
  auto g = build_grid(3, 2.0, 16);
  double sum = 0.0;
  for (double w : g->volumes()) sum += w;
  CHECK(sum == doctest::Approx(4.0 / 3.0 * kPi * 8.0).epsilon(1e-13));
}

TEST_CASE("geometric grading widths grow by the ratio") {
  auto g = build_grid(2, 10.0, 256, Grading::geometric, 1.02);
  const auto& f = g->faces();
  for (size_t k = 1; k < f.size(); ++k) CHECK(f[k] > f[k - 1]);
  const double w_first = f[1] - f[0];
  const double w_last = f[256] - f[255];
  CHECK(w_last / w_first == doctest::Approx(std::pow(1.02, 255)).epsilon(1e-8));
}

TEST_CASE("grid construction rejects degenerate input") {
  CHECK_THROWS(build_grid(2, -1.0, 16));
  CHECK_THROWS(build_grid(2, 0.0, 16));
  CHECK_THROWS(build_grid(2, 1.0, 0));
  CHECK_THROWS(build_grid(1, 1.0, 16));
  CHECK_THROWS(build_grid(2, 1.0, 16, Grading::geometric, 0.0));
}

TEST_CASE("mass of simple fields") {
  auto g = build_grid(2, 3.0, 64);
  Field zero(g);
  CHECK(mass(zero) == 0.0);
  Field constant(g, std::vector<double>(64, 2.5));
  CHECK(mass(constant) == doctest::Approx(2.5 * kPi * 9.0).epsilon(1e-13));
}

TEST_CASE("barenblatt profile mass matches the closed form on a wide grid") {
  ModelParams params{.n = 2, .m = 0.75, .p = 2.0};
  // theta for M = 1: closed form inversion of M(theta) = 432 pi / theta^3
  const double theta = std::cbrt(432.0 * kPi);
  const double tail = oracles::profile_power_integral(2, 0.75, theta, 1.0) -
                      oracles::unit_sphere_area(2) *
                          oracles::romberg(
                              [&](double r) {
                                return r * std::pow(6.0 / (r * r + theta), 4.0);
                              },
                              0.0, 40.0);
  CHECK(tail < 1e-6);  // grid truncation at R_max = 40 loses < 1e-6 of mass
  auto g = build_grid(2, 40.0, 4096);
  Field rho = rho_profile(theta, params, g);
  CHECK(mass(rho) == doctest::Approx(1.0).epsilon(2e-6));
}

TEST_CASE("lr norms") {
  auto g = build_grid(2, 2.0, 32);
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> d(0.0, 3.0);
  std::vector<double> v(32);
  for (double& x : v) x = d(rng);
  Field f(g, v);
  CHECK(lr_norm(f, 1.0) == doctest::Approx(mass(f)).epsilon(1e-15));
  CHECK_THROWS(lr_norm(f, 0.5));

  // indicator-like: value 2 on the first cell only
  std::vector<double> ind(32, 0.0);
  ind[0] = 2.0;
  Field fi(g, ind);
  CHECK(lr_norm(fi, 2.0) ==
        doctest::Approx(2.0 * std::sqrt(g->volumes()[0])).epsilon(1e-14));

  // barenblatt sup norm equals the closed-form peak
  ModelParams params{.n = 2, .m = 0.75, .p = 2.0};
  const double theta = 7.3;
  Field rho = rho_profile(theta, params, g);
  CHECK(lr_norm(rho, kInf) ==
        doctest::Approx(std::pow(6.0 / (g->centers()[0] * g->centers()[0] + theta), 4.0))
            .epsilon(1e-15));
}

TEST_CASE("second moment of simple and profile fields") {
  auto g = build_grid(2, 3.0, 2048);
  Field zero(g);
  CHECK(second_moment(zero) == 0.0);
  Field constant(g, std::vector<double>(2048, 1.7));
  // n=2: int c r^2 dx = 2 pi c R^4 / 4, midpoint quadrature is second order
  CHECK(second_moment(constant) == doctest::Approx(1.7 * kPi * 81.0 / 2.0).epsilon(1e-6));

  ModelParams params{.n = 2, .m = 0.75, .p = 2.0};
  const double theta = std::cbrt(432.0 * kPi);
  auto wide = build_grid(2, 400.0, 1 << 15);
  Field rho = rho_profile(theta, params, wide);
  const double oracle = oracles::profile_second_moment(2, 0.75, theta);
  // heavy r^{-8} tail: moment converges like R^{-4}
  CHECK(second_moment(rho) == doctest::Approx(oracle).epsilon(1e-5));
}

TEST_CASE("quadrature consistency refines at second order") {
  // smooth density, exact integral known
  const auto density = [](double r) { return std::exp(-r * r); };
  const double exact = kPi * (1.0 - std::exp(-16.0));  // int_{R^2} e^{-r^2} over r<4
  double prev_err = 0.0;
  for (int k = 0; k < 4; ++k) {
    const int cells = 64 << k;
    auto g = build_grid(2, 4.0, cells);
    std::vector<double> v(cells);
    for (int i = 0; i < cells; ++i) v[i] = density(g->centers()[i]);
    const double err = std::abs(mass(Field(g, v)) - exact);
    if (k > 0) CHECK(err < 0.3 * prev_err);  // second order: expect ~0.25x
    prev_err = err;
  }
}

TEST_CASE("homogeneity of degree 1 in field values") {
  auto g = build_grid(3, 2.0, 128, Grading::geometric, 1.01);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(0.0, 2.0);
  std::vector<double> v(128);
  for (double& x : v) x = d(rng);
  Field f(g, v);
  const double c = 3.7;
  std::vector<double> cv(v);
  for (double& x : cv) x *= c;
  Field fc(g, cv);
  CHECK(mass(fc) == doctest::Approx(c * mass(f)).epsilon(1e-13));
  CHECK(second_moment(fc) == doctest::Approx(c * second_moment(f)).epsilon(1e-13));
  for (double r : {1.0, 2.0, 3.5}) {
    CHECK(lr_norm(fc, r) == doctest::Approx(c * lr_norm(f, r)).epsilon(1e-12));
  }
  CHECK(lr_norm(fc, kInf) == doctest::Approx(c * lr_norm(f, kInf)).epsilon(1e-13));
}

TEST_CASE("field validation") {
  auto g = build_grid(2, 1.0, 8);
  CHECK_THROWS(Field(g, std::vector<double>(7, 1.0)));
  CHECK_THROWS(Field(g, std::vector<double>{0, 0, 0, 0, 0, 0, 0, -1e-12}));
}
