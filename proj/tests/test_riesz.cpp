#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "renorm/catalogue.hpp"
#include "renorm/riesz.hpp"

using namespace renorm;

namespace {

double bump(double x, double c, double r) {
  const double t = (x - c) / r;
  return std::abs(t) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - t * t)) : 0.0;
}

}  // namespace

TEST_CASE("Fejer comb weights are exact") {
  for (int m : {2, 3})
    for (int n = 0; n <= 6; ++n) {
      auto comb = riesz_product_comb(m, n);
      const std::int64_t mn = static_cast<std::int64_t>(std::pow(m, n));
      CHECK(comb.size() == static_cast<std::size_t>(2 * mn - 1));
      for (std::int64_t l = 1 - mn; l < mn; ++l)
        CHECK(comb.weight(ExponentVector::integral({l})) == Rational(mn - std::abs(l), mn));
    }
  CHECK(riesz_product_comb(2, 3).weight(ExponentVector::integral({5})) == Rational(3, 8));
  CHECK(riesz_product_comb(3, 2).weight(ExponentVector::integral({-4})) == Rational(5, 9));
  auto zero = riesz_product_comb(2, 0);
  CHECK(zero.size() == 1);
  CHECK(zero.weight(ExponentVector::integral({0})) == Rational(1));
}

TEST_CASE("convolution theorem: comb transform equals the product density") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int m : {2, 3}) {
    auto f = RieszDensity::fejer(m);
    for (int n = 1; n <= 6; ++n) {
      auto p = fourier_polynomial(riesz_product_comb(m, n));
      for (int s = 0; s < 1000; ++s) {
        const double k[1] = {u(rng)};
        const auto lhs = p.evaluate(k);
        CHECK(std::abs(lhs.imag()) < 1e-10);
        CHECK(std::abs(lhs.real() - riesz_density_sample(f, n, k)) < 1e-10);
      }
    }
  }
}

TEST_CASE("Fejer densities: special values and unit mass") {
  auto f2 = RieszDensity::fejer(2);
  for (int n = 1; n <= 10; ++n) {
    CHECK(f2(n, {0.0}) == doctest::Approx(std::pow(2.0, n)));
    CHECK(std::abs(f2(n, {0.5})) < 1e-12);
  }
  for (int m : {2, 3})
    for (int n = 0; n <= 12; ++n) {
      auto f = RieszDensity::fejer(m);
      // the trapezoid rule is exact for trigonometric polynomials of degree < nodes
      auto in = integrate_density(f, n, 0.0, 1.0, 2 * static_cast<std::size_t>(std::pow(m, n)) + 2);
      INFO("M = ", m, ", n = ", n);
      CHECK(std::abs(in.value - 1.0) < 1e-8);
    }
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto f3 = RieszDensity::fejer(3);
  for (int s = 0; s < 1000; ++s) CHECK(f3(7, {u(rng)}) >= -1e-10);
}

TEST_CASE("vague convergence to the Dirac comb") {
  auto f = RieszDensity::fejer(2);
  double prev = 1e300;
  for (int n = 1; n <= 12; ++n) {
    auto away = integrate_density(f, n, 0.2, 0.8, 1 << 16, [](double x) { return bump(x, 0.5, 0.3); });
    CHECK(away.value < prev);
    prev = away.value;
  }
  CHECK(prev < 1e-3);
  auto at_zero = integrate_density(f, 12, -0.4, 0.4, 1 << 18, [](double x) { return bump(x, 0.0, 0.4); });
  CHECK(std::abs(at_zero.value - 1.0) < 0.01);
}

TEST_CASE("staggered square density") {
  for (double a : {0.0, 1.0, -2.0}) {
    auto f = RieszDensity::staggered_square(a);
    for (int n = 1; n <= 6; ++n) {
      CHECK(f(n, {0.0, 0.0}) == doctest::Approx(std::pow(4.0, n)));
      CHECK(f(n, {3.0, -1.0}) == doctest::Approx(std::pow(4.0, n)));
    }
  }
  // a is irrational: the Bragg peaks sit on the dual lattice points r e1 + l (e2 - a e1)
  const double a = std::numbers::sqrt2;
  auto f = RieszDensity::staggered_square(a);
  CHECK(f(8, {2.0 - a, 1.0}) == doctest::Approx(std::pow(4.0, 8)).epsilon(1e-9));
  CHECK(f(8, {0.0, 1.0}) < 1.0);
}

TEST_CASE("supertile density matches a direct Fourier sum over the patch") {
  auto rule = builtin("frank-robinson").rule;
  auto f = RieszDensity::supertile(rule, 0);
  const int n = 3;
  auto patch = inflate_patch(rule, 0, n);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int s = 0; s < 20; ++s) {
    const double k[2] = {u(rng), u(rng)};
    std::complex<double> sum = 0.0;
    for (const auto& t : patch.tiles) {
      auto x = t.pos.real_value(*rule.basis);
      sum += std::polar(1.0, 2.0 * std::numbers::pi * (k[0] * x[0] + k[1] * x[1]));
    }
    const double oracle = std::norm(sum) / (std::pow(rule.q.abs_det(), n) * rule.volume(0));
    CHECK(f(n, k) == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("distribution functions") {
  auto f = RieszDensity::staggered_square(0.5);
  auto d = distribution_function(f, 4, 2.0, 2.0, 128);
  for (std::size_t i = 0; i <= d.grid; ++i) {
    CHECK(d.at(0, i) == 0.0);
    CHECK(d.at(i, 0) == 0.0);
  }
  bool monotone = true;
  for (std::size_t i = 0; i < d.grid; ++i)
    for (std::size_t j = 0; j < d.grid; ++j) {
      const double scale = 1e-12 * std::max(1.0, d.at(i + 1, j + 1));
      monotone = monotone && d.at(i + 1, j) >= d.at(i, j) - scale && d.at(i, j + 1) >= d.at(i, j) - scale;
    }
  CHECK(monotone);
  // periodic with unit mass per cell: F(2, 2) = 4 up to the trapezoid error
  CHECK(d.at(d.grid, d.grid) == doctest::Approx(4.0).epsilon(1e-6));

  // F(K, K) / K^2 for the Frank-Robinson supertile levels off; its K -> infinity
  // limit is the mean of the density, (points in the supertile) / (its area)
  auto rule = builtin("frank-robinson").rule;
  auto fr = RieszDensity::supertile(rule, 0);
  const int n = 2;
  auto patch = inflate_patch(rule, 0, n);
  const double mean = static_cast<double>(patch.tiles.size()) / (std::pow(rule.q.abs_det(), n) * rule.volume(0));
  std::vector<double> ratio;
  for (double k : {5.0, 10.0, 20.0}) {
    auto g = distribution_function(fr, n, k, k, resolving_nodes(fr, n, 4.0) * static_cast<std::size_t>(k));
    ratio.push_back(g.at(g.grid, g.grid) / (k * k));
    MESSAGE("K = ", k, ": F(K,K)/K^2 = ", ratio.back(), " (mean ", mean, ")");
  }
  CHECK(std::abs(ratio[2] - ratio[1]) < 1e-3);
  CHECK(std::abs(ratio[2] - mean) < 5e-3);
  CHECK(std::abs(ratio[2] - 0.3304) < 1e-3);
}

TEST_CASE("staggered square with integer shift: mass concentrates on the dual lattice") {
  for (double a : {0.0, 1.0, -2.0}) {
    INFO("a = ", a);
    auto f = RieszDensity::staggered_square(a);
    const double lo[2] = {-0.5, -0.5}, hi[2] = {0.5, 0.5};
    const std::size_t nodes = 2048;
    // the density is Z^2-periodic, so one cell carries unit mass
    auto cell = integrate_density_2d(f, 8, lo, hi, nodes);
    CHECK(cell.value == doctest::Approx(1.0).epsilon(1e-9));
    auto ball = integrate_density_2d(f, 8, lo, hi, nodes, [](double x, double y) { return x * x + y * y <= 0.01 ? 1.0 : 0.0; });
    MESSAGE("a = ", a, ": mass in the 0.1-ball ", ball.value);
    CHECK(ball.value >= 0.95);
    for (auto [c1, c2] : {std::pair{0.5, 0.5}, std::pair{0.5, 0.0}, std::pair{0.3, 0.7}}) {
      auto g = [c1, c2](double x, double y) {
        const double dx = x - c1 - std::round(x - c1), dy = y - c2 - std::round(y - c2);
        return bump(std::hypot(dx, dy), 0.0, 0.2);
      };
      auto away = integrate_density_2d(f, 8, lo, hi, nodes, g);
      CHECK(away.value < 1e-2);
    }
  }
}
