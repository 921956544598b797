#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "renorm/roots.hpp"

using namespace renorm;

namespace {

std::vector<Complex> from_roots(const std::vector<Complex>& r, Complex lead = 1.0) {
  std::vector<Complex> c{lead};
  for (const auto& z : r) {
    std::vector<Complex> n(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      n[i + 1] += c[i];
      n[i] -= z * c[i];
    }
    c = n;
  }
  return c;
}

// greedy matching distance between two root multisets
double match(std::vector<Complex> a, std::vector<Complex> b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (const auto& x : a) {
    auto it = std::min_element(b.begin(), b.end(), [&](Complex p, Complex q) { return std::abs(p - x) < std::abs(q - x); });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

}  // namespace

TEST_CASE("roots of small polynomials") {
  auto r = polynomial_roots({-1, 0, 0, 0, 1});
  CHECK(match(r, {1.0, -1.0, Complex(0, 1), Complex(0, -1)}) < 1e-14);
  CHECK(match(polynomial_roots({0, 0, 2, -1}), {0.0, 0.0, 2.0}) < 1e-14);
  CHECK(match(polynomial_roots({-1, 2}), {0.5}) < 1e-15);
  CHECK(polynomial_roots({0, 0, 0, 5}).size() == 3);
  CHECK_THROWS_AS(polynomial_roots({0, 0}), Error);
  CHECK(polynomial_roots({7}).empty());
}

TEST_CASE("companion and Aberth agree with planted roots") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int deg : {5, 20, 40}) {
    std::vector<Complex> planted;
    for (int i = 0; i < deg; ++i) planted.push_back(std::polar(0.3 + 1.4 * u(rng), 6.283185307179586 * u(rng)));
    auto c = from_roots(planted, Complex(2.0, -1.0));
    INFO(deg);
    // random clusters make degree 40 mildly ill-conditioned
    const double tol = deg < 40 ? 1e-10 : 1e-7;
    CHECK(match(roots_companion(c), planted) < tol);
    CHECK(match(roots_aberth(c), planted) < tol);
  }
}

TEST_CASE("Aberth on high degree unimodular-like polynomials") {
  // z^n - 1 and z^n + z + 1
  const int n = 500;
  std::vector<Complex> c(n + 1, 0.0);
  c[0] = -1.0;
  c[n] = 1.0;
  auto r = polynomial_roots(c);
  REQUIRE(r.size() == static_cast<std::size_t>(n));
  for (auto z : r) {
    CHECK(std::abs(std::abs(z) - 1.0) < 1e-13);
    CHECK(std::abs(std::pow(z, n) - 1.0) < 1e-10);
  }
  c[1] = 1.0;
  c[0] = 1.0;
  for (auto z : polynomial_roots(c)) CHECK(std::abs(poly_eval(c, z)) < 1e-9 * std::max(1.0, std::pow(std::abs(z), n)));
}

TEST_CASE("poly_eval outside the unit disk") {
  std::vector<Complex> c{1.0, -3.0, 2.0};  // (1-z)(1-2z)
  CHECK(std::abs(poly_eval(c, 5.0) - Complex(36.0)) < 1e-12);
  CHECK(std::abs(poly_eval(c, 0.5)) < 1e-15);
}
