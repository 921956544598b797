#include <cmath>
#include <map>
#include <string>
#include <tuple>

#include "doctest.h"
#include "renorm/catalogue.hpp"
#include "renorm/correlations.hpp"

using namespace renorm;

namespace {

// word of rho^level(seed) by direct string rewriting
std::string fib_word(int level) {
  std::string w = "a";
  for (int i = 0; i < level; ++i) {
    std::string next;
    for (char c : w) next += (c == 'a') ? "ab" : "a";
    w = next;
  }
  return w;
}

double residual(const InflationRule& rule, int level, double range) {
  auto patch = inflate_patch(rule, 0, level);
  auto corr = empirical_pair_correlation(rule, patch, required_correlation_range(rule, range));
  return renormalisation_residual(rule, corr, range).max_residual;
}

// O(N^2) pair count in floating point, keyed by z rounded to 1e-6
using FloatKey = std::tuple<int, int, long long>;

std::map<FloatKey, double> brute_force_nu(const InflationRule& rule, const Patch& patch, double range) {
  std::vector<double> x;
  for (const auto& t : patch.tiles) x.push_back(t.pos.real_value(*rule.basis)[0]);
  double emax = 0.0, emin = 1e300;
  for (const auto& t : rule.tiles) {
    emax = std::max(emax, t.edges.real_value(*rule.basis)[0]);
    emin = std::min(emin, t.edges.real_value(*rule.basis)[0]);
  }
  const double g = range + emax + emin / 2.0;
  std::map<FloatKey, double> nu;
  double w = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    if (x[a] - g < patch.lower[0] || x[a] + g >= patch.upper[0]) continue;
    w += 1.0;
    for (std::size_t b = 0; b < x.size(); ++b) {
      const double z = x[b] - x[a];
      if (std::abs(z) > range + 1e-9) continue;
      nu[{patch.tiles[a].type, patch.tiles[b].type, std::llround(z * 1e6)}] += 1.0;
      nu[{patch.tiles[b].type, patch.tiles[a].type, std::llround(-z * 1e6)}] += 1.0;
    }
  }
  for (auto& [k, v] : nu) v /= 2.0 * w;
  return nu;
}

// both sides of the identity evaluated directly from the float map
double brute_force_residual(const InflationRule& rule, const std::map<FloatKey, double>& nu, double range) {
  const double q = rule.q.real_matrix()(0, 0);
  auto lookup = [&](int m, int n, double z) {
    auto it = nu.find({m, n, std::llround(z * 1e6)});
    return it == nu.end() ? 0.0 : it->second;
  };
  std::vector<double> zs;
  for (const auto& [k, v] : nu) {
    const double z = static_cast<double>(std::get<2>(k)) * 1e-6;
    if (std::abs(z) <= range + 1e-9) zs.push_back(z);
  }
  const int l = static_cast<int>(rule.size());
  double worst = 0.0;
  for (double z : zs)
    for (int i = 0; i < l; ++i)
      for (int j = 0; j < l; ++j) {
        double rhs = 0.0;
        for (int m = 0; m < l; ++m)
          for (int n = 0; n < l; ++n)
            for (const auto& r : rule.t[i][m])
              for (const auto& s : rule.t[j][n])
                rhs += lookup(m, n, (z + r.real_value(*rule.basis)[0] - s.real_value(*rule.basis)[0]) / q);
        worst = std::max(worst, std::abs(lookup(i, j, z) - rhs / std::abs(q)));
      }
  return worst;
}

}  // namespace

TEST_CASE("pair counts and residual against a brute-force oracle") {
  for (auto [name, level] : {std::pair{"fibonacci", 10}, std::pair{"abcd", 9}}) {
    INFO(std::string(name));
    auto rule = builtin(name).rule;
    auto patch = inflate_patch(rule, 0, level);
    const double range = required_correlation_range(rule, 8.0);
    auto corr = empirical_pair_correlation(rule, patch, range);
    auto oracle = brute_force_nu(rule, patch, range);
    REQUIRE(oracle.size() == corr.nu.size());
    for (const auto& [key, v] : corr.nu) {
      const auto& [i, j, z] = key;
      CHECK(oracle[{i, j, std::llround(z.real_value(*rule.basis)[0] * 1e6)}] == doctest::Approx(v).epsilon(1e-12));
    }
    const double res = renormalisation_residual(rule, corr, 8.0).max_residual;
    CHECK(res == doctest::Approx(brute_force_residual(rule, oracle, 8.0)).epsilon(1e-9));
  }
}

TEST_CASE("Fibonacci pair correlations") {
  auto rule = builtin("fibonacci").rule;
  auto patch = inflate_patch(rule, 0, 12);
  auto corr = empirical_pair_correlation(rule, patch, 10.0);
  const ExponentVector zero(1, rule.basis->size());
  const double tau = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(std::abs(corr.value(0, 0, zero) - 1.0 / tau) < 0.01);
  CHECK(corr.value(0, 0, zero) + corr.value(1, 1, zero) == doctest::Approx(1.0).epsilon(1e-14));

  // a has length tau, so nu_ab(tau) is the frequency of the two-letter word ab
  const std::string w = fib_word(12);
  double ab = 0.0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) ab += (w[i] == 'a' && w[i + 1] == 'b');
  ab /= static_cast<double>(w.size());
  const auto& ta = rule.tiles[0].edges;
  CHECK(corr.value(0, 1, ta) > 0.0);
  CHECK(std::abs(corr.value(0, 1, ta) - ab) < 0.01);
  CHECK(std::abs(corr.value(0, 1, ta) - 1.0 / (tau * tau)) < 0.01);
  // b is never followed by b
  CHECK(corr.value(1, 1, rule.tiles[1].edges) == 0.0);

  for (const auto& [key, v] : corr.nu) {
    const auto& [i, j, z] = key;
    CHECK(v > 0.0);
    CHECK(corr.value(j, i, -z) == v);
  }

  CHECK_THROWS_WITH_AS(empirical_pair_correlation(rule, patch, 1e4), doctest::Contains("too large"), Error);
  CHECK_THROWS_WITH_AS(renormalisation_residual(rule, corr, 20.0), doctest::Contains("insufficient range"), Error);
}

TEST_CASE("Frank-Robinson residual decreases with the level") {
  auto rule = builtin("frank-robinson").rule;
  const double r4 = residual(rule, 4, 6.0), r6 = residual(rule, 6, 6.0);
  MESSAGE("frank-robinson level 4 residual ", r4, ", level 6 ", r6);
  CHECK(r6 < r4);
}

TEST_CASE("symmetry and normalisation in two dimensions") {
  auto rule = builtin("frank-robinson").rule;
  auto patch = inflate_patch(rule, 0, 4);
  auto corr = empirical_pair_correlation(rule, patch, 3.0);
  const ExponentVector zero(2, rule.basis->size());
  double diag = 0.0;
  for (int i = 0; i < 4; ++i) diag += corr.value(i, i, zero);
  CHECK(diag == doctest::Approx(1.0).epsilon(1e-14));
  for (const auto& [key, v] : corr.nu) {
    const auto& [i, j, z] = key;
    CHECK(corr.value(j, i, -z) == v);
  }
}

TEST_CASE("renormalisation identity") {
  struct Case {
    const char* name;
    int level;
    double range;
    int coarse;         // level for the decrease check
    double cmp_range;   // range valid at both levels
  };
  const Case cases[] = {
      {"fibonacci", 14, 20.0, 12, 20.0},
      // abcd window error is about 57 / #window at |z| = 25, i.e. 0.014 at level 12
      {"abcd", 14, 30.0, 12, 30.0},
      {"block-fig1", 7, 10.0, 5, 8.0},
      {"staggered(2,2,[1.4142135623730951])", 10, 3.0, 8, 3.0},
      // the window frequencies of FR converge like L^-0.69 (second eigenvalue
      // -3 of M against det 5.3), so level 4 sits near 0.06; level 8 is needed
      {"frank-robinson", 8, 6.0, 6, 6.0},
  };
  for (const auto& c : cases) {
    INFO(std::string(c.name));
    auto rule = builtin(c.name).rule;
    const double r = residual(rule, c.level, c.range);
    MESSAGE(std::string(c.name), " level ", c.level, " residual ", r);
    CHECK(r < 0.01);
    if (c.coarse < c.level) {
      const double lo = residual(rule, c.coarse, c.cmp_range);
      const double hi = residual(rule, c.level, c.cmp_range);
      MESSAGE(std::string(c.name), " levels ", c.coarse, "/", c.level, ": ", lo, " -> ", hi);
      // single-type staggered rules satisfy the identity to rounding at every level
      if (lo < 1e-12)
        CHECK(hi < 1e-12);
      else
        CHECK(hi < lo);
    }
  }
}
