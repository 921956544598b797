#include <cmath>

#include "doctest.h"
#include "renorm/catalogue.hpp"
#include "renorm/inflation.hpp"

using namespace renorm;

namespace {

// plain integer matrix power, independent of Eigen
std::vector<std::vector<long>> power(const IntMatrix& m, int n) {
  const auto l = static_cast<std::size_t>(m.rows());
  std::vector<std::vector<long>> acc(l, std::vector<long>(l, 0));
  for (std::size_t i = 0; i < l; ++i) acc[i][i] = 1;
  for (int k = 0; k < n; ++k) {
    std::vector<std::vector<long>> nxt(l, std::vector<long>(l, 0));
    for (std::size_t i = 0; i < l; ++i)
      for (std::size_t j = 0; j < l; ++j)
        for (std::size_t t = 0; t < l; ++t) nxt[i][j] += acc[i][t] * m(static_cast<long>(t), static_cast<long>(j));
    acc = nxt;
  }
  return acc;
}

}  // namespace

TEST_CASE("substitution matrices") {
  IntMatrix abcd(4, 4);
  abcd << 1, 1, 0, 0, 1, 0, 1, 0, 0, 1, 0, 1, 0, 0, 1, 1;
  CHECK(substitution_matrix(SubstitutionRule1D::from_words({"ab", "ca", "bd", "dc"})) == abcd);
  CHECK(substitution_matrix(builtin("abcd").rule) == abcd);

  IntMatrix fib(2, 2);
  fib << 1, 1, 1, 0;
  CHECK(substitution_matrix(builtin("fibonacci").rule) == fib);

  IntMatrix fr(4, 4);
  fr << 1, 1, 1, 1, 3, 0, 3, 0, 3, 3, 0, 0, 9, 0, 0, 0;
  CHECK(substitution_matrix(builtin("frank-robinson").rule) == fr);
}

TEST_CASE("PF data") {
  auto pf = pf_data(substitution_matrix(builtin("abcd").rule));
  CHECK(pf.lambda == doctest::Approx(2.0).epsilon(1e-13));
  REQUIRE(pf.eigenvalues.size() == 4);
  CHECK(std::abs(pf.eigenvalues[0] - 2.0) < 1e-12);
  CHECK(std::abs(std::abs(pf.eigenvalues[1]) - std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(std::abs(pf.eigenvalues[2]) - std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(pf.eigenvalues[1] + pf.eigenvalues[2]) < 1e-12);
  CHECK(std::abs(pf.eigenvalues[3]) < 1e-12);

  const double tau = 0.5 * (1 + std::sqrt(5.0));
  auto pfib = pf_data(substitution_matrix(builtin("fibonacci").rule));
  CHECK(std::abs(pfib.lambda - tau) < 1e-14);
  CHECK(std::abs(pfib.frequencies(0) - (std::sqrt(5.0) - 1) / 2) < 1e-14);
  CHECK(std::abs(pfib.frequencies(1) - (3 - std::sqrt(5.0)) / 2) < 1e-14);
  CHECK(std::abs(pfib.lengths(0) - tau) < 1e-14);

  const double lam = frank_robinson_lambda();
  auto pfr = pf_data(substitution_matrix(builtin("frank-robinson").rule));
  CHECK(std::abs(pfr.lambda - (7 + std::sqrt(13.0)) / 2) < 1e-12);
  const double expect[4] = {(4 - lam) / 9, (4 * lam - 7) / 9, (4 * lam - 7) / 9, (19 - 7 * lam) / 9};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(pfr.frequencies(i) - expect[i]) < 1e-12);
  CHECK(std::abs((4 - lam) + 2 * (4 * lam - 7) + (19 - 7 * lam) - 9.0) < 1e-13);
  CHECK(pfr.residual < 1e-10);
}

TEST_CASE("non-primitive matrices are rejected") {
  IntMatrix m(2, 2);
  m << 1, 0, 1, 1;
  std::string why;
  CHECK_FALSE(is_primitive(m, &why));
  CHECK(why.find("type 0") != std::string::npos);
  CHECK_THROWS_WITH_AS(pf_data(m), doctest::Contains("not primitive"), Error);
  IntMatrix per(2, 2);
  per << 0, 1, 1, 0;
  CHECK_FALSE(is_primitive(per));
}

TEST_CASE("realize 1D") {
  auto abcd = builtin("abcd").rule;
  auto p = [](std::int64_t x) { return PointList{ExponentVector::integral({x})}; };
  CHECK(abcd.t[0][0] == p(0));
  CHECK(abcd.t[0][1] == p(1));
  CHECK(abcd.t[0][2].empty());
  CHECK(abcd.t[1][0] == p(1));
  CHECK(abcd.t[1][2] == p(0));
  CHECK(abcd.t[2][1] == p(0));
  CHECK(abcd.t[2][3] == p(1));
  CHECK(abcd.t[3][2] == p(1));
  CHECK(abcd.t[3][3] == p(0));

  auto fib = builtin("fibonacci").rule;
  REQUIRE(fib.basis->size() == 2);
  CHECK(std::abs(fib.basis->value(1) - 0.5 * (1 + std::sqrt(5.0))) < 1e-15);
  CHECK(fib.t[0][0] == PointList{ExponentVector(1, 2, {0, 0})});
  CHECK(fib.t[1][0] == PointList{ExponentVector(1, 2, {0, 1})});
  CHECK(fib.t[0][1] == PointList{ExponentVector(1, 2, {0, 0})});
  CHECK(fib.t[1][1].empty());
  CHECK(fib.tiles[0].edges == ExponentVector(1, 2, {0, 1}));
  CHECK(fib.tiles[1].edges == ExponentVector(1, 2, {1, 0}));

  auto aa = realize_1d(SubstitutionRule1D::from_words({"aa"}));
  CHECK(aa.t[0][0] == PointList{ExponentVector::integral({0}), ExponentVector::integral({1})});

  CHECK_THROWS_AS(realize_1d(SubstitutionRule1D::from_words({"a", "b"})), Error);
  CHECK_THROWS_AS(SubstitutionRule1D::from_words({"ab", ""}), Error);
}

TEST_CASE("stone inflation validation") {
  for (auto name : {"fibonacci", "abcd", "block-fig1", "frank-robinson"}) {
    auto rep = validate_stone_inflation(builtin(name).rule);
    INFO(name);
    CHECK(rep.ok());
  }
  // FR column 1: lambda^2 + 3 lambda + 3 lambda + 9 = (lambda + 3)^2 = lambda^4
  const double lam = frank_robinson_lambda();
  CHECK(std::abs(lam * lam + 6 * lam + 9 - std::pow(lam, 4)) < 1e-12);

  auto bad = builtin("block-fig1").rule;
  bad.t[0][0][1] = bad.t[0][0][0];  // duplicate position
  auto rep = validate_stone_inflation(bad);
  CHECK_FALSE(rep.ok());
  REQUIRE_FALSE(rep.overlaps.empty());
  CHECK(rep.overlaps[0].column == 0);

  auto stag = builtin("staggered(2,2,[0.5])").rule;
  auto rs = validate_stone_inflation(stag);
  CHECK(rs.volume_ok);
}

TEST_CASE("patches") {
  auto fig1 = builtin("block-fig1").rule;
  for (int seed : {0, 1}) CHECK(inflate_patch(fig1, seed, 3).tiles.size() == 216);

  auto fib = inflate_patch(builtin("fibonacci").rule, 0, 5);
  CHECK(fib.tiles.size() == 13);
  CHECK(fib.counts[0] == 8);
  CHECK(fib.counts[1] == 5);

  for (auto name : {"fibonacci", "abcd", "block-fig1", "frank-robinson", "staggered(3,2,[0.25,0.7071067811865476])"}) {
    auto rule = builtin(name).rule;
    const auto m = substitution_matrix(rule);
    const int maxn = rule.dim == 1 ? 8 : (std::string(name) == "frank-robinson" ? 4 : 5);
    for (int n = 0; n <= maxn; ++n) {
      auto mp = power(m, n);
      for (int seed = 0; seed < static_cast<int>(rule.size()); ++seed) {
        auto patch = inflate_patch(rule, seed, n);
        for (std::size_t i = 0; i < rule.size(); ++i) CHECK(static_cast<long>(patch.counts[i]) == mp[i][seed]);
      }
    }
  }
}

TEST_CASE("patch frequencies approach PF frequencies") {
  struct Case {
    const char* name;
    int level;
  };
  for (auto c : {Case{"fibonacci", 20}, Case{"abcd", 14}, Case{"block-fig1", 6}, Case{"frank-robinson", 7}}) {
    auto rule = builtin(c.name).rule;
    auto pf = pf_data(substitution_matrix(rule));
    auto patch = inflate_patch(rule, 0, c.level);
    double l1 = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i)
      l1 += std::abs(static_cast<double>(patch.counts[i]) / static_cast<double>(patch.tiles.size()) - pf.frequencies(i));
    INFO(std::string(c.name));
    CHECK(l1 < 0.02);
  }
}

TEST_CASE("FR level-3 patch tiles without overlap") {
  auto rule = builtin("frank-robinson").rule;
  auto patch = inflate_patch(rule, 0, 3);
  std::vector<std::vector<double>> e;
  for (const auto& t : rule.tiles) e.push_back(t.edges.real_value(*rule.basis));
  double area = 0.0;
  for (const auto& t : patch.tiles) area += e[t.type][0] * e[t.type][1];
  const double side = std::pow(frank_robinson_lambda(), 4);
  CHECK(area == doctest::Approx(side * side).epsilon(1e-12));
  CHECK(patch.upper[0] == doctest::Approx(side));
  CHECK(patch.upper[1] == doctest::Approx(side));
}
