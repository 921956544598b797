#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "renorm/catalogue.hpp"
#include "renorm/fourier.hpp"

using namespace renorm;

namespace {

Complex e2pi(double t) { return std::polar(1.0, 2.0 * std::numbers::pi * t); }

GenTrigPoly z1(std::vector<std::pair<std::int64_t, Complex>> terms) {
  std::vector<Term> out;
  for (auto [e, c] : terms) out.push_back({ExponentVector::integral({e}), c});
  return GenTrigPoly::from_terms(1, FrequencyBasis::trivial(), out);
}

GenTrigPoly xy(std::vector<std::tuple<std::int64_t, std::int64_t, Complex>> terms) {
  std::vector<Term> out;
  for (auto [a, b, c] : terms) out.push_back({ExponentVector::integral({a, b}), c});
  return GenTrigPoly::from_terms(2, FrequencyBasis::trivial(), out);
}

// naive 4x4 complex determinant by Leibniz
Complex leibniz(const Eigen::MatrixXcd& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  Complex s = 0;
  do {
    int inv = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) inv += perm[i] > perm[j];
    Complex t = inv % 2 ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) t *= m(i, perm[i]);
    s += t;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return s;
}

}  // namespace

TEST_CASE("abcd Fourier matrix") {
  auto b = fourier_matrix(builtin("abcd").rule);
  // [[1, z, 0, 0], [z, 0, 1, 0], [0, 1, 0, z], [0, 0, z, 1]]
  auto one = z1({{0, 1}}), z = z1({{1, 1}}), zero = GenTrigPoly(1, FrequencyBasis::trivial());
  const GenTrigPoly* expect[4][4] = {
      {&one, &z, &zero, &zero}, {&z, &zero, &one, &zero}, {&zero, &one, &zero, &z}, {&zero, &zero, &z, &one}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(b(i, j).equals(*expect[i][j]));
  CHECK(det_polynomial(b).equals(z1({{4, 1}, {0, -1}})));
}

TEST_CASE("B(0) equals the substitution matrix for every catalogue rule") {
  for (auto name : {"fibonacci", "abcd", "block-fig1", "frank-robinson", "staggered(3,2,[0.3,1.7320508075688772])"}) {
    auto rule = builtin(name).rule;
    auto b = fourier_matrix(rule);
    std::vector<double> k(rule.dim, 0.0);
    auto b0 = b.evaluate(k);
    auto m = substitution_matrix(rule);
    CHECK((b0 - m.cast<double>().cast<Complex>()).norm() < 1e-14);
    for (std::size_t i = 0; i < rule.size(); ++i)
      for (std::size_t j = 0; j < rule.size(); ++j) {
        CHECK(b(i, j).size() == rule.t[i][j].size());
        for (const auto& t : b(i, j).terms()) CHECK(t.coeff == Complex(1.0));
      }
  }
}

TEST_CASE("fig1 block Fourier matrix, determinant and decomposition") {
  auto entry = builtin("block-fig1");
  auto b = fourier_matrix(entry.rule);
  auto p = xy({{0, 0, 1}, {1, 0, 1}, {2, 0, 1}, {0, 1, 1}, {1, 1, 1}, {2, 1, 1}});
  // 1 + (x + x^2)(1 + y)
  CHECK(b(0, 0).equals(xy({{0, 0, 1}, {1, 0, 1}, {2, 0, 1}, {1, 1, 1}, {2, 1, 1}})));
  CHECK(b(0, 1).equals(xy({{0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}})));
  CHECK(b(1, 0).equals(xy({{0, 1, 1}})));
  CHECK(b(1, 1).equals(xy({{2, 0, 1}, {2, 1, 1}})));

  auto qr = xy({{2, 0, 1}, {2, 1, 1}, {0, 1, -1}});
  CHECK(det_polynomial(b).equals(p * qr));

  auto dec = binary_block_decomposition(entry.rule);
  CHECK(dec.p.equals(p));
  CHECK(dec.q.equals(xy({{2, 0, 1}, {2, 1, 1}})));
  CHECK(dec.r.equals(xy({{0, 1, 1}})));
  CHECK(dec.s0.equals(xy({{0, 0, 1}, {1, 0, 1}, {1, 1, 1}})));
  CHECK(dec.s1.is_zero());
  CHECK((dec.q + dec.r + dec.s0 + dec.s1).equals(dec.p));
  CHECK(dec.coincident == 3);
  CHECK((dec.q - dec.r).l2_norm_squared() == doctest::Approx(3.0));

  // (1,1) B(k) = p(k) (1,1)
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 50; ++i) {
    double k[2] = {u(rng), u(rng)};
    auto m = b.evaluate(k);
    auto pv = p.evaluate(k);
    CHECK(std::abs(m(0, 0) + m(1, 0) - pv) < 1e-12);
    CHECK(std::abs(m(0, 1) + m(1, 1) - pv) < 1e-12);
  }
}

TEST_CASE("fully coincident binary rule") {
  auto rule = builtin("block-fig1").rule;
  rule.t[0][1] = rule.t[0][0];
  rule.t[1][1] = rule.t[1][0];
  auto dec = binary_block_decomposition(rule);
  CHECK(dec.q.is_zero());
  CHECK(dec.r.is_zero());
  CHECK((dec.s0 + dec.s1).equals(dec.p));
  CHECK(dec.coincident == 6);
  CHECK(det_polynomial(fourier_matrix(rule)).is_zero());
}

TEST_CASE("Frank-Robinson Fourier matrix matches its closed form") {
  auto rule = builtin("frank-robinson").rule;
  auto b = fourier_matrix(rule);
  const double lam = frank_robinson_lambda();
  auto r = [&](Complex w, double k) { return std::pow(w, 0) * (e2pi(lam * k) + e2pi((lam + 1) * k) + e2pi((lam + 2) * k)); };
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-2, 2);
  auto detp = det_polynomial(b);
  for (int t = 0; t < 100; ++t) {
    const double k1 = u(rng), k2 = u(rng);
    const Complex x = e2pi(k1), y = e2pi(k2);
    const Complex p12 = x * x + x * x * y + e2pi((lam + 2) * k2);
    const Complex p21 = y * y + y * y * x + e2pi((lam + 2) * k1);
    const Complex q = 1.0 + x + y + x * y +
                      e2pi(lam * (k1 + k2)) * (x * x + y * y + x * y * y + x * x * y + x * x * y * y);
    Eigen::MatrixXcd expect(4, 4);
    expect << x * x * y * y, 1, 1, 1, p12, 0, r(1, k2), 0, p21, r(1, k1), 0, 0, q, 0, 0, 0;
    double k[2] = {k1, k2};
    CHECK((b.evaluate(k) - expect).norm() < 1e-10);
    // det = q r(x) r(y)
    CHECK(std::abs(detp.evaluate(k) - q * r(1, k1) * r(1, k2)) < 1e-9);
    CHECK(std::abs(detp.evaluate(k) - leibniz(expect)) < 1e-9);
  }
}

TEST_CASE("cocycle evaluation and symbolic cocycle") {
  auto b = fourier_matrix(builtin("abcd").rule);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  double k0[1] = {0.0};
  Eigen::MatrixXd m = substitution_matrix(builtin("abcd").rule).cast<double>();
  CHECK((cocycle_evaluate(b, k0, 3) - (m * m * m).cast<Complex>()).norm() < 1e-12);
  double k1[1] = {0.3};
  CHECK((cocycle_evaluate(b, k1, 1) - b.evaluate(k1)).norm() < 1e-15);
  CHECK(cocycle_symbolic(b, 1).equals(b));

  auto b4 = cocycle_symbolic(b, 4);
  for (int i = 0; i < 20; ++i) {
    double k[1] = {u(rng)};
    CHECK((cocycle_evaluate(b, k, 4) - b4.evaluate(k)).norm() < 1e-9);
  }

  // B^(2) of abcd is the Fourier matrix of the squared substitution
  auto sq = realize_1d(compose(*builtin("abcd").rule.symbolic, *builtin("abcd").rule.symbolic));
  CHECK(cocycle_symbolic(b, 2).equals(fourier_matrix(sq)));

  // commuting family
  auto b2 = cocycle_symbolic(b, 2);
  for (int i = 0; i < 20; ++i) {
    double ka[1] = {u(rng)}, kb[1] = {u(rng)};
    auto x = b2.evaluate(ka), y = b2.evaluate(kb);
    CHECK((x * y - y * x).norm() < 1e-10);
  }
}

TEST_CASE("cocycle identities on random rules") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0, 1);
  for (auto name : {"block-fig1", "frank-robinson", "fibonacci"}) {
    auto b = fourier_matrix(builtin(name).rule);
    const std::size_t d = b.dim();
    for (int t = 0; t < 20; ++t) {
      std::vector<double> k(d);
      for (auto& x : k) x = u(rng);
      // det of the cocycle is the product of determinants along the orbit
      Complex prod = 1.0;
      std::vector<double> kk = k;
      for (int l = 0; l < 3; ++l) {
        prod *= b.evaluate(kk).determinant();
        kk = b.expansion().apply_transpose(kk);
      }
      const Complex det3 = cocycle_evaluate(b, k, 3).determinant();
      CHECK(std::abs(det3 - prod) <= 1e-8 * std::max(1.0, std::abs(prod)));
      // submultiplicativity of the Frobenius norm
      std::vector<double> k2 = b.expansion().apply_transpose(b.expansion().apply_transpose(k));
      CHECK(cocycle_evaluate(b, k, 3).norm() <= cocycle_evaluate(b, k, 2).norm() * cocycle_evaluate(b, k2, 1).norm() + 1e-9);
    }
  }
}

TEST_CASE("similarity transform of abcd") {
  auto entry = builtin("abcd");
  auto b = fourier_matrix(entry.rule);
  const auto& u = *entry.similarity;
  CHECK((u * u - Eigen::MatrixXcd::Identity(4, 4)).norm() < 1e-15);
  auto s = apply_similarity(b, u);
  auto one = z1({{0, 1}}), z = z1({{1, 1}});
  CHECK(s(0, 0).equals(z1({{0, 1}, {1, 1}})));
  CHECK(s(1, 1).equals(z1({{0, 1}, {1, -1}})));
  CHECK(s(2, 2).equals(z1({{1, -1}})));
  CHECK(s(2, 3).equals(one));
  CHECK(s(3, 2).equals(one));
  CHECK(s(3, 3).equals(z));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j && !(i >= 2 && j >= 2)) CHECK(s(i, j).is_zero());
  CHECK(apply_similarity(b, Eigen::MatrixXcd::Identity(4, 4)).equals(b));
  auto red = s.block(entry.reduced_block);
  CHECK(red.size() == 2);
  CHECK(frobenius_squared(red).equals(z1({{0, 4}})));
}
