#include "renorm/algebraic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

namespace renorm {

IntPoly characteristic_polynomial(const IntMatrix& a) {
  const auto n = a.rows();
  if (n != a.cols() || n == 0) throw Error("characteristic_polynomial: matrix must be square");
  IntPoly c(n + 1, 0);
  c[n] = 1;
  IntMatrix mk = IntMatrix::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    mk = a * mk + c[n - k + 1] * IntMatrix::Identity(n, n);
    const std::int64_t tr = (a * mk).trace();
    if (tr % k != 0) throw Error("characteristic_polynomial: inexact division (overflow?)");
    c[n - k] = -tr / k;
  }
  return c;
}

double evaluate(const IntPoly& p, double x) {
  double v = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * x + static_cast<double>(*it);
  return v;
}

namespace {

// exact division by a monic divisor; returns false when a remainder is left
bool divide_monic(const IntPoly& p, const IntPoly& d, IntPoly& quotient) {
  if (p.size() < d.size()) return false;
  IntPoly r = p;
  const std::size_t dd = d.size() - 1;
  quotient.assign(p.size() - dd, 0);
  for (std::size_t k = p.size() - 1; k + 1 >= d.size() && k < p.size(); --k) {
    const std::int64_t c = r[k];
    quotient[k - dd] = c;
    for (std::size_t i = 0; i <= dd; ++i) r[k - dd + i] -= c * d[i];
    if (k == dd) break;
  }
  return std::all_of(r.begin(), r.end(), [](std::int64_t x) { return x == 0; });
}

std::vector<std::complex<double>> numeric_roots(const IntPoly& p) {
  std::size_t n = p.size() - 1;
  while (n > 0 && p[n] == 0) --n;
  if (n == 0) return {};
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (std::size_t i = 0; i < n; ++i) comp(i, n - 1) = -static_cast<double>(p[i]) / static_cast<double>(p[n]);
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  std::vector<std::complex<double>> out(es.eigenvalues().data(), es.eigenvalues().data() + n);
  return out;
}

}  // namespace

IntPoly minimal_polynomial(const IntPoly& p, double root) {
  if (p.size() < 2) throw Error("minimal_polynomial: constant polynomial");
  if (std::abs(evaluate(p, root)) > 1e-6 * std::max(1.0, std::pow(std::abs(root), p.size() - 1)))
    throw Error("minimal_polynomial: value is not a root");
  const auto roots = numeric_roots(p);
  const std::size_t n = roots.size();
  std::size_t self = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(roots[i] - root) < std::abs(roots[self] - root)) self = i;
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < n; ++i)
    if (i != self) others.push_back(i);
  if (others.size() > 20) return p;

  // subsets containing the root, smallest first
  for (std::size_t size = 0; size <= others.size(); ++size) {
    std::vector<bool> pick(others.size(), false);
    std::fill(pick.begin(), pick.begin() + static_cast<long>(size), true);
    do {
      std::vector<std::complex<double>> c{1.0};
      auto mul_root = [&c](std::complex<double> z) {
        c.push_back(0.0);
        for (std::size_t i = c.size() - 1; i > 0; --i) c[i] = c[i - 1] - z * c[i];
        c[0] = -z * c[0];
      };
      mul_root(roots[self]);
      for (std::size_t i = 0; i < others.size(); ++i)
        if (pick[i]) mul_root(roots[others[i]]);
      IntPoly cand(c.size());
      bool ok = true;
      for (std::size_t i = 0; i < c.size() && ok; ++i) {
        const double re = std::round(c[i].real());
        ok = std::abs(c[i].imag()) < 1e-6 && std::abs(c[i].real() - re) < 1e-6;
        cand[i] = static_cast<std::int64_t>(re);
      }
      IntPoly q;
      if (ok && divide_monic(p, cand, q) && std::abs(evaluate(cand, root)) < 1e-6 * std::max(1.0, std::abs(root)))
        return cand;
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return p;
}

// ---------------------------------------------------------------- number field

NumberField::NumberField(IntPoly minpoly, double approx) : minpoly_(std::move(minpoly)), approx_(approx) {
  if (minpoly_.size() < 2 || minpoly_.back() != 1) throw Error("NumberField: minimal polynomial must be monic");
}

NumberField::Element NumberField::one() const { return from_rational(Rational(1)); }

NumberField::Element NumberField::generator() const {
  if (degree() == 1) return from_rational(Rational(-minpoly_[0]));
  Element e = zero();
  e[1] = 1;
  return e;
}

NumberField::Element NumberField::from_rational(const Rational& r) const {
  Element e = zero();
  e[0] = r;
  return e;
}

NumberField::Element NumberField::add(const Element& a, const Element& b) const {
  Element out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

NumberField::Element NumberField::sub(const Element& a, const Element& b) const {
  Element out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

NumberField::Element NumberField::reduce(std::vector<Rational> c) const {
  const std::size_t d = degree();
  for (std::size_t k = c.size(); k-- > d;) {
    const Rational lead = c[k];
    if (lead == 0) continue;
    for (std::size_t i = 0; i <= d; ++i) c[k - d + i] -= lead * minpoly_[i];
  }
  c.resize(d, Rational(0));
  return c;
}

NumberField::Element NumberField::mul(const Element& a, const Element& b) const {
  std::vector<Rational> c(2 * degree(), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return reduce(std::move(c));
}

RationalMatrix NumberField::companion() const {
  const std::size_t d = degree();
  RationalMatrix m(d, d);
  for (std::size_t r = 0; r + 1 < d; ++r) m(r + 1, r) = 1;
  for (std::size_t i = 0; i < d; ++i) m(i, d - 1) = -minpoly_[i];
  return m;
}

NumberField::Element NumberField::inverse(const Element& a) const {
  if (is_zero(a)) throw Error("NumberField: division by zero");
  const std::size_t d = degree();
  RationalMatrix m(d, d);
  Element basis = one();
  for (std::size_t r = 0; r < d; ++r) {
    Element col = mul(a, basis);
    for (std::size_t i = 0; i < d; ++i) m(i, r) = col[i];
    basis = mul(basis, generator());
  }
  return m.inverse().apply(one());
}

bool NumberField::is_zero(const Element& a) const {
  return std::all_of(a.begin(), a.end(), [](const Rational& r) { return r == 0; });
}

double NumberField::to_double(const Element& a) const {
  double v = 0.0, p = 1.0;
  for (const auto& c : a) {
    v += renorm::to_double(c) * p;
    p *= approx_;
  }
  return v;
}

std::vector<NumberField::Element> eigenvector(const NumberField& f, const IntMatrix& a) {
  const std::size_t n = static_cast<std::size_t>(a.rows());
  std::vector<std::vector<NumberField::Element>> m(n, std::vector<NumberField::Element>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      m[i][j] = f.from_rational(Rational(a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
      if (i == j) m[i][j] = f.sub(m[i][j], f.generator());
    }
  // reduced row echelon form
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < n; ++col) {
    std::size_t p = row;
    while (p < n && f.is_zero(m[p][col])) ++p;
    if (p == n) continue;
    std::swap(m[p], m[row]);
    const auto inv = f.inverse(m[row][col]);
    for (auto& x : m[row]) x = f.mul(x, inv);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == row || f.is_zero(m[i][col])) continue;
      const auto factor = m[i][col];
      for (std::size_t j = 0; j < n; ++j) m[i][j] = f.sub(m[i][j], f.mul(factor, m[row][j]));
    }
    pivot_col.push_back(col);
    ++row;
  }
  if (pivot_col.size() != n - 1) throw Error("eigenvector: eigenvalue is not simple");
  std::size_t free_col = 0;
  while (std::find(pivot_col.begin(), pivot_col.end(), free_col) != pivot_col.end()) ++free_col;
  std::vector<NumberField::Element> v(n, f.zero());
  v[free_col] = f.one();
  for (std::size_t r = 0; r < pivot_col.size(); ++r) v[pivot_col[r]] = f.sub(f.zero(), m[r][free_col]);
  return v;
}

}  // namespace renorm
