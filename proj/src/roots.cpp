#include "renorm/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

namespace renorm {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Eval {
  Complex newton;   // p / p'
  double residual;  // |p(z)| (or of the reversed polynomial)
  double bound;     // sum |a_i| |z|^i on the same scale
};

// p/p' and a backward-error bound at z; the reversed polynomial is used
// outside the unit disk so that nothing overflows
Eval eval_newton(const std::vector<Complex>& a, Complex z) {
  const std::size_t n = a.size() - 1;
  if (std::abs(z) <= 1.0) {
    Complex p = a[n], dp = 0.0;
    double bound = std::abs(a[n]);
    const double az = std::abs(z);
    for (std::size_t i = n; i-- > 0;) {
      dp = dp * z + p;
      p = p * z + a[i];
      bound = bound * az + std::abs(a[i]);
    }
    return {dp == Complex(0.0) ? Complex(0.0) : p / dp, std::abs(p), bound};
  }
  const Complex w = 1.0 / z;
  const double aw = std::abs(w);
  Complex q = a[0], dq = 0.0;
  double bound = std::abs(a[0]);
  for (std::size_t i = 1; i <= n; ++i) {
    dq = dq * w + q;
    q = q * w + a[i];
    bound = bound * aw + std::abs(a[i]);
  }
  // p'/p = w (n - w q'/q)
  const Complex denom = w * (static_cast<double>(n) - w * dq / q);
  return {q == Complex(0.0) ? Complex(0.0) : 1.0 / denom, std::abs(q), bound};
}

void polish(const std::vector<Complex>& a, std::vector<Complex>& roots) {
  for (auto& z : roots) {
    for (int it = 0; it < 4; ++it) {
      const Eval e = eval_newton(a, z);
      if (e.residual <= 2 * kEps * e.bound || !std::isfinite(std::abs(e.newton))) break;
      const Complex cand = z - e.newton;
      if (eval_newton(a, cand).residual >= e.residual) break;
      z = cand;
    }
  }
}

// trims zero coefficients: returns the number of roots at zero
std::size_t trim(const std::vector<Complex>& c, std::vector<Complex>& a) {
  std::size_t lo = 0, hi = c.size();
  while (lo < hi && c[lo] == Complex(0.0)) ++lo;
  while (hi > lo && c[hi - 1] == Complex(0.0)) --hi;
  if (lo == hi) throw Error("polynomial_roots: zero polynomial");
  a.assign(c.begin() + static_cast<long>(lo), c.begin() + static_cast<long>(hi));
  return lo;
}

void balance(Eigen::MatrixXcd& m) {
  const Eigen::Index n = m.rows();
  constexpr double radix = 2.0;
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j)
        if (j != i) {
          c += std::abs(m(j, i));
          r += std::abs(m(i, j));
        }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix, f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        m.row(i) /= f;
        m.col(i) *= f;
      }
    }
  }
}

}  // namespace

Complex poly_eval(const std::vector<Complex>& c, Complex z) {
  if (c.empty()) return 0.0;
  if (std::abs(z) <= 1.0) {
    Complex p = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) p = p * z + *it;
    return p;
  }
  const Complex w = 1.0 / z;
  Complex q = 0.0;
  for (const auto& x : c) q = q * w + x;
  return q * std::pow(z, static_cast<double>(c.size() - 1));
}

Complex newton_correction(const std::vector<Complex>& c, Complex z) {
  std::vector<Complex> a;
  trim(c, a);
  if (a.size() == 1) return 0.0;
  return eval_newton(a, z).newton;
}

std::vector<Complex> roots_companion(const std::vector<Complex>& c) {
  std::vector<Complex> a;
  const std::size_t zeros = trim(c, a);
  const std::size_t n = a.size() - 1;
  std::vector<Complex> out(zeros, 0.0);
  if (n == 0) return out;
  if (n == 1) {
    out.push_back(-a[0] / a[1]);
    return out;
  }
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 1; i < n; ++i) comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < n; ++i) comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n - 1)) = -a[i] / a[n];
  balance(comp);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  if (es.info() != Eigen::Success) throw Error("polynomial_roots: eigenvalue iteration failed");
  std::vector<Complex> r(es.eigenvalues().data(), es.eigenvalues().data() + n);
  polish(a, r);
  out.insert(out.end(), r.begin(), r.end());
  return out;
}

std::vector<Complex> roots_aberth(const std::vector<Complex>& c) {
  std::vector<Complex> a;
  const std::size_t zeros = trim(c, a);
  const std::size_t n = a.size() - 1;
  std::vector<Complex> out(zeros, 0.0);
  if (n == 0) return out;

  // starting points on circles given by the upper hull of (i, log|a_i|)
  std::vector<std::size_t> hull;
  std::vector<double> la(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    la[i] = a[i] == Complex(0.0) ? -std::numeric_limits<double>::infinity() : std::log(std::abs(a[i]));
  for (std::size_t i = 0; i <= n; ++i) {
    if (!std::isfinite(la[i])) continue;
    while (hull.size() >= 2) {
      const std::size_t p = hull[hull.size() - 2], q = hull.back();
      // drop q if it lies on or below the segment p -> i
      const double cross = (la[q] - la[p]) * static_cast<double>(i - p) - (la[i] - la[p]) * static_cast<double>(q - p);
      if (cross <= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(i);
  }
  std::vector<Complex> z;
  z.reserve(n);
  constexpr double sigma = 0.7;
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    const std::size_t k0 = hull[h], k1 = hull[h + 1], m = k1 - k0;
    const double u = std::exp((la[k0] - la[k1]) / static_cast<double>(m));
    for (std::size_t l = 0; l < m; ++l) {
      const double ang = 2.0 * std::numbers::pi * (static_cast<double>(l) / static_cast<double>(m) +
                                                   static_cast<double>(h) / static_cast<double>(n)) + sigma;
      z.push_back(std::polar(u, ang));
    }
  }

  std::vector<char> done(n, 0);
  std::size_t remaining = n;
  for (int sweep = 0; sweep < 1000 && remaining > 0; ++sweep) {
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      const Eval e = eval_newton(a, z[i]);
      if (e.residual <= 4.0 * kEps * e.bound) {
        done[i] = 1;
        --remaining;
        continue;
      }
      Complex s = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) s += 1.0 / (z[i] - z[j]);
      const Complex w = e.newton / (1.0 - e.newton * s);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) continue;
      z[i] -= w;
      if (std::abs(w) <= kEps * std::abs(z[i])) {
        done[i] = 1;
        --remaining;
      }
    }
  }
  if (remaining > 0) throw Error("polynomial_roots: Aberth iteration did not converge");
  polish(a, z);
  out.insert(out.end(), z.begin(), z.end());
  return out;
}

std::vector<Complex> polynomial_roots(const std::vector<Complex>& c) {
  std::vector<Complex> a;
  trim(c, a);
  if (a.size() - 1 <= 64) return roots_companion(c);
  return roots_aberth(c);
}

}  // namespace renorm
