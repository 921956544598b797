#include "renorm/riesz.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "renorm/parallel.hpp"

namespace renorm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

RationalComb ordinal_comb(std::int64_t count, const BasisPtr& basis) {
  RationalComb c(1, basis);
  for (std::int64_t l = 0; l < count; ++l) c.add(ExponentVector::integral({l}), Rational(1));
  return c;
}

// a * x mod 1, keeping the rounding error of the product
double frac_product(double a, double x) {
  const double p = a * x;
  return (p - std::round(p)) + std::fma(a, x, -p);
}

}  // namespace

RationalComb riesz_product_comb(int m, int n) {
  if (m < 2) throw Error("riesz_product_comb: M must be at least 2");
  if (n < 0) throw Error("riesz_product_comb: depth must be nonnegative");
  auto basis = FrequencyBasis::trivial();
  const RationalComb mu = ordinal_comb(m, basis);
  const RationalComb nu = scaled(convolve(mu, flip(mu)), Rational(1, m));
  RationalComb out = RationalComb::delta(ExponentVector(1, 1), basis);
  Rational scale(1);
  for (int step = 0; step < n; ++step) {
    out = convolve(out, pushforward(RationalMatrix::scalar(1, scale), nu));
    scale *= m;
  }
  return out;
}

RieszDensity RieszDensity::fejer(int m) {
  if (m < 2) throw Error("fejer density: M must be at least 2");
  RieszDensity d;
  d.dim_ = 1;
  d.name_ = fmt::format("fejer({})", m);
  d.growth_ = m;
  d.base_ = m - 1;
  d.eval_ = [m](int n, std::span<const double> k) {
    double prod = 1.0, scale = 1.0;
    for (int step = 0; step < n; ++step) {
      const double t = frac_product(scale, k[0]);
      double f = 1.0;
      for (int l = 1; l < m; ++l) f += 2.0 * (m - l) / m * std::cos(kTwoPi * l * t);
      prod *= f;
      scale *= m;
    }
    return prod;
  };
  return d;
}

RieszDensity RieszDensity::staggered_square(double a) {
  RieszDensity d;
  d.dim_ = 2;
  d.name_ = fmt::format("staggered-square({})", a);
  d.growth_ = 2.0;
  d.base_ = 1.0 + std::abs(a);
  d.eval_ = [a](int n, std::span<const double> k) {
    double prod = 1.0, scale = 1.0;
    const double au = frac_product(a, k[1]);
    for (int step = 0; step < n; ++step) {
      const double t1 = frac_product(scale, k[0]) + frac_product(scale, au);
      prod *= (1.0 + std::cos(kTwoPi * t1)) * (1.0 + std::cos(kTwoPi * frac_product(scale, k[1])));
      scale *= 2.0;
    }
    return prod;
  };
  return d;
}

RieszDensity RieszDensity::supertile(const InflationRule& rule, int type) {
  if (type < 0 || static_cast<std::size_t>(type) >= rule.size()) throw Error("supertile density: no such tile type");
  RieszDensity d;
  d.dim_ = rule.dim;
  d.name_ = fmt::format("supertile({}, {})", rule.name, rule.tiles[static_cast<std::size_t>(type)].label);
  const Eigen::MatrixXd q = rule.q.real_matrix();
  d.growth_ = q.cwiseAbs().rowwise().sum().maxCoeff();
  double edge = 0.0;
  for (const auto& t : rule.tiles)
    for (double e : t.edges.real_value(*rule.basis)) edge = std::max(edge, std::abs(e));
  d.base_ = edge * d.growth_;  // the level-n supertile has diameter ~ edge growth^n
  auto b = std::make_shared<FourierMatrix>(fourier_matrix(rule));
  const double det = rule.q.abs_det();
  const double vol = rule.volume(static_cast<std::size_t>(type));
  d.eval_ = [b, det, vol, type](int n, std::span<const double> k) {
    if (n == 0) return 1.0 / vol;
    const Eigen::MatrixXcd c = cocycle_evaluate(*b, k, n);
    const double s = std::norm(c.col(type).sum());
    return s / (std::pow(det, n) * vol);
  };
  return d;
}

double RieszDensity::frequency(int n) const { return base_ * std::pow(growth_, std::max(0, n - 1)); }

double riesz_density_sample(const RieszDensity& f, int n, std::span<const double> k) {
  if (n < 0) throw Error("riesz density: depth must be nonnegative");
  if (k.size() != f.dim()) throw Error("riesz density: dimension mismatch");
  return f(n, k);
}

std::size_t resolving_nodes(const RieszDensity& f, int n, double per_period) {
  return static_cast<std::size_t>(std::ceil(f.frequency(n) * per_period));
}

Integral integrate_density(const RieszDensity& f, int n, double a, double b, std::size_t nodes,
                           const std::function<double(double)>& weight) {
  if (f.dim() != 1) throw Error("integrate_density: 1D density expected");
  nodes = std::max<std::size_t>(2, nodes + (nodes & 1));  // even, for the coarse rule
  const double h = (b - a) / static_cast<double>(nodes);
  struct Part {
    double fine = 0.0, coarse = 0.0;
  };
  auto parts = parallel_chunks<Part>(nodes + 1, 1 << 14, [&](std::size_t, std::size_t lo, std::size_t hi) {
    Part p;
    for (std::size_t i = lo; i < hi; ++i) {
      const double x = a + h * static_cast<double>(i);
      const double k[1] = {x};
      double v = f(n, k);
      if (weight) v *= weight(x);
      const double end = (i == 0 || i == nodes) ? 0.5 : 1.0;
      p.fine += end * v;
      if (i % 2 == 0) p.coarse += end * v;
    }
    return p;
  });
  Part tot;
  for (const auto& p : parts) {
    tot.fine += p.fine;
    tot.coarse += p.coarse;
  }
  Integral out;
  out.value = tot.fine * h;
  out.error = std::abs(out.value - tot.coarse * 2.0 * h) / 3.0;
  out.nodes = nodes + 1;
  return out;
}

Integral integrate_density_2d(const RieszDensity& f, int n, std::span<const double> lower,
                              std::span<const double> upper, std::size_t nodes_per_axis,
                              const std::function<double(double, double)>& weight) {
  if (f.dim() != 2) throw Error("integrate_density_2d: 2D density expected");
  const std::size_t g = std::max<std::size_t>(2, nodes_per_axis + (nodes_per_axis & 1));
  const double h1 = (upper[0] - lower[0]) / static_cast<double>(g);
  const double h2 = (upper[1] - lower[1]) / static_cast<double>(g);
  struct Part {
    double fine = 0.0, coarse = 0.0;
  };
  auto parts = parallel_chunks<Part>(g + 1, 8, [&](std::size_t, std::size_t lo, std::size_t hi) {
    Part p;
    for (std::size_t i = lo; i < hi; ++i) {
      const double wi = (i == 0 || i == g) ? 0.5 : 1.0;
      for (std::size_t j = 0; j <= g; ++j) {
        const double wj = (j == 0 || j == g) ? 0.5 : 1.0;
        const double k[2] = {lower[0] + h1 * static_cast<double>(i), lower[1] + h2 * static_cast<double>(j)};
        double v = f(n, k);
        if (weight) v *= weight(k[0], k[1]);
        p.fine += wi * wj * v;
        if (i % 2 == 0 && j % 2 == 0) p.coarse += wi * wj * v;
      }
    }
    return p;
  });
  Part tot;
  for (const auto& p : parts) {
    tot.fine += p.fine;
    tot.coarse += p.coarse;
  }
  Integral out;
  out.value = tot.fine * h1 * h2;
  out.error = std::abs(out.value - tot.coarse * 4.0 * h1 * h2) / 3.0;
  out.nodes = (g + 1) * (g + 1);
  return out;
}

DistributionGrid distribution_function(const RieszDensity& f, int n, double k1, double k2, std::size_t grid) {
  if (f.dim() != 2) throw Error("distribution_function: 2D density expected");
  if (grid == 0) throw Error("distribution_function: grid must be positive");
  DistributionGrid out;
  out.k1 = k1;
  out.k2 = k2;
  out.grid = grid;
  const std::size_t w = grid + 1;
  const double h1 = k1 / static_cast<double>(grid), h2 = k2 / static_cast<double>(grid);
  out.density.assign(w * w, 0.0);
  parallel_chunks<char>(w, 4, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t j = 0; j < w; ++j) {
        const double k[2] = {h1 * static_cast<double>(i), h2 * static_cast<double>(j)};
        out.density[i * w + j] = f(n, k);
      }
    return char{};
  });
  out.f.assign(w * w, 0.0);
  const double cell = 0.25 * h1 * h2;
  for (std::size_t i = 1; i < w; ++i)
    for (std::size_t j = 1; j < w; ++j) {
      const double s = out.density[(i - 1) * w + j - 1] + out.density[(i - 1) * w + j] + out.density[i * w + j - 1] +
                       out.density[i * w + j];
      out.f[i * w + j] = out.f[(i - 1) * w + j] + out.f[i * w + j - 1] - out.f[(i - 1) * w + j - 1] + cell * s;
    }
  return out;
}

}  // namespace renorm
