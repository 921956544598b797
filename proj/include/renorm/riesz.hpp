#pragma once

// Finite Riesz products: the Fejer comb on the coefficient side, densities
// prod_{m<n} f_m(k) on the Fourier side, their integrals and distribution
// functions.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "renorm/fourier.hpp"
#include "renorm/measures.hpp"

namespace renorm {

/// Convolution of f^m.nu for m < n, f(x) = M x, nu = (mu * mu~)/M with
/// mu = delta_0 + ... + delta_{M-1}. Rational weights, exact.
RationalComb riesz_product_comb(int m, int n);

/// A family of nonnegative densities indexed by depth n.
class RieszDensity {
 public:
  /// prod_{m<n} nu^(M^m k) with nu^(k) = 1 + 2 sum_{l<M} (M-l)/M cos(2 pi l k).
  static RieszDensity fejer(int m);
  /// prod_{m<n} (1 + cos 2 pi 2^m (k1 + a k2)) (1 + cos 2 pi 2^m k2).
  static RieszDensity staggered_square(double a);
  /// |(1^T B^(n)(k))_j|^2 / (|det Q|^n vol(t_j)): the normalised squared
  /// Fourier transform of the level-n supertile of type j.
  static RieszDensity supertile(const InflationRule& rule, int type);

  std::size_t dim() const { return dim_; }
  const std::string& name() const { return name_; }
  /// Number of oscillations per unit length of the finest factor at depth n.
  double frequency(int n) const;

  double operator()(int n, std::span<const double> k) const { return eval_(n, k); }
  double operator()(int n, std::initializer_list<double> k) const {
    return eval_(n, std::span<const double>(k.begin(), k.size()));
  }

 private:
  std::size_t dim_ = 1;
  std::string name_;
  double growth_ = 2.0;  // per-depth frequency growth
  double base_ = 1.0;
  std::function<double(int, std::span<const double>)> eval_;
};

/// Density at depth n (n >= 1; n = 0 gives 1 for the product families).
double riesz_density_sample(const RieszDensity& f, int n, std::span<const double> k);

struct Integral {
  double value = 0.0;
  double error = 0.0;  // Richardson: |T(h) - T(2h)| / 3
  std::size_t nodes = 0;
};

/// Trapezoid rule for a 1D density times an optional weight on [a, b].
Integral integrate_density(const RieszDensity& f, int n, double a, double b, std::size_t nodes,
                           const std::function<double(double)>& weight = nullptr);

/// 2D midpoint/trapezoid sum over [a1,b1] x [a2,b2] with an optional weight.
Integral integrate_density_2d(const RieszDensity& f, int n, std::span<const double> lower,
                              std::span<const double> upper, std::size_t nodes_per_axis,
                              const std::function<double(double, double)>& weight = nullptr);

/// Nodes per unit length so that the finest oscillation is resolved with
/// `per_period` samples.
std::size_t resolving_nodes(const RieszDensity& f, int n, double per_period = 16.0);

/// F(k1, k2) = integral of the density over [0,k1] x [0,k2] on a (g+1)^2
/// grid, by cumulative trapezoid sums. Row-major, F[i * (g + 1) + j] at
/// (i K1 / g, j K2 / g).
struct DistributionGrid {
  double k1 = 0.0, k2 = 0.0;
  std::size_t grid = 0;
  std::vector<double> density;
  std::vector<double> f;
  double at(std::size_t i, std::size_t j) const { return f[i * (grid + 1) + j]; }
  double density_at(std::size_t i, std::size_t j) const { return density[i * (grid + 1) + j]; }
};

DistributionGrid distribution_function(const RieszDensity& f, int n, double k1, double k2, std::size_t grid);

}  // namespace renorm
