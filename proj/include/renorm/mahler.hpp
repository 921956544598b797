#pragma once

// Logarithmic Mahler measures m(p) = integral of log|p| over the torus.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "renorm/lattice.hpp"
#include "renorm/trigpoly.hpp"

namespace renorm {

enum class MahlerMethod { JensenExact, IteratedJensen, QmcTorus, Birkhoff, CircleQuadrature };

std::string to_string(MahlerMethod m);

struct MahlerResult {
  double value = 0.0;
  double error = 0.0;
  MahlerMethod method = MahlerMethod::JensenExact;
  std::size_t nodes = 0;
  double clip_mass = 0.0;
};

/// Jensen: log|a_n| + sum log max(1, |alpha_i|), ascending coefficients.
MahlerResult mahler_univariate(const std::vector<Complex>& coeffs);
/// One-variable periodic trigonometric polynomial (a Laurent polynomial in z).
MahlerResult mahler_univariate(const GenTrigPoly& p);

/// Dense univariate coefficients of a periodic 1D polynomial after removing
/// the lowest power of z.
std::vector<Complex> laurent_coefficients(const GenTrigPoly& p);

/// m(p) for periodic p in several variables: exact Jensen in the variable of
/// highest degree, lattice quadrature over the others.
MahlerResult mahler_multivariate(const GenTrigPoly& p, const QmcOptions& opts = {});

/// Mean of log|p| for a quasiperiodic p, as the Mahler measure of its torus
/// lift. Requires independent generators.
MahlerResult quasiperiodic_log_mean(const GenTrigPoly& p, const QmcOptions& opts = {});

/// Plain lattice mean of a log-type integrand on T^s, clipped below.
MahlerResult torus_log_mean(std::size_t s, const std::function<double(std::span<const double>)>& log_f,
                            const QmcOptions& opts = {});

struct BirkhoffMeanOptions {
  std::size_t samples = std::size_t{1} << 16;
  double window = 1.0e4;  // samples uniform in [0, window)^d
  std::uint64_t seed = kDefaultSeed;
  double clip = -40.0;
};

/// Physical-space mean of a log-type integrand by Monte Carlo over a large
/// window; the independent counterpart of torus_log_mean.
MahlerResult birkhoff_log_mean(std::size_t d, const std::function<double(std::span<const double>)>& log_f,
                               const BirkhoffMeanOptions& opts = {});

}  // namespace renorm
