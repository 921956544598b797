#pragma once

// Randomly shifted rank-1 lattice rules on the unit cube [0,1)^s.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "renorm/parallel.hpp"

namespace renorm {

struct LatticeRule {
  std::size_t n = 0;
  std::vector<std::uint64_t> z;  // generating vector, z[0] = 1
  double p2 = 0.0;               // figure of merit of the chosen z
};

/// Korobov rule z = (1, a, a^2, ...) mod n, a picked by the P_2 criterion
/// from a fixed candidate set. Results are cached per (n, s).
LatticeRule korobov_lattice(std::size_t n, std::size_t s);

/// P_2 worst-case error of a rank-1 rule in the unanchored Korobov space.
double lattice_p2(std::size_t n, std::span<const std::uint64_t> z);

struct QmcOptions {
  /// Target standard error; <= 0 means a single pass at min_points.
  double tol = 1e-4;
  std::size_t min_points = std::size_t{1} << 13;  // per shift
  std::size_t max_total = std::size_t{1} << 23;
  int shifts = 8;
  std::uint64_t seed = kDefaultSeed;
  /// Lower clip applied to integrand values (log singularities).
  double clip = -40.0;
};

struct QmcEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t nodes = 0;
  double clip_mass = 0.0;  // fraction of nodes that hit the clip
};

/// Mean of f over [0,1)^s. f must be thread safe. The point is made
/// available as a span of length s. Throws when tol is not reached within
/// max_total nodes.
QmcEstimate lattice_mean(std::size_t s, const std::function<double(std::span<const double>)>& f,
                         const QmcOptions& opts = {});

}  // namespace renorm
