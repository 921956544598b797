#pragma once

// Orbits of k -> Q^T k followed in the lifted coordinates u[j*m + r] = g_r k_j,
// reduced modulo a common period S. The orbit is carried in MPFR with enough
// bits that the doubles handed out stay accurate for the requested number of
// steps, so orbits of length 10^4 under doubling do not collapse to 0.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "renorm/trigpoly.hpp"

namespace renorm {

class ToralOrbit {
 public:
  /// `steps` bounds how far the orbit is followed accurately. With a jitter
  /// seed, k0 is completed to a random real by appending random low-order
  /// bits (so a double k0 behaves like a typical point); without, k0 is
  /// taken exactly.
  ToralOrbit(const Expansion& q, std::span<const double> k0, int steps, std::int64_t period,
             std::optional<std::uint64_t> jitter_seed = std::nullopt);
  ~ToralOrbit();
  ToralOrbit(ToralOrbit&&) noexcept;
  ToralOrbit& operator=(ToralOrbit&&) noexcept;

  /// Current lifted point in [0, S)^{d m}.
  const std::vector<double>& point() const { return u_; }
  void advance();
  long precision_bits() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::vector<double> u_;
};

/// Spectral radius of the torus map (at least 1).
double torus_growth(const Expansion& q);

}  // namespace renorm
