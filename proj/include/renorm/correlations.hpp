#pragma once

// Empirical pair correlations nu_ij(z) of inflation patches and the exact
// renormalisation identity they satisfy.

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "renorm/inflation.hpp"

namespace renorm {

using CorrelationKey = std::tuple<int, int, ExponentVector>;  // (i, j, z)

/// nu_ij(z): relative frequency of a type-i point x with a type-j point at
/// x + z. Displacements are exact elements of the frequency module.
struct PairCorrelation {
  std::size_t types = 0;
  std::size_t dim = 0;
  BasisPtr basis;
  double range = 0.0;               // sup-norm radius of the counted displacements
  std::size_t window_points = 0;    // points in the eroded window
  std::vector<double> frequencies;  // per type, inside the window
  std::map<CorrelationKey, double> nu;

  double value(int i, int j, const ExponentVector& z) const;
};

/// Counts point pairs with |z|_inf <= range. The counting window is the
/// patch eroded by the range plus the largest tile; a pair is weighted by
/// ([x in W] + [y in W]) / 2 so that nu_ij(-z) = nu_ji(z) holds exactly.
/// Throws when range exceeds half the patch inradius.
PairCorrelation empirical_pair_correlation(const InflationRule& rule, const Patch& patch, double range);

/// Radius of nu needed on the right-hand side to evaluate the identity for
/// |z| <= range: (range + 2 max|t|) ||Q^{-1}||, and at least range.
double required_correlation_range(const InflationRule& rule, double range);

struct ResidualReport {
  double max_residual = 0.0;
  int i = 0, j = 0;
  ExponentVector z;
  double lhs = 0.0, rhs = 0.0;
  std::size_t evaluated = 0;  // number of (i, j, z) compared
};

/// max over |z| <= range of |nu_ij(z) - (1/|det Q|) sum nu_mn(Q^{-1}(z + r - s))|,
/// r in T_im, s in T_jn, over the union of both supports.
ResidualReport renormalisation_residual(const InflationRule& rule, const PairCorrelation& corr, double range);

}  // namespace renorm
