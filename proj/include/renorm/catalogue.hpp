#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "renorm/inflation.hpp"

namespace renorm {

struct CatalogueEntry {
  std::string name;
  InflationRule rule;
  /// Optional constant similarity that block-diagonalises B(k).
  std::optional<Eigen::MatrixXcd> similarity;
  /// Index set of the block of U B U^{-1} that carries the growth; the other
  /// blocks are scalar polynomials with vanishing Mahler measure.
  std::vector<std::size_t> reduced_block;
  /// Binary constant-size block rule (q, r, s0, s1 decomposition applies).
  bool binary_block = false;
  std::string notes;
};

/// fibonacci, abcd, block-fig1, frank-robinson, staggered(M,N,[a1,...]).
CatalogueEntry builtin(const std::string& name);
std::vector<std::string> builtin_names();

/// Column i of the M x N block is shifted up by a_i (a_0 = 0). Irrational
/// shifts become generators of the frequency module; shifts that are
/// rationals with small denominators are folded into the coefficients.
CatalogueEntry staggered(int m, int n, const std::vector<double>& shifts);

/// Frank-Robinson edge length lambda = (1 + sqrt 13)/2.
double frank_robinson_lambda();

}  // namespace renorm
