#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "renorm/inflation.hpp"
#include "renorm/trigpoly.hpp"

namespace renorm {

/// L x L matrix of trigonometric polynomials together with the expansion
/// that drives its cocycle.
class FourierMatrix {
 public:
  FourierMatrix() = default;
  FourierMatrix(std::size_t size, std::size_t dim, BasisPtr basis, Expansion q);

  std::size_t size() const { return size_; }
  std::size_t dim() const { return dim_; }
  const BasisPtr& basis() const { return basis_; }
  const Expansion& expansion() const { return q_; }

  GenTrigPoly& operator()(std::size_t i, std::size_t j) { return e_[i * size_ + j]; }
  const GenTrigPoly& operator()(std::size_t i, std::size_t j) const { return e_[i * size_ + j]; }

  Eigen::MatrixXcd evaluate(std::span<const double> k) const;
  Eigen::MatrixXcd evaluate(std::initializer_list<double> k) const {
    return evaluate(std::span<const double>(k.begin(), k.size()));
  }

  FourierMatrix operator*(const FourierMatrix& rhs) const;
  /// Entrywise p(k) -> p(Q^T k).
  FourierMatrix rescaled() const;
  /// Principal sub-block on the given indices.
  FourierMatrix block(const std::vector<std::size_t>& idx) const;

  bool equals(const FourierMatrix& other, double tol = 0.0) const;
  std::size_t term_count() const;
  std::string to_string() const;

 private:
  std::size_t size_ = 0;
  std::size_t dim_ = 0;
  BasisPtr basis_;
  Expansion q_;
  std::vector<GenTrigPoly> e_;
};

/// B_ij(k) = sum over t in T_ij of exp(2 pi i <k|t>).
FourierMatrix fourier_matrix(const InflationRule& rule);

/// B(k) B(Q^T k) ... B((Q^T)^{n-1} k), numerically.
Eigen::MatrixXcd cocycle_evaluate(const FourierMatrix& b, std::span<const double> k, int n);

/// Symbolic cocycle; throws when the term cap would be exceeded.
FourierMatrix cocycle_symbolic(const FourierMatrix& b, int n);

/// Exact symbolic determinant by cofactor expansion with memoised minors.
GenTrigPoly det_polynomial(const FourierMatrix& b);
Complex det_numeric(const FourierMatrix& b, std::span<const double> k);

/// U B(k) U^{-1} entrywise, coefficients below 1e-12 (relative) dropped;
/// the result is checked numerically at random k.
FourierMatrix apply_similarity(const FourierMatrix& b, const Eigen::MatrixXcd& u);

/// sum_ij |B_ij|^2 as a trigonometric polynomial.
GenTrigPoly frobenius_squared(const FourierMatrix& b);

struct BinaryBlockDecomposition {
  GenTrigPoly p, q, r, s0, s1;
  int coincident = 0;
};

/// Splits a two-letter constant-size block rule into bijective (q, r) and
/// coincident (s0, s1) columns, B = [[q+s0, r+s0], [r+s1, q+s1]].
BinaryBlockDecomposition binary_block_decomposition(const InflationRule& rule);

}  // namespace renorm
