#pragma once

// Integer polynomials, characteristic/minimal polynomials and exact arithmetic
// in a simple number field Q(lambda). Used to realise 1D substitutions with
// natural (algebraic) interval lengths.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "renorm/rational.hpp"

namespace renorm {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Ascending coefficients, c[0] + c[1] x + ...
using IntPoly = std::vector<std::int64_t>;

/// Exact characteristic polynomial det(x I - M) (Faddeev-LeVerrier).
IntPoly characteristic_polynomial(const IntMatrix& m);

/// Monic integer factor of p that has `root` as a zero. Found by grouping
/// numerical roots and confirmed by exact division.
IntPoly minimal_polynomial(const IntPoly& p, double root);

double evaluate(const IntPoly& p, double x);

/// Elements of Q(lambda) stored as coefficient vectors on 1, lambda, ..., lambda^{d-1}.
class NumberField {
 public:
  using Element = std::vector<Rational>;

  NumberField(IntPoly minpoly, double approx);

  std::size_t degree() const { return minpoly_.size() - 1; }
  const IntPoly& minpoly() const { return minpoly_; }
  double generator_value() const { return approx_; }

  Element zero() const { return Element(degree(), Rational(0)); }
  Element one() const;
  Element generator() const;
  Element from_rational(const Rational& r) const;

  Element add(const Element& a, const Element& b) const;
  Element sub(const Element& a, const Element& b) const;
  Element mul(const Element& a, const Element& b) const;
  Element inverse(const Element& a) const;
  Element div(const Element& a, const Element& b) const { return mul(a, inverse(b)); }
  bool is_zero(const Element& a) const;
  double to_double(const Element& a) const;

  /// Multiplication-by-lambda matrix on coefficient vectors (companion matrix).
  RationalMatrix companion() const;

 private:
  Element reduce(std::vector<Rational> c) const;

  IntPoly minpoly_;
  double approx_;
};

/// Null vector of (A - lambda I) over Q(lambda) for an integer matrix A with
/// simple eigenvalue lambda.
std::vector<NumberField::Element> eigenvector(const NumberField& field, const IntMatrix& a);

}  // namespace renorm
