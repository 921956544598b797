#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace boost {
// C++20 reversed-operator rewriting makes boost's own mixed int/rational
// comparison call itself forever; an exact non-template overload wins instead.
inline bool operator==(const rational<std::int64_t>& a, int b) {
  return a.denominator() == 1 && a.numerator() == b;
}
}  // namespace boost

namespace renorm {

using Rational = boost::rational<std::int64_t>;
using Complex = std::complex<double>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline bool is_integer(const Rational& r) { return r.denominator() == 1; }

std::string to_string(const Rational& r);

/// Dense rational matrix, row-major. Used for the exact action of scaling
/// factors on exponent coefficient vectors.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

  static RationalMatrix identity(std::size_t n);
  static RationalMatrix scalar(std::size_t n, const Rational& s);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  RationalMatrix operator*(const RationalMatrix& rhs) const;
  std::vector<Rational> apply(const std::vector<Rational>& v) const;
  RationalMatrix transpose() const;

  /// Exact inverse by Gauss-Jordan elimination; throws on a singular matrix.
  RationalMatrix inverse() const;
  Rational determinant() const;

  bool is_integer() const;
  bool operator==(const RationalMatrix& rhs) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Block-diagonal matrix from square blocks.
RationalMatrix block_diagonal(const std::vector<RationalMatrix>& blocks);

}  // namespace renorm
