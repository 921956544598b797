#pragma once

// Generalised trigonometric polynomials k -> sum_a c_a exp(2 pi i <a|k>) whose
// exponents a live in a finitely generated frequency module over Q. Exponent
// coefficients are exact rationals relative to a FrequencyBasis, so merging of
// equal exponents never depends on floating point comparisons.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/container/small_vector.hpp>

#include "renorm/rational.hpp"

namespace renorm {

/// Symbolic products refuse to grow beyond this many terms.
inline constexpr std::size_t kSymbolicTermCap = 1'000'000;

/// Merge resolution for the float-exponent fallback (2^-30, about 9.3e-10).
inline constexpr double kFloatExponentGrid = 1.0 / 1073741824.0;

struct Generator {
  std::string name;
  double approx = 1.0;
  /// Optional integer minimal polynomial, ascending coefficients.
  std::vector<std::int64_t> minpoly;
};

/// Exact action of a scaling factor alpha on coefficient vectors:
/// alpha * (c . g) = (action c) . g.
struct Multiplier {
  std::string name;
  RationalMatrix action;
  double value = 0.0;
};

class FrequencyBasis {
 public:
  /// Basis (1): ordinary periodic trigonometric polynomials.
  static std::shared_ptr<const FrequencyBasis> trivial();
  /// Basis (1) with exponents snapped to a 2^-30 grid; for ad-hoc real
  /// exponents that are not part of a declared module.
  static std::shared_ptr<const FrequencyBasis> float_mode();

  /// The first generator must be the rational unit; it is inserted when absent.
  explicit FrequencyBasis(std::vector<Generator> generators, bool independent = true);

  /// Registers the exact action of a scaling factor and checks it numerically.
  void add_multiplier(const std::string& name, const RationalMatrix& action);

  std::size_t size() const { return generators_.size(); }
  const Generator& generator(std::size_t r) const { return generators_.at(r); }
  const std::vector<Generator>& generators() const { return generators_; }
  double value(std::size_t r) const { return generators_.at(r).approx; }
  bool exact() const { return exact_; }
  bool independent() const { return independent_; }
  const std::vector<Multiplier>& multipliers() const { return multipliers_; }

  /// Looks up a registered factor. Integer literals ("2", "-3") are always
  /// available as scalar multiples of the identity.
  Multiplier multiplier(const std::string& name) const;
  bool has_multiplier(const std::string& name) const;

  /// Checks the generator invariants and every registered multiplier.
  void validate() const;

  bool same_as(const FrequencyBasis& other) const;

 private:
  std::vector<Generator> generators_;
  std::vector<Multiplier> multipliers_;
  bool independent_ = true;
  bool exact_ = true;
};

using BasisPtr = std::shared_ptr<const FrequencyBasis>;

/// Exponent of a single term: for each of d spatial coordinates a rational
/// coefficient vector over the m basis generators, stored as c[j*m + r].
class ExponentVector {
 public:
  using Storage = boost::container::small_vector<Rational, 4>;

  ExponentVector() = default;
  ExponentVector(std::size_t dim, std::size_t gens);
  ExponentVector(std::size_t dim, std::size_t gens, std::vector<Rational> coeffs);

  /// Exponent with integer coefficients on the unit generator only.
  static ExponentVector integral(std::vector<std::int64_t> per_coordinate, std::size_t gens = 1);

  std::size_t dim() const { return dim_; }
  std::size_t gens() const { return gens_; }
  std::size_t size() const { return c_.size(); }

  Rational& operator()(std::size_t j, std::size_t r) { return c_[j * gens_ + r]; }
  const Rational& operator()(std::size_t j, std::size_t r) const { return c_[j * gens_ + r]; }
  Rational& operator[](std::size_t i) { return c_[i]; }
  const Rational& operator[](std::size_t i) const { return c_[i]; }
  const Storage& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_integral() const;
  std::vector<double> real_value(const FrequencyBasis& basis) const;
  double norm(const FrequencyBasis& basis) const;

  ExponentVector& operator+=(const ExponentVector& rhs);
  ExponentVector& operator-=(const ExponentVector& rhs);
  friend ExponentVector operator+(ExponentVector a, const ExponentVector& b) { return a += b; }
  friend ExponentVector operator-(ExponentVector a, const ExponentVector& b) { return a -= b; }
  ExponentVector operator-() const;

  friend bool operator==(const ExponentVector& a, const ExponentVector& b) {
    return a.dim_ == b.dim_ && a.gens_ == b.gens_ && a.c_ == b.c_;
  }
  friend bool operator<(const ExponentVector& a, const ExponentVector& b);

  std::size_t hash() const;

 private:
  std::uint16_t dim_ = 0;
  std::uint16_t gens_ = 0;
  Storage c_;
};

struct ExponentHash {
  std::size_t operator()(const ExponentVector& e) const { return e.hash(); }
};

/// Snap a real number to the float-mode exponent grid.
Rational snap_to_grid(double x);

/// Expansion map Q together with its exact action on exponent coefficients.
/// Exponents transform as a -> Q a, which realises p(k) -> p(Q^T k).
class Expansion {
 public:
  /// Q = diag(alpha_1, ..., alpha_d) with every alpha registered in the basis.
  static Expansion diagonal(BasisPtr basis, const std::vector<std::string>& factors);
  /// Q given as a rational matrix acting on each generator slice.
  static Expansion matrix(BasisPtr basis, const RationalMatrix& q);

  std::size_t dim() const { return dim_; }
  const BasisPtr& basis() const { return basis_; }
  const Eigen::MatrixXd& real_matrix() const { return real_; }
  const std::vector<std::string>& factor_names() const { return factors_; }
  /// Exact (d m) x (d m) action on flattened exponent coefficients.
  const RationalMatrix& action() const { return action_; }

  ExponentVector apply(const ExponentVector& a) const;
  ExponentVector apply_inverse(const ExponentVector& a) const;
  std::vector<double> apply_transpose(std::span<const double> k) const;

  double abs_det() const;
  /// Smallest modulus of an eigenvalue of Q.
  double min_stretch() const;
  /// Integer matrix of the induced endomorphism u -> E^T u of the lifted
  /// torus T^{d m}, when the action is integral.
  std::optional<Eigen::MatrixXi> torus_map() const;

  bool is_integer_diagonal() const;

 private:
  std::size_t dim_ = 0;
  BasisPtr basis_;
  Eigen::MatrixXd real_;
  RationalMatrix action_;
  RationalMatrix inverse_action_;
  std::vector<std::string> factors_;
};

struct Term {
  ExponentVector exponent;
  Complex coeff;
};

class GenTrigPoly {
 public:
  GenTrigPoly() = default;
  GenTrigPoly(std::size_t dim, BasisPtr basis);

  static GenTrigPoly constant(std::size_t dim, BasisPtr basis, Complex c);
  static GenTrigPoly monomial(const ExponentVector& e, BasisPtr basis, Complex c = 1.0);
  /// Canonicalises: merges equal exponents and drops zero coefficients.
  static GenTrigPoly from_terms(std::size_t dim, BasisPtr basis, std::vector<Term> terms);

  std::size_t dim() const { return dim_; }
  const BasisPtr& basis() const { return basis_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Complex evaluate(std::span<const double> k) const;
  Complex evaluate(std::initializer_list<double> k) const {
    return evaluate(std::span<const double>(k.begin(), k.size()));
  }
  /// Evaluates the torus lift at u in T^{d m}, u[j*m + r] standing for g_r k_j.
  Complex evaluate_lifted(std::span<const double> u) const;

  Complex coefficient(const ExponentVector& e) const;
  Complex constant_term() const;
  double l1_norm() const;
  /// Sum of squared coefficient moduli (Parseval mean of |p|^2).
  double l2_norm_squared() const;

  /// True when every exponent uses only the unit generator with integer
  /// coefficients, i.e. the polynomial is 1-periodic in every k_j.
  bool is_periodic() const;

  GenTrigPoly& operator+=(const GenTrigPoly& rhs);
  GenTrigPoly& operator-=(const GenTrigPoly& rhs);
  GenTrigPoly& operator*=(Complex s);
  friend GenTrigPoly operator+(GenTrigPoly a, const GenTrigPoly& b) { return a += b; }
  friend GenTrigPoly operator-(GenTrigPoly a, const GenTrigPoly& b) { return a -= b; }
  friend GenTrigPoly operator*(GenTrigPoly a, Complex s) { return a *= s; }
  friend GenTrigPoly operator*(Complex s, GenTrigPoly a) { return a *= s; }
  friend GenTrigPoly operator*(const GenTrigPoly& a, const GenTrigPoly& b);
  GenTrigPoly operator-() const;

  /// Drops coefficients with modulus below tol; used after numeric similarity
  /// transforms.
  GenTrigPoly cleaned(double tol) const;

  /// Structural equality with a coefficient tolerance.
  bool equals(const GenTrigPoly& other, double tol = 0.0) const;

  std::string to_string() const;

 private:
  void rebuild_cache();

  std::size_t dim_ = 0;
  BasisPtr basis_;
  std::vector<Term> terms_;
  std::vector<double> real_;    // real exponent values, dim_ per term
  std::vector<double> flat_;    // exponent coefficients as doubles, dim_*m per term
};

void require_same_basis(const BasisPtr& a, const BasisPtr& b);

/// q(k) = p(Q^T k), exponents transformed exactly.
GenTrigPoly rescale_argument(const GenTrigPoly& p, const Expansion& q);
/// Coefficients conjugated and exponents negated: conj(p(k)) for real k.
GenTrigPoly conjugate_reflect(const GenTrigPoly& p);
/// |p|^2 = p * conjugate_reflect(p).
GenTrigPoly modulus_squared(const GenTrigPoly& p);

/// Periodic polynomial in d*m lifted variables. Lifted variable v = j*m + r
/// stands for g_r * k_j / scale[v]; scale[v] clears the denominators of that
/// coordinate so the lift is 1-periodic in every variable.
struct TorusLift {
  GenTrigPoly poly;                 // trivial basis, dimension d*m, integer exponents
  std::vector<std::int64_t> scale;  // one per lifted variable
  std::size_t dim = 0;
  std::size_t gens = 0;

  /// Lifted coordinates corresponding to the physical point k.
  std::vector<double> lift_point(std::span<const double> k, const FrequencyBasis& basis) const;
};

TorusLift torus_lift(const GenTrigPoly& p);

}  // namespace renorm
