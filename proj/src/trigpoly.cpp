#include "renorm/trigpoly.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <unordered_map>

#include <fmt/format.h>

namespace renorm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFloatDropTol = 1e-14;

bool parse_integer(const std::string& s, std::int64_t& out) {
  if (s.empty()) return false;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (*b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && ptr == e;
}

// reduce a phase to [0,1) before multiplying by 2 pi; keeps large exponents accurate
inline Complex unit_phase(double t) {
  t -= std::floor(t);
  return std::polar(1.0, kTwoPi * t);
}

// a * x mod 1 with the rounding error of the product recovered by fma
inline double frac_product(double a, double x) {
  const double p = a * x;
  const double e = std::fma(a, x, -p);
  return (p - std::round(p)) + e;
}

}  // namespace

// ---------------------------------------------------------------- basis

FrequencyBasis::FrequencyBasis(std::vector<Generator> generators, bool independent)
    : generators_(std::move(generators)), independent_(independent) {
  if (generators_.empty() || generators_.front().approx != 1.0)
    generators_.insert(generators_.begin(), Generator{"1", 1.0, {-1, 1}});
  if (generators_.size() > 64) throw Error("FrequencyBasis: too many generators");
  validate();
}

std::shared_ptr<const FrequencyBasis> FrequencyBasis::trivial() {
  static const auto basis = std::make_shared<const FrequencyBasis>(std::vector<Generator>{});
  return basis;
}

std::shared_ptr<const FrequencyBasis> FrequencyBasis::float_mode() {
  static const auto basis = [] {
    auto b = std::make_shared<FrequencyBasis>(std::vector<Generator>{});
    b->exact_ = false;
    return std::shared_ptr<const FrequencyBasis>(b);
  }();
  return basis;
}

void FrequencyBasis::add_multiplier(const std::string& name, const RationalMatrix& action) {
  const std::size_t m = size();
  if (action.rows() != m || action.cols() != m)
    throw Error(fmt::format("multiplier '{}': expected a {}x{} matrix", name, m, m));
  Multiplier mult{name, action, 0.0};
  for (std::size_t r = 0; r < m; ++r) mult.value += to_double(action(r, 0)) * value(r);
  auto it = std::find_if(multipliers_.begin(), multipliers_.end(),
                         [&](const Multiplier& x) { return x.name == name; });
  if (it != multipliers_.end())
    *it = mult;
  else
    multipliers_.push_back(mult);
  validate();
}

bool FrequencyBasis::has_multiplier(const std::string& name) const {
  std::int64_t n = 0;
  if (parse_integer(name, n)) return true;
  return std::any_of(multipliers_.begin(), multipliers_.end(),
                     [&](const Multiplier& x) { return x.name == name; });
}

Multiplier FrequencyBasis::multiplier(const std::string& name) const {
  for (const auto& x : multipliers_)
    if (x.name == name) return x;
  std::int64_t n = 0;
  if (parse_integer(name, n))
    return Multiplier{name, RationalMatrix::scalar(size(), Rational(n)), static_cast<double>(n)};
  throw Error(fmt::format("basis not closed under Q: scaling factor '{}' is not registered", name));
}

void FrequencyBasis::validate() const {
  for (std::size_t r = 0; r < generators_.size(); ++r) {
    const auto& g = generators_[r];
    if (!std::isfinite(g.approx) || g.approx == 0.0)
      throw Error(fmt::format("generator {} must be finite and nonzero", r));
    if (!g.minpoly.empty()) {
      double v = 0.0, scale = 0.0, p = 1.0;
      for (auto c : g.minpoly) {
        v += static_cast<double>(c) * p;
        scale += std::abs(static_cast<double>(c) * p);
        p *= g.approx;
      }
      if (std::abs(v) > 1e-9 * std::max(1.0, scale))
        throw Error(fmt::format("generator {} does not satisfy its minimal polynomial", r));
    }
  }
  if (generators_.front().approx != 1.0) throw Error("generator 1 must equal 1");

  std::mt19937_64 rng(0x5eed);
  std::uniform_int_distribution<int> coin(-5, 5);
  const std::size_t m = size();
  for (const auto& mult : multipliers_) {
    for (int trial = 0; trial < 32; ++trial) {
      std::vector<Rational> c(m);
      for (auto& x : c) x = coin(rng);
      const auto ac = mult.action.apply(c);
      double lhs = 0.0, rhs = 0.0;
      for (std::size_t r = 0; r < m; ++r) {
        lhs += to_double(c[r]) * value(r);
        rhs += to_double(ac[r]) * value(r);
      }
      lhs *= mult.value;
      if (std::abs(lhs - rhs) > 1e-12 * std::max(1.0, std::abs(lhs)))
        throw Error(fmt::format("multiplier '{}' is not an exact module action (residual {:.3g})",
                                mult.name, std::abs(lhs - rhs)));
    }
  }
}

bool FrequencyBasis::same_as(const FrequencyBasis& other) const {
  if (this == &other) return true;
  if (exact_ != other.exact_ || size() != other.size()) return false;
  for (std::size_t r = 0; r < size(); ++r)
    if (generators_[r].approx != other.generators_[r].approx) return false;
  return true;
}

void require_same_basis(const BasisPtr& a, const BasisPtr& b) {
  if (a == b) return;
  if (!a || !b || !a->same_as(*b)) throw Error("frequency bases do not match");
}

// ---------------------------------------------------------------- exponents

ExponentVector::ExponentVector(std::size_t dim, std::size_t gens)
    : dim_(static_cast<std::uint16_t>(dim)),
      gens_(static_cast<std::uint16_t>(gens)),
      c_(dim * gens, Rational(0)) {}

ExponentVector::ExponentVector(std::size_t dim, std::size_t gens, std::vector<Rational> coeffs)
    : dim_(static_cast<std::uint16_t>(dim)), gens_(static_cast<std::uint16_t>(gens)) {
  if (coeffs.size() != dim * gens) throw Error("ExponentVector: wrong number of coefficients");
  c_.assign(coeffs.begin(), coeffs.end());
}

ExponentVector ExponentVector::integral(std::vector<std::int64_t> per_coordinate, std::size_t gens) {
  ExponentVector e(per_coordinate.size(), gens);
  for (std::size_t j = 0; j < per_coordinate.size(); ++j) e(j, 0) = per_coordinate[j];
  return e;
}

bool ExponentVector::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Rational& r) { return r == 0; });
}

bool ExponentVector::is_integral() const {
  return std::all_of(c_.begin(), c_.end(), [](const Rational& r) { return r.denominator() == 1; });
}

std::vector<double> ExponentVector::real_value(const FrequencyBasis& basis) const {
  if (basis.size() != gens_) throw Error("ExponentVector: basis size mismatch");
  std::vector<double> out(dim_, 0.0);
  for (std::size_t j = 0; j < dim_; ++j)
    for (std::size_t r = 0; r < gens_; ++r)
      if ((*this)(j, r) != 0) out[j] += to_double((*this)(j, r)) * basis.value(r);
  return out;
}

double ExponentVector::norm(const FrequencyBasis& basis) const {
  double s = 0.0;
  for (double x : real_value(basis)) s += x * x;
  return std::sqrt(s);
}

ExponentVector& ExponentVector::operator+=(const ExponentVector& rhs) {
  if (dim_ != rhs.dim_ || gens_ != rhs.gens_) throw Error("ExponentVector: shape mismatch");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += rhs.c_[i];
  return *this;
}

ExponentVector& ExponentVector::operator-=(const ExponentVector& rhs) {
  if (dim_ != rhs.dim_ || gens_ != rhs.gens_) throw Error("ExponentVector: shape mismatch");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= rhs.c_[i];
  return *this;
}

ExponentVector ExponentVector::operator-() const {
  ExponentVector out = *this;
  for (auto& x : out.c_) x = -x;
  return out;
}

bool operator<(const ExponentVector& a, const ExponentVector& b) {
  if (a.dim_ != b.dim_) return a.dim_ < b.dim_;
  if (a.gens_ != b.gens_) return a.gens_ < b.gens_;
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
  return false;
}

std::size_t ExponentVector::hash() const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ (static_cast<std::uint64_t>(dim_) << 16 | gens_);
  for (const auto& r : c_) {
    std::uint64_t x = static_cast<std::uint64_t>(r.numerator()) * 0xbf58476d1ce4e5b9ULL ^
                      static_cast<std::uint64_t>(r.denominator());
    h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

Rational snap_to_grid(double x) {
  constexpr std::int64_t den = 1LL << 30;
  return Rational(std::llround(x * static_cast<double>(den)), den);
}

// ---------------------------------------------------------------- expansion

Expansion Expansion::diagonal(BasisPtr basis, const std::vector<std::string>& factors) {
  if (!basis) basis = FrequencyBasis::trivial();
  if (factors.empty()) throw Error("Expansion: no factors");
  Expansion q;
  q.dim_ = factors.size();
  q.basis_ = basis;
  q.factors_ = factors;
  q.real_ = Eigen::MatrixXd::Zero(q.dim_, q.dim_);
  std::vector<RationalMatrix> blocks;
  for (std::size_t j = 0; j < factors.size(); ++j) {
    Multiplier mult = basis->multiplier(factors[j]);
    q.real_(j, j) = mult.value;
    blocks.push_back(mult.action);
  }
  q.action_ = block_diagonal(blocks);
  q.inverse_action_ = q.action_.inverse();
  return q;
}

Expansion Expansion::matrix(BasisPtr basis, const RationalMatrix& qm) {
  if (!basis) basis = FrequencyBasis::trivial();
  if (qm.rows() != qm.cols() || qm.rows() == 0) throw Error("Expansion: matrix must be square");
  Expansion q;
  q.dim_ = qm.rows();
  q.basis_ = basis;
  const std::size_t m = basis->size();
  q.real_ = Eigen::MatrixXd(q.dim_, q.dim_);
  q.action_ = RationalMatrix(q.dim_ * m, q.dim_ * m);
  for (std::size_t i = 0; i < q.dim_; ++i)
    for (std::size_t j = 0; j < q.dim_; ++j) {
      q.real_(i, j) = to_double(qm(i, j));
      for (std::size_t r = 0; r < m; ++r) q.action_(i * m + r, j * m + r) = qm(i, j);
    }
  q.inverse_action_ = q.action_.inverse();
  return q;
}

ExponentVector Expansion::apply(const ExponentVector& a) const {
  if (a.dim() != dim_) throw Error("Expansion: dimension mismatch");
  if (!basis_->exact()) {
    const auto v = a.real_value(*basis_);
    ExponentVector out(dim_, 1);
    for (std::size_t i = 0; i < dim_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < dim_; ++j) s += real_(i, j) * v[j];
      out(i, 0) = snap_to_grid(s);
    }
    return out;
  }
  std::vector<Rational> flat(a.coeffs().begin(), a.coeffs().end());
  return ExponentVector(a.dim(), a.gens(), action_.apply(flat));
}

ExponentVector Expansion::apply_inverse(const ExponentVector& a) const {
  if (a.dim() != dim_) throw Error("Expansion: dimension mismatch");
  if (!basis_->exact()) {
    const auto v = a.real_value(*basis_);
    Eigen::VectorXd x = real_.lu().solve(Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()));
    ExponentVector out(dim_, 1);
    for (std::size_t i = 0; i < dim_; ++i) out(i, 0) = snap_to_grid(x(i));
    return out;
  }
  std::vector<Rational> flat(a.coeffs().begin(), a.coeffs().end());
  return ExponentVector(a.dim(), a.gens(), inverse_action_.apply(flat));
}

std::vector<double> Expansion::apply_transpose(std::span<const double> k) const {
  if (k.size() != dim_) throw Error("Expansion: dimension mismatch");
  std::vector<double> out(dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out[i] += real_(j, i) * k[j];
  return out;
}

double Expansion::abs_det() const { return std::abs(real_.determinant()); }

double Expansion::min_stretch() const {
  Eigen::EigenSolver<Eigen::MatrixXd> es(real_, false);
  return es.eigenvalues().cwiseAbs().minCoeff();
}

std::optional<Eigen::MatrixXi> Expansion::torus_map() const {
  if (!basis_->exact() || !action_.is_integer()) return std::nullopt;
  const std::size_t n = action_.rows();
  Eigen::MatrixXi e(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) e(i, j) = static_cast<int>(action_(j, i).numerator());
  return e;
}

bool Expansion::is_integer_diagonal() const {
  if (!action_.is_integer()) return false;
  for (std::size_t i = 0; i < action_.rows(); ++i)
    for (std::size_t j = 0; j < action_.cols(); ++j)
      if (i != j && action_(i, j) != 0) return false;
  // the same integer must act on every generator of a coordinate
  const std::size_t m = basis_->size();
  for (std::size_t j = 0; j < dim_; ++j)
    for (std::size_t r = 1; r < m; ++r)
      if (action_(j * m + r, j * m + r) != action_(j * m, j * m)) return false;
  return true;
}

// ---------------------------------------------------------------- polynomials

GenTrigPoly::GenTrigPoly(std::size_t dim, BasisPtr basis)
    : dim_(dim), basis_(basis ? std::move(basis) : FrequencyBasis::trivial()) {
  if (dim == 0) throw Error("GenTrigPoly: dimension must be positive");
}

GenTrigPoly GenTrigPoly::constant(std::size_t dim, BasisPtr basis, Complex c) {
  GenTrigPoly p(dim, std::move(basis));
  if (c != Complex(0.0)) {
    p.terms_.push_back({ExponentVector(dim, p.basis_->size()), c});
    p.rebuild_cache();
  }
  return p;
}

GenTrigPoly GenTrigPoly::monomial(const ExponentVector& e, BasisPtr basis, Complex c) {
  GenTrigPoly p(e.dim(), std::move(basis));
  if (e.gens() != p.basis_->size()) throw Error("GenTrigPoly: exponent does not match basis");
  if (c != Complex(0.0)) {
    p.terms_.push_back({e, c});
    p.rebuild_cache();
  }
  return p;
}

GenTrigPoly GenTrigPoly::from_terms(std::size_t dim, BasisPtr basis, std::vector<Term> terms) {
  GenTrigPoly p(dim, std::move(basis));
  const std::size_t m = p.basis_->size();
  for (const auto& t : terms)
    if (t.exponent.dim() != dim || t.exponent.gens() != m)
      throw Error("GenTrigPoly: exponent shape does not match dimension/basis");
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.exponent < b.exponent; });
  const double drop = p.basis_->exact() ? 0.0 : kFloatDropTol;
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().exponent == t.exponent)
      p.terms_.back().coeff += t.coeff;
    else
      p.terms_.push_back(std::move(t));
  }
  std::erase_if(p.terms_, [drop](const Term& t) { return std::abs(t.coeff) <= drop; });
  if (p.terms_.size() > kSymbolicTermCap) throw Error("symbolic term cap exceeded");
  p.rebuild_cache();
  return p;
}

void GenTrigPoly::rebuild_cache() {
  const std::size_t m = basis_->size();
  real_.assign(terms_.size() * dim_, 0.0);
  flat_.assign(terms_.size() * dim_ * m, 0.0);
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    const auto& e = terms_[t].exponent;
    for (std::size_t j = 0; j < dim_; ++j)
      for (std::size_t r = 0; r < m; ++r) {
        const double c = to_double(e(j, r));
        flat_[(t * dim_ + j) * m + r] = c;
        real_[t * dim_ + j] += c * basis_->value(r);
      }
  }
}

Complex GenTrigPoly::evaluate(std::span<const double> k) const {
  if (k.size() != dim_) throw Error(fmt::format("evaluate: expected {} coordinates, got {}", dim_, k.size()));
  Complex s = 0.0;
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    double ph = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) ph += frac_product(real_[t * dim_ + j], k[j]);
    s += terms_[t].coeff * unit_phase(ph);
  }
  return s;
}

Complex GenTrigPoly::evaluate_lifted(std::span<const double> u) const {
  const std::size_t n = dim_ * basis_->size();
  if (u.size() != n) throw Error("evaluate_lifted: wrong number of lifted coordinates");
  Complex s = 0.0;
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    double ph = 0.0;
    for (std::size_t v = 0; v < n; ++v) ph += frac_product(flat_[t * n + v], u[v]);
    s += terms_[t].coeff * unit_phase(ph);
  }
  return s;
}

Complex GenTrigPoly::coefficient(const ExponentVector& e) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                             [](const Term& t, const ExponentVector& x) { return t.exponent < x; });
  if (it != terms_.end() && it->exponent == e) return it->coeff;
  return 0.0;
}

Complex GenTrigPoly::constant_term() const {
  return coefficient(ExponentVector(dim_, basis_->size()));
}

double GenTrigPoly::l1_norm() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coeff);
  return s;
}

double GenTrigPoly::l2_norm_squared() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::norm(t.coeff);
  return s;
}

bool GenTrigPoly::is_periodic() const {
  for (const auto& t : terms_)
    for (std::size_t j = 0; j < dim_; ++j) {
      if (t.exponent(j, 0).denominator() != 1) return false;
      for (std::size_t r = 1; r < basis_->size(); ++r)
        if (t.exponent(j, r) != 0) return false;
    }
  return basis_->exact();
}

GenTrigPoly& GenTrigPoly::operator+=(const GenTrigPoly& rhs) {
  if (rhs.dim_ != dim_) throw Error("GenTrigPoly: dimension mismatch");
  require_same_basis(basis_, rhs.basis_);
  std::vector<Term> merged;
  merged.reserve(terms_.size() + rhs.terms_.size());
  std::size_t i = 0, j = 0;
  const double drop = basis_->exact() ? 0.0 : kFloatDropTol;
  auto push = [&](Term t) {
    if (std::abs(t.coeff) > drop) merged.push_back(std::move(t));
  };
  while (i < terms_.size() || j < rhs.terms_.size()) {
    if (j == rhs.terms_.size() || (i < terms_.size() && terms_[i].exponent < rhs.terms_[j].exponent)) {
      push(terms_[i++]);
    } else if (i == terms_.size() || rhs.terms_[j].exponent < terms_[i].exponent) {
      push(rhs.terms_[j++]);
    } else {
      push({terms_[i].exponent, terms_[i].coeff + rhs.terms_[j].coeff});
      ++i;
      ++j;
    }
  }
  terms_ = std::move(merged);
  rebuild_cache();
  return *this;
}

GenTrigPoly GenTrigPoly::operator-() const {
  GenTrigPoly out = *this;
  for (auto& t : out.terms_) t.coeff = -t.coeff;
  return out;
}

GenTrigPoly& GenTrigPoly::operator-=(const GenTrigPoly& rhs) { return *this += -rhs; }

GenTrigPoly& GenTrigPoly::operator*=(Complex s) {
  if (s == Complex(0.0)) {
    terms_.clear();
  } else {
    for (auto& t : terms_) t.coeff *= s;
  }
  rebuild_cache();
  return *this;
}

namespace {

// both factors univariate over the trivial basis with integer exponents
bool dense_1d(const GenTrigPoly& a, const GenTrigPoly& b) {
  if (a.dim() != 1 || a.basis()->size() != 1 || !a.basis()->exact()) return false;
  for (const auto* p : {&a, &b})
    for (const auto& t : p->terms())
      if (t.exponent[0].denominator() != 1) return false;
  return true;
}

GenTrigPoly dense_product(const GenTrigPoly& a, const GenTrigPoly& b) {
  auto lo = [](const GenTrigPoly& p) { return p.terms().front().exponent[0].numerator(); };
  auto hi = [](const GenTrigPoly& p) { return p.terms().back().exponent[0].numerator(); };
  const std::int64_t la = lo(a), lb = lo(b);
  const std::size_t na = static_cast<std::size_t>(hi(a) - la + 1);
  const std::size_t nb = static_cast<std::size_t>(hi(b) - lb + 1);
  std::vector<Complex> va(na), vb(nb), out(na + nb - 1);
  for (const auto& t : a.terms()) va[t.exponent[0].numerator() - la] = t.coeff;
  for (const auto& t : b.terms()) vb[t.exponent[0].numerator() - lb] = t.coeff;
  for (std::size_t i = 0; i < na; ++i) {
    if (va[i] == Complex(0.0)) continue;
    for (std::size_t j = 0; j < nb; ++j) out[i + j] += va[i] * vb[j];
  }
  std::vector<Term> terms;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i] != Complex(0.0))
      terms.push_back({ExponentVector::integral({la + lb + static_cast<std::int64_t>(i)}), out[i]});
  return GenTrigPoly::from_terms(1, a.basis(), std::move(terms));
}

}  // namespace

GenTrigPoly operator*(const GenTrigPoly& a, const GenTrigPoly& b) {
  if (a.dim_ != b.dim_) throw Error("GenTrigPoly: dimension mismatch");
  require_same_basis(a.basis_, b.basis_);
  if (a.is_zero() || b.is_zero()) return GenTrigPoly(a.dim_, a.basis_);
  if (dense_1d(a, b)) {
    const auto span_a = a.terms_.back().exponent[0] - a.terms_.front().exponent[0];
    const auto span_b = b.terms_.back().exponent[0] - b.terms_.front().exponent[0];
    if (span_a.numerator() + span_b.numerator() < 1LL << 26) return dense_product(a, b);
  }
  std::unordered_map<ExponentVector, Complex, ExponentHash> acc;
  acc.reserve(std::min<std::size_t>(a.size() * b.size(), kSymbolicTermCap));
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) {
      acc[s.exponent + t.exponent] += s.coeff * t.coeff;
      if (acc.size() > kSymbolicTermCap) throw Error("symbolic term cap exceeded");
    }
  std::vector<Term> terms;
  terms.reserve(acc.size());
  for (auto& [e, c] : acc) terms.push_back({e, c});
  return GenTrigPoly::from_terms(a.dim_, a.basis_, std::move(terms));
}

GenTrigPoly GenTrigPoly::cleaned(double tol) const {
  GenTrigPoly out = *this;
  std::erase_if(out.terms_, [tol](const Term& t) { return std::abs(t.coeff) <= tol; });
  out.rebuild_cache();
  return out;
}

bool GenTrigPoly::equals(const GenTrigPoly& other, double tol) const {
  if (dim_ != other.dim_) return false;
  if (!basis_->same_as(*other.basis_)) return false;
  const GenTrigPoly diff = *this - other;
  for (const auto& t : diff.terms_)
    if (std::abs(t.coeff) > tol) return false;
  return true;
}

std::string GenTrigPoly::to_string() const {
  if (terms_.empty()) return "0";
  auto var = [this](std::size_t j) -> std::string {
    if (dim_ == 1) return "z";
    if (dim_ == 2) return j == 0 ? "x" : "y";
    return fmt::format("z{}", j + 1);
  };
  auto coeff_str = [](Complex c) {
    if (c.imag() == 0.0) return fmt::format("{:g}", c.real());
    return fmt::format("({:g}{:+g}i)", c.real(), c.imag());
  };
  const std::size_t m = basis_->size();
  std::string out;
  for (const auto& t : terms_) {
    std::string mono;
    for (std::size_t j = 0; j < dim_; ++j) {
      std::string ex;
      for (std::size_t r = 0; r < m; ++r) {
        const Rational& c = t.exponent(j, r);
        if (c == 0) continue;
        std::string piece = r == 0 ? renorm::to_string(c)
                                   : (c == 1 ? "" : renorm::to_string(c) + "*") + basis_->generator(r).name;
        if (!ex.empty() && piece.front() != '-') ex += "+";
        ex += piece;
      }
      if (ex.empty()) continue;
      if (!mono.empty()) mono += "*";
      mono += ex == "1" ? var(j) : var(j) + "^(" + ex + ")";
    }
    std::string cs = coeff_str(t.coeff);
    std::string piece;
    if (mono.empty())
      piece = cs;
    else if (t.coeff == Complex(1.0))
      piece = mono;
    else if (t.coeff == Complex(-1.0))
      piece = "-" + mono;
    else
      piece = cs + "*" + mono;
    if (!out.empty() && piece.front() != '-') out += " + ";
    else if (!out.empty()) out += " ";
    out += piece;
  }
  return out;
}

// ---------------------------------------------------------------- free functions

GenTrigPoly rescale_argument(const GenTrigPoly& p, const Expansion& q) {
  if (p.dim() != q.dim()) throw Error("rescale_argument: dimension mismatch");
  require_same_basis(p.basis(), q.basis());
  std::vector<Term> terms;
  terms.reserve(p.size());
  for (const auto& t : p.terms()) terms.push_back({q.apply(t.exponent), t.coeff});
  return GenTrigPoly::from_terms(p.dim(), p.basis(), std::move(terms));
}

GenTrigPoly conjugate_reflect(const GenTrigPoly& p) {
  std::vector<Term> terms;
  terms.reserve(p.size());
  for (const auto& t : p.terms()) terms.push_back({-t.exponent, std::conj(t.coeff)});
  return GenTrigPoly::from_terms(p.dim(), p.basis(), std::move(terms));
}

GenTrigPoly modulus_squared(const GenTrigPoly& p) { return p * conjugate_reflect(p); }

TorusLift torus_lift(const GenTrigPoly& p) {
  TorusLift lift;
  lift.dim = p.dim();
  lift.gens = p.basis()->size();
  const std::size_t n = lift.dim * lift.gens;
  lift.scale.assign(n, 1);
  for (const auto& t : p.terms())
    for (std::size_t v = 0; v < n; ++v) lift.scale[v] = std::lcm(lift.scale[v], t.exponent[v].denominator());
  std::vector<Term> terms;
  terms.reserve(p.size());
  for (const auto& t : p.terms()) {
    ExponentVector e(n, 1);
    for (std::size_t v = 0; v < n; ++v) e[v] = t.exponent[v] * lift.scale[v];
    terms.push_back({e, t.coeff});
  }
  lift.poly = GenTrigPoly::from_terms(n, FrequencyBasis::trivial(), std::move(terms));
  return lift;
}

std::vector<double> TorusLift::lift_point(std::span<const double> k, const FrequencyBasis& basis) const {
  if (k.size() != dim || basis.size() != gens) throw Error("lift_point: shape mismatch");
  std::vector<double> u(dim * gens);
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t r = 0; r < gens; ++r)
      u[j * gens + r] = basis.value(r) * k[j] / static_cast<double>(scale[j * gens + r]);
  return u;
}

}  // namespace renorm
