#include "renorm/fourier.hpp"

#include <bit>
#include <random>
#include <unordered_map>

#include <fmt/format.h>

namespace renorm {

FourierMatrix::FourierMatrix(std::size_t size, std::size_t dim, BasisPtr basis, Expansion q)
    : size_(size), dim_(dim), basis_(std::move(basis)), q_(std::move(q)) {
  e_.assign(size * size, GenTrigPoly(dim, basis_));
}

Eigen::MatrixXcd FourierMatrix::evaluate(std::span<const double> k) const {
  Eigen::MatrixXcd m(size_, size_);
  for (std::size_t i = 0; i < size_; ++i)
    for (std::size_t j = 0; j < size_; ++j) m(i, j) = (*this)(i, j).evaluate(k);
  return m;
}

FourierMatrix FourierMatrix::operator*(const FourierMatrix& rhs) const {
  if (size_ != rhs.size_ || dim_ != rhs.dim_) throw Error("FourierMatrix: shape mismatch");
  FourierMatrix out(size_, dim_, basis_, q_);
  for (std::size_t i = 0; i < size_; ++i)
    for (std::size_t j = 0; j < size_; ++j) {
      GenTrigPoly acc(dim_, basis_);
      for (std::size_t k = 0; k < size_; ++k) {
        if ((*this)(i, k).is_zero() || rhs(k, j).is_zero()) continue;
        acc += (*this)(i, k) * rhs(k, j);
        if (acc.size() > kSymbolicTermCap) throw Error("symbolic term cap exceeded");
      }
      out(i, j) = std::move(acc);
    }
  return out;
}

FourierMatrix FourierMatrix::rescaled() const {
  FourierMatrix out(size_, dim_, basis_, q_);
  for (std::size_t i = 0; i < e_.size(); ++i) out.e_[i] = rescale_argument(e_[i], q_);
  return out;
}

FourierMatrix FourierMatrix::block(const std::vector<std::size_t>& idx) const {
  FourierMatrix out(idx.size(), dim_, basis_, q_);
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) out(a, b) = (*this)(idx.at(a), idx.at(b));
  return out;
}

bool FourierMatrix::equals(const FourierMatrix& other, double tol) const {
  if (size_ != other.size_ || dim_ != other.dim_) return false;
  for (std::size_t i = 0; i < e_.size(); ++i)
    if (!e_[i].equals(other.e_[i], tol)) return false;
  return true;
}

std::size_t FourierMatrix::term_count() const {
  std::size_t n = 0;
  for (const auto& p : e_) n += p.size();
  return n;
}

std::string FourierMatrix::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < size_; ++i) {
    out += "[";
    for (std::size_t j = 0; j < size_; ++j) {
      if (j) out += ", ";
      out += (*this)(i, j).to_string();
    }
    out += "]\n";
  }
  return out;
}

FourierMatrix fourier_matrix(const InflationRule& rule) {
  rule.check_shape();
  const std::size_t l = rule.size();
  FourierMatrix b(l, rule.dim, rule.basis, rule.q);
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < l; ++j) {
      std::vector<Term> terms;
      for (const auto& x : rule.t[i][j]) terms.push_back({x, 1.0});
      b(i, j) = GenTrigPoly::from_terms(rule.dim, rule.basis, std::move(terms));
    }
  return b;
}

Eigen::MatrixXcd cocycle_evaluate(const FourierMatrix& b, std::span<const double> k, int n) {
  if (n < 1) throw Error("cocycle order must be at least 1");
  if (k.size() != b.dim()) throw Error("cocycle_evaluate: dimension mismatch");
  std::vector<double> kk(k.begin(), k.end());
  Eigen::MatrixXcd acc = b.evaluate(kk);
  for (int l = 1; l < n; ++l) {
    kk = b.expansion().apply_transpose(kk);
    acc = acc * b.evaluate(kk);
  }
  return acc;
}

FourierMatrix cocycle_symbolic(const FourierMatrix& b, int n) {
  if (n < 1) throw Error("cocycle order must be at least 1");
  FourierMatrix acc = b;
  FourierMatrix shifted = b;
  for (int l = 1; l < n; ++l) {
    shifted = shifted.rescaled();
    acc = acc * shifted;
  }
  return acc;
}

GenTrigPoly det_polynomial(const FourierMatrix& b) {
  const std::size_t l = b.size();
  if (l > 20) throw Error("det_polynomial: matrix too large for cofactor expansion");
  std::unordered_map<std::uint32_t, GenTrigPoly> memo;
  // det of rows [l - |S|, l) restricted to the column set S
  auto rec = [&](auto&& self, std::uint32_t cols) -> GenTrigPoly {
    if (cols == 0) return GenTrigPoly::constant(b.dim(), b.basis(), 1.0);
    if (auto it = memo.find(cols); it != memo.end()) return it->second;
    const std::size_t row = l - static_cast<std::size_t>(std::popcount(cols));
    GenTrigPoly acc(b.dim(), b.basis());
    int sign = 1;
    for (std::size_t j = 0; j < l; ++j) {
      if (!(cols >> j & 1u)) continue;
      if (!b(row, j).is_zero()) {
        GenTrigPoly minor = self(self, cols & ~(1u << j));
        if (!minor.is_zero()) {
          GenTrigPoly t = b(row, j) * minor;
          if (sign < 0)
            acc -= t;
          else
            acc += t;
        }
      }
      sign = -sign;
    }
    memo.emplace(cols, acc);
    return acc;
  };
  return rec(rec, (l == 32 ? 0u : (1u << l)) - 1u);
}

Complex det_numeric(const FourierMatrix& b, std::span<const double> k) {
  return b.evaluate(k).determinant();
}

FourierMatrix apply_similarity(const FourierMatrix& b, const Eigen::MatrixXcd& u) {
  const std::size_t l = b.size();
  if (static_cast<std::size_t>(u.rows()) != l || static_cast<std::size_t>(u.cols()) != l)
    throw Error("apply_similarity: U has the wrong size");
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(u);
  if (!lu.isInvertible()) throw Error("apply_similarity: U is singular");
  const Eigen::MatrixXcd ui = lu.inverse();
  double scale = 0.0;
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < l; ++j) scale = std::max(scale, b(i, j).l1_norm());
  const double tol = 1e-12 * std::max(1.0, scale) * u.cwiseAbs().maxCoeff() * ui.cwiseAbs().maxCoeff();

  FourierMatrix out(l, b.dim(), b.basis(), b.expansion());
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < l; ++j) {
      GenTrigPoly acc(b.dim(), b.basis());
      for (std::size_t a = 0; a < l; ++a)
        for (std::size_t c = 0; c < l; ++c) {
          const Complex w = u(i, a) * ui(c, j);
          if (std::abs(w) == 0.0 || b(a, c).is_zero()) continue;
          acc += b(a, c) * w;
        }
      out(i, j) = acc.cleaned(tol);
    }

  std::mt19937_64 rng(0xb10c);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 16; ++trial) {
    std::vector<double> k(b.dim());
    for (auto& x : k) x = unif(rng);
    const Eigen::MatrixXcd direct = u * b.evaluate(k) * ui;
    const double err = (direct - out.evaluate(k)).norm();
    if (err > 1e-9 * std::max(1.0, direct.norm()))
      throw Error(fmt::format("apply_similarity: result is not polynomial (residual {:.3g})", err));
  }
  return out;
}

GenTrigPoly frobenius_squared(const FourierMatrix& b) {
  GenTrigPoly acc(b.dim(), b.basis());
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!b(i, j).is_zero()) acc += modulus_squared(b(i, j));
  return acc;
}

BinaryBlockDecomposition binary_block_decomposition(const InflationRule& rule) {
  rule.check_shape();
  if (rule.size() != 2) throw Error("binary block decomposition needs a two-letter rule");
  if (!rule.q.is_integer_diagonal()) throw Error("binary block decomposition needs an integer diagonal expansion");
  const std::size_t d = rule.dim, m = rule.basis->size();
  std::vector<std::int64_t> n(d);
  std::int64_t cells = 1;
  for (std::size_t c = 0; c < d; ++c) {
    n[c] = rule.q.action()(c * m, c * m).numerator();
    if (n[c] < 1) throw Error("binary block decomposition needs positive block sizes");
    cells *= n[c];
  }
  for (const auto& tile : rule.tiles)
    if (!(tile.edges == ExponentVector::integral(std::vector<std::int64_t>(d, 1), m)))
      throw Error("binary block decomposition needs unit prototiles");

  // occupant[j][cell] = letter at that cell of column j
  auto cell_index = [&](const ExponentVector& x) -> std::int64_t {
    std::int64_t idx = 0;
    for (std::size_t c = d; c-- > 0;) {
      const Rational v = x(c, 0);
      for (std::size_t r = 1; r < m; ++r)
        if (x(c, r) != 0) return -1;
      if (v.denominator() != 1 || v.numerator() < 0 || v.numerator() >= n[c]) return -1;
      idx = idx * n[c] + v.numerator();
    }
    return idx;
  };
  std::vector<std::vector<int>> occ(2, std::vector<int>(static_cast<std::size_t>(cells), -1));
  std::vector<ExponentVector> where(static_cast<std::size_t>(cells));
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t i = 0; i < 2; ++i)
      for (const auto& x : rule.t[i][j]) {
        const auto idx = cell_index(x);
        if (idx < 0) throw Error("binary block decomposition: position outside the block grid");
        if (occ[j][idx] != -1) throw Error("binary block decomposition: cell occupied twice");
        occ[j][idx] = static_cast<int>(i);
        where[idx] = x;
      }
  for (std::size_t j = 0; j < 2; ++j)
    for (auto o : occ[j])
      if (o < 0) throw Error("binary block decomposition: rule is not constant-size (empty cell)");

  BinaryBlockDecomposition out;
  std::vector<Term> tp, tq, tr, ts0, ts1;
  for (std::size_t idx = 0; idx < static_cast<std::size_t>(cells); ++idx) {
    const Term t{where[idx], 1.0};
    tp.push_back(t);
    const int a = occ[0][idx], b = occ[1][idx];
    if (a == 0 && b == 1)
      tq.push_back(t);
    else if (a == 1 && b == 0)
      tr.push_back(t);
    else if (a == 0)
      ts0.push_back(t), ++out.coincident;
    else
      ts1.push_back(t), ++out.coincident;
  }
  auto mk = [&](std::vector<Term> ts) { return GenTrigPoly::from_terms(d, rule.basis, std::move(ts)); };
  out.p = mk(tp);
  out.q = mk(tq);
  out.r = mk(tr);
  out.s0 = mk(ts0);
  out.s1 = mk(ts1);
  if (!(out.q + out.r + out.s0 + out.s1).equals(out.p)) throw Error("binary block decomposition: identity failed");
  return out;
}

}  // namespace renorm
