#pragma once

// Finite weighted Dirac combs. Positions are exponent vectors over a frequency
// basis, so sums of positions are exact; the float basis gives the tolerant
// fallback for ad-hoc real positions.

#include <complex>
#include <map>
#include <string>

#include "json.hpp"
#include "renorm/trigpoly.hpp"

namespace renorm {

namespace detail {
inline bool negligible(const Complex& w, bool exact) { return exact ? w == Complex(0.0) : std::abs(w) < 1e-14; }
inline bool negligible(const Rational& w, bool) { return w == 0; }
inline Complex conj_weight(const Complex& w) { return std::conj(w); }
inline Rational conj_weight(const Rational& w) { return w; }
inline Complex as_complex(const Complex& w) { return w; }
inline Complex as_complex(const Rational& w) { return to_double(w); }
inline double magnitude(const Complex& w) { return std::abs(w); }
inline double magnitude(const Rational& w) { return std::abs(to_double(w)); }
}  // namespace detail

template <class W>
class BasicDiracComb {
 public:
  using Atoms = std::map<ExponentVector, W>;

  BasicDiracComb() = default;
  BasicDiracComb(std::size_t dim, BasisPtr basis)
      : dim_(dim), basis_(basis ? std::move(basis) : FrequencyBasis::trivial()) {}

  static BasicDiracComb delta(const ExponentVector& x, BasisPtr basis, W w = W(1)) {
    BasicDiracComb c(x.dim(), std::move(basis));
    c.add(x, w);
    return c;
  }

  /// Accumulates weight w at x.
  void add(const ExponentVector& x, const W& w) {
    if (x.dim() != dim_ || x.gens() != basis_->size()) throw Error("DiracComb: point shape mismatch");
    auto [it, fresh] = atoms_.try_emplace(x, w);
    if (!fresh) it->second += w;
    if (detail::negligible(it->second, basis_->exact())) atoms_.erase(it);
  }

  std::size_t dim() const { return dim_; }
  const BasisPtr& basis() const { return basis_; }
  const Atoms& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  W weight(const ExponentVector& x) const {
    auto it = atoms_.find(x);
    return it == atoms_.end() ? W(0) : it->second;
  }

  double total_variation() const {
    double s = 0.0;
    for (const auto& [x, w] : atoms_) s += detail::magnitude(w);
    return s;
  }

  bool operator==(const BasicDiracComb& o) const { return dim_ == o.dim_ && atoms_ == o.atoms_; }

 private:
  std::size_t dim_ = 0;
  BasisPtr basis_;
  Atoms atoms_;
};

using DiracComb = BasicDiracComb<Complex>;
using RationalComb = BasicDiracComb<Rational>;

template <class W>
BasicDiracComb<W> convolve(const BasicDiracComb<W>& a, const BasicDiracComb<W>& b) {
  if (a.dim() != b.dim()) throw Error("convolve: dimension mismatch");
  require_same_basis(a.basis(), b.basis());
  BasicDiracComb<W> out(a.dim(), a.basis());
  for (const auto& [x, v] : a.atoms())
    for (const auto& [y, w] : b.atoms()) out.add(x + y, v * w);
  return out;
}

template <class W>
BasicDiracComb<W> flip(const BasicDiracComb<W>& a) {
  BasicDiracComb<W> out(a.dim(), a.basis());
  for (const auto& [x, w] : a.atoms()) out.add(-x, detail::conj_weight(w));
  return out;
}

template <class W>
BasicDiracComb<W> scaled(const BasicDiracComb<W>& a, const W& s) {
  BasicDiracComb<W> out(a.dim(), a.basis());
  for (const auto& [x, w] : a.atoms()) out.add(x, w * s);
  return out;
}

template <class W>
BasicDiracComb<W> operator+(const BasicDiracComb<W>& a, const BasicDiracComb<W>& b) {
  require_same_basis(a.basis(), b.basis());
  BasicDiracComb<W> out = a;
  for (const auto& [x, w] : b.atoms()) out.add(x, w);
  return out;
}

/// Pushforward under the linear map f: the atom at x moves to f(x).
template <class W>
BasicDiracComb<W> pushforward(const Expansion& f, const BasicDiracComb<W>& a) {
  if (f.dim() != a.dim()) throw Error("pushforward: dimension mismatch");
  require_same_basis(f.basis(), a.basis());
  BasicDiracComb<W> out(a.dim(), a.basis());
  for (const auto& [x, w] : a.atoms()) out.add(f.apply(x), w);
  return out;
}

/// Pushforward under an integer/rational matrix acting on positions.
template <class W>
BasicDiracComb<W> pushforward(const RationalMatrix& f, const BasicDiracComb<W>& a) {
  if (f.rows() != f.cols() || f.determinant() == 0) throw Error("pushforward: singular map");
  return pushforward(Expansion::matrix(a.basis(), f), a);
}

inline DiracComb to_complex(const RationalComb& c) {
  DiracComb out(c.dim(), c.basis());
  for (const auto& [x, w] : c.atoms()) out.add(x, to_double(w));
  return out;
}

/// k -> sum_x w_x exp(-2 pi i <k|x>).
template <class W>
GenTrigPoly fourier_polynomial(const BasicDiracComb<W>& c) {
  std::vector<Term> terms;
  terms.reserve(c.size());
  for (const auto& [x, w] : c.atoms()) terms.push_back({-x, detail::as_complex(w)});
  return GenTrigPoly::from_terms(c.dim(), c.basis(), std::move(terms));
}

/// {"dimension": d, "atoms": [{"point": [...], "weight": [re, im]}]}; points
/// are written as per-coordinate lists of [num, den] coefficients.
nlohmann::json to_json(const DiracComb& c);
DiracComb comb_from_json(const nlohmann::json& j, BasisPtr basis = nullptr);

nlohmann::json exponent_to_json(const ExponentVector& e);
ExponentVector exponent_from_json(const nlohmann::json& j, std::size_t gens);

}  // namespace renorm
