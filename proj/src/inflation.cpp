#include "renorm/inflation.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

namespace renorm {

// ---------------------------------------------------------------- symbolic rules

SubstitutionRule1D SubstitutionRule1D::from_words(const std::vector<std::string>& words) {
  SubstitutionRule1D r;
  for (const auto& w : words) {
    std::vector<int> img;
    for (char ch : w) {
      if (ch < 'a' || ch > 'z') throw Error(fmt::format("substitution word '{}': letters must be a-z", w));
      img.push_back(ch - 'a');
    }
    r.images.push_back(std::move(img));
  }
  r.validate();
  return r;
}

std::vector<std::string> SubstitutionRule1D::words() const {
  std::vector<std::string> out;
  for (const auto& img : images) {
    std::string w;
    for (int c : img) w.push_back(static_cast<char>('a' + c));
    out.push_back(w);
  }
  return out;
}

void SubstitutionRule1D::validate() const {
  if (images.empty()) throw Error("substitution: empty alphabet");
  for (std::size_t j = 0; j < images.size(); ++j) {
    if (images[j].empty()) throw Error(fmt::format("substitution: image of letter {} is empty", j));
    for (int c : images[j])
      if (c < 0 || static_cast<std::size_t>(c) >= images.size())
        throw Error(fmt::format("substitution: image of letter {} uses an unknown letter", j));
  }
}

SubstitutionRule1D compose(const SubstitutionRule1D& outer, const SubstitutionRule1D& inner) {
  if (outer.size() != inner.size()) throw Error("compose: alphabet sizes differ");
  SubstitutionRule1D r;
  for (const auto& img : inner.images) {
    std::vector<int> w;
    for (int c : img) w.insert(w.end(), outer.images[c].begin(), outer.images[c].end());
    r.images.push_back(std::move(w));
  }
  return r;
}

IntMatrix substitution_matrix(const SubstitutionRule1D& rule) {
  const auto n = static_cast<Eigen::Index>(rule.size());
  IntMatrix m = IntMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (int c : rule.images[j]) m(c, j) += 1;
  return m;
}

// ---------------------------------------------------------------- rules

double InflationRule::volume(std::size_t i) const {
  double v = 1.0;
  for (double e : tiles.at(i).edges.real_value(*basis)) v *= e;
  return v;
}

double InflationRule::max_displacement() const {
  double r = 0.0;
  for (const auto& row : t)
    for (const auto& col : row)
      for (const auto& x : col) r = std::max(r, x.norm(*basis));
  return r;
}

void InflationRule::check_shape() const {
  const std::size_t l = tiles.size();
  if (l == 0) throw Error("rule has no prototiles");
  if (!basis) throw Error("rule has no frequency basis");
  if (q.dim() != dim) throw Error("expansion dimension does not match the rule");
  if (t.size() != l) throw Error("displacement matrix has the wrong number of rows");
  for (const auto& row : t) {
    if (row.size() != l) throw Error("displacement matrix has the wrong number of columns");
    for (const auto& col : row)
      for (const auto& x : col)
        if (x.dim() != dim || x.gens() != basis->size()) throw Error("displacement point has the wrong shape");
  }
  for (const auto& tile : tiles)
    if (tile.edges.dim() != dim || tile.edges.gens() != basis->size())
      throw Error(fmt::format("prototile '{}' has edges of the wrong shape", tile.label));
}

IntMatrix substitution_matrix(const InflationRule& rule) {
  const auto n = static_cast<Eigen::Index>(rule.size());
  IntMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = static_cast<std::int64_t>(rule.t[i][j].size());
  return m;
}

bool is_primitive(const IntMatrix& m, std::string* why) {
  const auto n = m.rows();
  using B = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;
  B p = (m.array() > 0).cast<int>();
  B acc = p;
  const Eigen::Index bound = n * n - 2 * n + 2;
  for (Eigen::Index k = 1; k <= bound; ++k) {
    if ((acc.array() > 0).all()) return true;
    acc = ((acc * p).array() > 0).cast<int>();
  }
  if ((acc.array() > 0).all()) return true;
  if (why) {
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (acc(i, j) == 0) {
          *why = fmt::format("not primitive: type {} does not occur in the level-{} supertile of type {}", i, bound,
                             j);
          return false;
        }
  }
  return false;
}

PFData pf_data(const IntMatrix& m) {
  std::string why;
  if (!is_primitive(m, &why)) throw Error("substitution matrix is " + why);
  const Eigen::MatrixXd a = m.cast<double>();
  const auto n = a.rows();
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, true);
  PFData pf;
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < n; ++i)
    if (es.eigenvalues()(i).real() > es.eigenvalues()(best).real()) best = i;
  pf.lambda = es.eigenvalues()(best).real();
  for (Eigen::Index i = 0; i < n; ++i) pf.eigenvalues.push_back(es.eigenvalues()(i));
  std::sort(pf.eigenvalues.begin(), pf.eigenvalues.end(), [](Complex x, Complex y) {
    if (std::abs(x) != std::abs(y)) return std::abs(x) > std::abs(y);
    return x.real() != y.real() ? x.real() > y.real() : x.imag() > y.imag();
  });
  for (std::size_t i = 1; i < pf.eigenvalues.size(); ++i)
    if (std::abs(pf.eigenvalues[i]) > pf.lambda * (1 - 1e-12))
      throw Error("PF eigenvalue is not strictly dominant");

  // refine by inverse iteration; the eigensolver vectors are only ~1e-14 accurate
  auto refine = [&](const Eigen::MatrixXd& mat, Eigen::VectorXd v) {
    Eigen::MatrixXd shifted = mat - pf.lambda * Eigen::MatrixXd::Identity(n, n);
    auto lu = (shifted + 1e-13 * pf.lambda * Eigen::MatrixXd::Identity(n, n)).fullPivLu();
    for (int it = 0; it < 3; ++it) {
      v = lu.solve(v);
      v /= v.cwiseAbs().maxCoeff();
    }
    return v;
  };
  Eigen::VectorXd right = es.eigenvectors().col(best).real();
  right = refine(a, right);
  pf.frequencies = right / right.sum();
  Eigen::EigenSolver<Eigen::MatrixXd> et(a.transpose(), true);
  Eigen::Index bt = 0;
  for (Eigen::Index i = 1; i < n; ++i)
    if (et.eigenvalues()(i).real() > et.eigenvalues()(bt).real()) bt = i;
  Eigen::VectorXd left = refine(a.transpose(), et.eigenvectors().col(bt).real());
  left /= left.minCoeff();
  pf.lengths = left;
  if ((pf.frequencies.array() <= 0).any()) throw Error("PF eigenvector is not positive");
  pf.residual = (a * pf.frequencies - pf.lambda * pf.frequencies).norm();
  if (pf.residual > 1e-10) throw Error(fmt::format("PF eigen-residual too large: {:.3g}", pf.residual));
  return pf;
}

InflationRule realize_1d(const SubstitutionRule1D& rule, const std::string& name) {
  rule.validate();
  const IntMatrix m = substitution_matrix(rule);
  const PFData pf = pf_data(m);
  const IntPoly mp = minimal_polynomial(characteristic_polynomial(m), pf.lambda);
  NumberField field(mp, pf.lambda);
  const std::size_t deg = field.degree();

  auto lengths = eigenvector(field, m.transpose());
  std::size_t smallest = 0;
  for (std::size_t i = 1; i < lengths.size(); ++i)
    if (field.to_double(lengths[i]) < field.to_double(lengths[smallest])) smallest = i;
  const auto norm = lengths[smallest];
  for (auto& len : lengths) len = field.div(len, norm);

  InflationRule out;
  out.name = name;
  out.dim = 1;
  out.symbolic = rule;
  std::string factor;
  if (deg == 1) {
    out.basis = FrequencyBasis::trivial();
    factor = std::to_string(-mp[0]);
  } else {
    std::vector<Generator> gens;
    double p = 1.0;
    for (std::size_t r = 0; r < deg; ++r) {
      Generator g{r == 0 ? "1" : (r == 1 ? "lambda" : fmt::format("lambda^{}", r)), p, {}};
      if (r == 1) g.minpoly = mp;
      gens.push_back(g);
      p *= pf.lambda;
    }
    auto b = std::make_shared<FrequencyBasis>(gens);
    b->add_multiplier("lambda", field.companion());
    out.basis = b;
    factor = "lambda";
  }
  out.q = Expansion::diagonal(out.basis, {factor});

  auto to_exponent = [&](const NumberField::Element& e) { return ExponentVector(1, deg, e); };
  const std::size_t l = rule.size();
  for (std::size_t i = 0; i < l; ++i)
    out.tiles.push_back({std::string(1, static_cast<char>('a' + i)), to_exponent(lengths[i])});
  out.t.assign(l, std::vector<PointList>(l));
  for (std::size_t j = 0; j < l; ++j) {
    NumberField::Element pos = field.zero();
    for (int c : rule.images[j]) {
      out.t[c][j].push_back(to_exponent(pos));
      pos = field.add(pos, lengths[c]);
    }
  }
  return out;
}

// ---------------------------------------------------------------- validation

ValidationReport validate_stone_inflation(const InflationRule& rule) {
  rule.check_shape();
  ValidationReport rep;
  const std::size_t l = rule.size(), d = rule.dim;
  const double det = rule.q.abs_det();
  for (std::size_t j = 0; j < l; ++j) {
    double lhs = 0.0;
    for (std::size_t i = 0; i < l; ++i) lhs += static_cast<double>(rule.t[i][j].size()) * rule.volume(i);
    const double rhs = det * rule.volume(j);
    if (std::abs(lhs - rhs) > 1e-9 * std::max(1.0, rhs)) {
      rep.volume_ok = false;
      rep.problems.push_back(fmt::format("column {}: tile volumes sum to {:.12g}, expected {:.12g}", j, lhs, rhs));
    }
  }
  if (!rule.stone) return rep;

  const Eigen::MatrixXd& qm = rule.q.real_matrix();
  const bool diagonal = qm.isDiagonal();
  constexpr double tol = 1e-9;
  for (std::size_t j = 0; j < l; ++j) {
    struct Box {
      std::size_t type, index;
      std::vector<double> lo, hi;
    };
    std::vector<Box> boxes;
    for (std::size_t i = 0; i < l; ++i) {
      const auto e = rule.tiles[i].edges.real_value(*rule.basis);
      for (std::size_t k = 0; k < rule.t[i][j].size(); ++k) {
        auto lo = rule.t[i][j][k].real_value(*rule.basis);
        std::vector<double> hi(d);
        for (std::size_t c = 0; c < d; ++c) hi[c] = lo[c] + e[c];
        boxes.push_back({i, k, lo, hi});
      }
    }
    if (diagonal) {
      const auto e = rule.tiles[j].edges.real_value(*rule.basis);
      for (const auto& b : boxes)
        for (std::size_t c = 0; c < d; ++c) {
          const double top = qm(c, c) * e[c];
          if (b.lo[c] < std::min(0.0, top) - tol || b.hi[c] > std::max(0.0, top) + tol) {
            rep.contained_ok = false;
            rep.problems.push_back(
                fmt::format("column {}: tile {} #{} sticks out of the inflated tile", j, b.type, b.index));
            break;
          }
        }
    }
    for (std::size_t a = 0; a < boxes.size(); ++a)
      for (std::size_t b = a + 1; b < boxes.size(); ++b) {
        bool overlap = true;
        for (std::size_t c = 0; c < d && overlap; ++c)
          overlap = std::min(boxes[a].hi[c], boxes[b].hi[c]) - std::max(boxes[a].lo[c], boxes[b].lo[c]) > tol;
        if (overlap) {
          rep.disjoint_ok = false;
          rep.overlaps.push_back({j, boxes[a].type, boxes[a].index, boxes[b].type, boxes[b].index});
          rep.problems.push_back(fmt::format("column {}: tile {} #{} overlaps tile {} #{}", j, boxes[a].type,
                                             boxes[a].index, boxes[b].type, boxes[b].index));
        }
      }
  }
  return rep;
}

// ---------------------------------------------------------------- patches

Patch inflate_patch(const InflationRule& rule, int seed, int level) {
  rule.check_shape();
  const std::size_t l = rule.size();
  if (seed < 0 || static_cast<std::size_t>(seed) >= l) throw Error("inflate_patch: seed type out of range");
  if (level < 0) throw Error("inflate_patch: negative level");

  // tile count guard from M^n
  const IntMatrix m = substitution_matrix(rule);
  Eigen::VectorXd count = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(l));
  count(seed) = 1.0;
  for (int k = 0; k < level; ++k) {
    count = m.cast<double>() * count;
    if (count.sum() > static_cast<double>(kPatchTileCap))
      throw Error(fmt::format("inflate_patch: level {} would exceed {} tiles", level, kPatchTileCap));
  }

  std::vector<PlacedTile> cur{{seed, ExponentVector(rule.dim, rule.basis->size())}};
  for (int k = 0; k < level; ++k) {
    std::vector<PlacedTile> next;
    next.reserve(static_cast<std::size_t>((m.cast<double>().colwise().sum()).maxCoeff()) * cur.size());
    for (const auto& tile : cur) {
      const ExponentVector base = rule.q.apply(tile.pos);
      for (std::size_t i = 0; i < l; ++i)
        for (const auto& x : rule.t[i][tile.type]) next.push_back({static_cast<int>(i), base + x});
    }
    cur = std::move(next);
  }

  Patch p;
  p.counts.assign(l, 0);
  p.lower.assign(rule.dim, std::numeric_limits<double>::infinity());
  p.upper.assign(rule.dim, -std::numeric_limits<double>::infinity());
  std::vector<std::vector<double>> edges;
  for (const auto& tile : rule.tiles) edges.push_back(tile.edges.real_value(*rule.basis));
  for (const auto& tile : cur) {
    ++p.counts[tile.type];
    const auto x = tile.pos.real_value(*rule.basis);
    for (std::size_t c = 0; c < rule.dim; ++c) {
      p.lower[c] = std::min(p.lower[c], x[c]);
      p.upper[c] = std::max(p.upper[c], x[c] + edges[tile.type][c]);
    }
  }
  p.tiles = std::move(cur);
  return p;
}

}  // namespace renorm
