#include "renorm/lyapunov.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "renorm/orbit.hpp"
#include "renorm/parallel.hpp"

namespace renorm {

// ---------------------------------------------------------------- lifted B

LiftedCocycle::LiftedCocycle(const FourierMatrix& b) : b_(b) {
  auto tm = b.expansion().torus_map();
  if (!tm) throw Error("lifted cocycle: expansion has no integral torus map");
  et_ = *tm;
  const std::size_t m = b.basis()->size();
  n_ = b.dim() * m;
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b(i, j).is_zero()) continue;
      Entry e{i, j, {}, {}};
      for (const auto& t : b(i, j).terms()) {
        for (std::size_t v = 0; v < n_; ++v) {
          e.a.push_back(to_double(t.exponent[v]));
          period_ = std::lcm(period_, t.exponent[v].denominator());
        }
        e.c.push_back(t.coeff);
      }
      entries_.push_back(std::move(e));
    }
}

Eigen::MatrixXcd LiftedCocycle::evaluate(std::span<const double> u) const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(b_.size()), static_cast<Eigen::Index>(b_.size()));
  for (const auto& e : entries_) {
    Complex s = 0.0;
    for (std::size_t t = 0; t < e.c.size(); ++t) {
      double ph = 0.0;
      for (std::size_t v = 0; v < n_; ++v) ph += e.a[t * n_ + v] * u[v];
      ph -= std::floor(ph);
      s += e.c[t] * std::polar(1.0, 2.0 * std::numbers::pi * ph);
    }
    m(static_cast<Eigen::Index>(e.i), static_cast<Eigen::Index>(e.j)) = s;
  }
  return m;
}

std::vector<double> LiftedCocycle::lift(std::span<const double> k) const {
  const auto& basis = *b_.basis();
  const std::size_t m = basis.size();
  std::vector<double> u(n_);
  const double s = static_cast<double>(period_);
  for (std::size_t j = 0; j < b_.dim(); ++j)
    for (std::size_t r = 0; r < m; ++r) {
      const double x = basis.value(r) * k[j];
      u[j * m + r] = x - s * std::floor(x / s);
    }
  return u;
}

void LiftedCocycle::step(std::vector<double>& u) const {
  std::vector<double> nu(n_, 0.0);
  const double s = static_cast<double>(period_);
  for (std::size_t a = 0; a < n_; ++a) {
    double acc = 0.0;
    for (std::size_t b = 0; b < n_; ++b) acc += et_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) * u[b];
    nu[a] = acc - s * std::floor(acc / s);
  }
  u = std::move(nu);
}

Eigen::MatrixXcd LiftedCocycle::cocycle(std::span<const double> u0, int n) const {
  if (n < 1) throw Error("cocycle order must be at least 1");
  std::vector<double> u(u0.begin(), u0.end());
  Eigen::MatrixXcd acc = evaluate(u);
  for (int l = 1; l < n; ++l) {
    step(u);
    acc = acc * evaluate(u);
  }
  return acc;
}

// ---------------------------------------------------------------- Birkhoff

namespace {

double orbit_exponent(const LiftedCocycle& lc, ToralOrbit& orbit, int n) {
  const auto l = static_cast<Eigen::Index>(lc.matrix().size());
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(l, l);
  long double logs = 0.0L;
  for (int i = 0; i < n; ++i) {
    acc = acc * lc.evaluate(orbit.point());
    if (i + 1 < n) orbit.advance();
    if ((i + 1) % 32 == 0 || i + 1 == n) {
      const double s = acc.norm();
      if (!std::isfinite(s)) throw Error("birkhoff_exponent: overflow despite renormalisation");
      if (s == 0.0) return -std::numeric_limits<double>::infinity();
      acc /= s;
      logs += std::log(static_cast<long double>(s));
    }
  }
  return static_cast<double>(logs / n);
}

bool small_rational(double x) {
  for (int q = 1; q <= 64; ++q)
    if (x * q == std::round(x * q)) return true;
  return false;
}

}  // namespace

LyapunovEstimate birkhoff_exponent(const FourierMatrix& b, std::span<const double> k0, int n) {
  if (n < 1) throw Error("birkhoff_exponent: n must be at least 1");
  LiftedCocycle lc(b);
  ToralOrbit orbit(b.expansion(), k0, n, lc.period());
  LyapunovEstimate est;
  est.value = orbit_exponent(lc, orbit, n);
  est.samples = 1;
  est.iterations = n;
  est.starts.emplace_back(k0.begin(), k0.end());
  est.per_sample = {est.value};
  return est;
}

std::vector<double> random_start(std::size_t d, std::uint64_t seed, std::uint64_t index) {
  auto rng = sample_rng(seed, index);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    std::vector<double> k(d);
    for (auto& x : k) x = u(rng);
    if (!std::all_of(k.begin(), k.end(), small_rational)) return k;
  }
}

LyapunovEstimate birkhoff_exponent(const FourierMatrix& b, const BirkhoffOptions& opts) {
  if (opts.iterations < 1) throw Error("birkhoff_exponent: n must be at least 1");
  if (opts.samples < 1) throw Error("birkhoff_exponent: need at least one sample");
  LiftedCocycle lc(b);
  struct Out {
    std::vector<double> k;
    double value = 0.0;
  };
  auto res = parallel_chunks<Out>(opts.samples, 1, [&](std::size_t c, std::size_t, std::size_t) {
    Out o;
    o.k = random_start(b.dim(), opts.seed, c);
    ToralOrbit orbit(b.expansion(), o.k, opts.iterations, lc.period(), splitmix64(opts.seed ^ (0xa5a5a5a5ULL + c)));
    o.value = orbit_exponent(lc, orbit, opts.iterations);
    return o;
  });
  LyapunovEstimate est;
  est.samples = opts.samples;
  est.iterations = opts.iterations;
  est.seed = opts.seed;
  double sum = 0.0;
  for (const auto& o : res) {
    est.starts.push_back(o.k);
    est.per_sample.push_back(o.value);
    sum += o.value;
  }
  const double ns = static_cast<double>(opts.samples);
  est.value = sum / ns;
  if (opts.samples > 1) {
    double var = 0.0;
    for (double v : est.per_sample) var += (v - est.value) * (v - est.value);
    est.std_error = std::sqrt(var / (ns - 1.0) / ns);
  }
  return est;
}

// ---------------------------------------------------------------- ladder

std::string to_string(LadderConvention c) { return c == LadderConvention::Chi ? "chi" : "2chi"; }

const LadderRow& BoundLadder::best() const {
  if (rows.empty()) throw Error("empty ladder");
  const LadderRow* b = &rows.front();
  for (const auto& r : rows)
    if (r.m + r.error < b->m + b->error) b = &r;
  return *b;
}

namespace {

bool one_dim_integer(const FourierMatrix& b) {
  return b.dim() == 1 && b.basis()->size() == 1 && b.expansion().is_integer_diagonal();
}

LadderRow circle_row(const FourierMatrix& b, int n, std::size_t nodes) {
  if (nodes < 2) nodes = std::size_t{1} << (n + 13);
  nodes += nodes % 2;
  struct Part {
    double even = 0.0, odd = 0.0;
    std::size_t clipped = 0;
  };
  auto parts = parallel_chunks<Part>(nodes, 4096, [&](std::size_t, std::size_t lo, std::size_t hi) {
    Part p;
    for (std::size_t j = lo; j < hi; ++j) {
      const double k[1] = {(static_cast<double>(j) + 0.5) / static_cast<double>(nodes)};
      double v = std::log(cocycle_evaluate(b, k, n).squaredNorm());
      if (!(v > -40.0)) {
        v = -40.0;
        ++p.clipped;
      }
      (j % 2 ? p.odd : p.even) += v;
    }
    return p;
  });
  double e = 0.0, o = 0.0;
  for (const auto& p : parts) {
    e += p.even;
    o += p.odd;
  }
  const double half = static_cast<double>(nodes / 2);
  e /= half;
  o /= half;
  LadderRow r;
  r.n = n;
  r.m = 0.5 * (e + o) / (2.0 * n);
  r.error = 0.5 * std::abs(e - o) / (2.0 * n);
  r.method = MahlerMethod::CircleQuadrature;
  return r;
}

}  // namespace

BoundLadder upper_bound_ladder(const FourierMatrix& b, const LadderOptions& opts) {
  if (opts.max_n < 1) throw Error("ladder: max N must be at least 1");
  LadderPath path = opts.path;
  if (path == LadderPath::Auto) path = one_dim_integer(b) ? LadderPath::Roots : LadderPath::Torus;
  if ((path == LadderPath::Roots || path == LadderPath::CircleQuadrature) && !one_dim_integer(b))
    throw Error("ladder: the Jensen paths need a one-dimensional integer expansion");
  BoundLadder out;
  out.convention = path == LadderPath::Torus ? LadderConvention::TwoChi : LadderConvention::Chi;
  if (path == LadderPath::Roots) {
    FourierMatrix acc = b, shifted = b;
    for (int n = 1; n <= opts.max_n; ++n) {
      if (n > 1) {
        shifted = shifted.rescaled();
        acc = acc * shifted;
      }
      const auto p = frobenius_squared(acc);
      const auto m = mahler_univariate(p);
      out.rows.push_back({n, m.value / (2.0 * n), m.error / (2.0 * n), m.method});
    }
  } else if (path == LadderPath::CircleQuadrature) {
    for (int n = 1; n <= opts.max_n; ++n) out.rows.push_back(circle_row(b, n, opts.circle_nodes));
  } else {
    LiftedCocycle lc(b);
    const double s = static_cast<double>(lc.period());
    for (int n = 1; n <= opts.max_n; ++n) {
      QmcOptions q = opts.qmc;
      q.tol = opts.qmc.tol * n;  // tolerance is on m_N
      auto f = [&](std::span<const double> x) {
        std::vector<double> u(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) u[i] = s * x[i];
        return std::log(lc.cocycle(u, n).squaredNorm());
      };
      const auto m = torus_log_mean(lc.lifted_dim(), f, q);
      out.rows.push_back({n, m.value / n, m.error / n, m.method});
    }
  }
  return out;
}

// ---------------------------------------------------------------- verdict

std::string to_string(Conclusion c) {
  switch (c) {
    case Conclusion::Singular: return "singular-diffraction";
    case Conclusion::Inconclusive: return "inconclusive";
    case Conclusion::Inapplicable: return "inapplicable";
  }
  return "?";
}

namespace {

void conclude(Verdict& v) {
  v.margin = v.threshold - v.bound - v.error;
  v.conclusion = v.margin > 0.0 ? Conclusion::Singular : Conclusion::Inconclusive;
}

}  // namespace

Verdict singularity_verdict(const CatalogueEntry& entry, const VerdictOptions& opts) {
  const auto& rule = entry.rule;
  const auto b = fourier_matrix(rule);
  Verdict v;
  const double logdet = std::log(rule.q.abs_det());
  v.threshold = 0.5 * logdet;

  bool det_zero;
  if (b.size() <= 20) {
    det_zero = det_polynomial(b).is_zero();
  } else {
    det_zero = true;
    for (std::uint64_t i = 0; i < 3 && det_zero; ++i)
      det_zero = std::abs(det_numeric(b, random_start(b.dim(), kDefaultSeed, i))) < 1e-12;
  }
  if (det_zero) {
    v.conclusion = Conclusion::Inapplicable;
    v.explanation = "det B(k) vanishes identically, so the exponent criterion does not apply";
    return v;
  }

  if (b.size() == 1) {
    // scalar cocycle: chi = M(log|B|) exactly
    const auto m = quasiperiodic_log_mean(b(0, 0), opts.qmc);
    v.bound = m.value;
    v.error = m.error;
    v.method = "scalar exponent M(log|B|) by " + to_string(m.method);
    conclude(v);
    v.explanation = fmt::format("chi = {:.6f} vs 1/2 log|det Q| = {:.6f}", v.bound, v.threshold);
    return v;
  }

  if (entry.binary_block) {
    const auto dec = binary_block_decomposition(rule);
    const auto mp = quasiperiodic_log_mean(dec.p, opts.qmc);
    const auto mqr = quasiperiodic_log_mean(dec.q - dec.r, opts.qmc);
    const auto& top = mqr.value >= mp.value ? mqr : mp;
    v.bound = top.value;
    v.error = std::max(mp.error, mqr.error);
    v.method = "binary block: max(m(p), m(q - r))";
    conclude(v);
    v.explanation = fmt::format("m(p) = {:.6f}, m(q - r) = {:.6f} vs 1/2 log|det Q| = {:.6f}", mp.value, mqr.value,
                                v.threshold);
    return v;
  }

  auto ladder_for = [&](const FourierMatrix& m) {
    LadderOptions lo;
    lo.qmc = opts.qmc;
    const bool roots = one_dim_integer(m);
    lo.max_n = opts.max_n > 0 ? opts.max_n : (roots ? 12 : 4);
    return upper_bound_ladder(m, lo);
  };

  if (entry.similarity && !entry.reduced_block.empty()) {
    const auto s = apply_similarity(b, *entry.similarity);
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (std::find(entry.reduced_block.begin(), entry.reduced_block.end(), i) == entry.reduced_block.end())
        rest.push_back(i);
    bool split = true;
    for (auto i : rest)
      for (std::size_t j = 0; j < s.size(); ++j)
        if (j != i && (!s(i, j).is_zero() || !s(j, i).is_zero())) split = false;
    if (split) {
      auto ladder = ladder_for(s.block(entry.reduced_block));
      const auto& best = ladder.best();
      const double scale = ladder.convention == LadderConvention::Chi ? 1.0 : 0.5;
      v.bound = best.m * scale;
      v.error = best.error * scale;
      std::string scalars;
      for (auto i : rest) {
        const auto m = quasiperiodic_log_mean(s(i, i), opts.qmc);
        scalars += fmt::format(" m(B'_{}{}) = {:.6f};", i, i, m.value);
        if (m.value > v.bound) {
          v.bound = m.value;
          v.error = m.error;
        }
      }
      v.method = fmt::format("similarity reduction, m_{} on the reduced block", best.n);
      v.ladder = std::move(ladder);
      conclude(v);
      v.explanation = fmt::format("bound {:.6f} +- {:.2g} vs 1/2 log|det Q| = {:.6f};{}", v.bound, v.error,
                                  v.threshold, scalars);
      return v;
    }
  }

  auto ladder = ladder_for(b);
  const auto& best = ladder.best();
  v.convention = ladder.convention;
  if (v.convention == LadderConvention::TwoChi) v.threshold = logdet;
  v.bound = best.m;
  v.error = best.error;
  v.method = fmt::format("m_{} ladder ({} convention, {})", best.n, to_string(v.convention), to_string(best.method));
  v.ladder = std::move(ladder);
  conclude(v);
  if (v.convention == LadderConvention::TwoChi)
    v.explanation = fmt::format("m_{} = {:.6f} +- {:.2g} bounds 2 chi; compared with log|det Q| = {:.6f}", best.n,
                                v.bound, v.error, v.threshold);
  else
    v.explanation = fmt::format("m_{} = {:.6f} +- {:.2g} bounds chi; compared with 1/2 log|det Q| = {:.6f}", best.n,
                                v.bound, v.error, v.threshold);
  if (v.conclusion == Conclusion::Inconclusive) {
    const auto& r = v.ladder->rows;
    if (r.size() >= 2 && r.back().m < r[r.size() - 2].m) v.explanation += "; ladder still decreasing";
  }
  return v;
}

Verdict singularity_verdict(const InflationRule& rule, const VerdictOptions& opts) {
  CatalogueEntry e;
  e.name = rule.name;
  e.rule = rule;
  e.binary_block = false;
  if (rule.size() == 2 && rule.q.is_integer_diagonal()) {
    // treat constant-size two-letter rules as binary block rules when the
    // decomposition exists
    try {
      binary_block_decomposition(rule);
      e.binary_block = true;
    } catch (const Error&) {
    }
  }
  return singularity_verdict(e, opts);
}

// ---------------------------------------------------------------- splitting

std::vector<Eigen::MatrixXcd> hermitian_rank_one_split(const Eigen::MatrixXcd& h) {
  if (h.rows() != h.cols()) throw Error("hermitian_rank_one_split: matrix not square");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) throw Error("hermitian_rank_one_split: not Hermitian");
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    if (h(i, i).real() < -1e-10 * scale) throw Error("hermitian_rank_one_split: not PSD (negative diagonal)");
    if (std::abs(h(i, i)) <= 1e-10 * scale)
      for (Eigen::Index j = 0; j < h.rows(); ++j)
        if (std::abs(h(i, j)) > 1e-8 * scale)
          throw Error(fmt::format("hermitian_rank_one_split: not PSD (h_{}{} = 0 but row {} is nonzero)", i, i, i));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  std::vector<Eigen::MatrixXcd> out;
  for (Eigen::Index r = 0; r < h.rows(); ++r) {
    const double lam = es.eigenvalues()(r);
    if (lam < -1e-10 * scale) throw Error("hermitian_rank_one_split: not PSD");
    if (lam <= 1e-10 * scale) continue;
    const Eigen::VectorXcd v = es.eigenvectors().col(r);
    out.push_back(lam * v * v.adjoint());
  }
  return out;
}

}  // namespace renorm
