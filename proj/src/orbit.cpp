#include "renorm/orbit.hpp"

#include <cmath>

#include <gmp.h>
#include <mpfr.h>

#include <Eigen/Eigenvalues>

namespace renorm {

struct ToralOrbit::Impl {
  Eigen::MatrixXi et;
  std::vector<__mpfr_struct> u, next;
  mpfr_t period, tmp;
  long prec = 0;

  explicit Impl(long p, std::size_t n) : u(n), next(n), prec(p) {
    for (std::size_t i = 0; i < n; ++i) {
      mpfr_init2(&u[i], p);
      mpfr_init2(&next[i], p);
    }
    mpfr_init2(period, p);
    mpfr_init2(tmp, p);
  }
  ~Impl() {
    for (auto& x : u) mpfr_clear(&x);
    for (auto& x : next) mpfr_clear(&x);
    mpfr_clear(period);
    mpfr_clear(tmp);
  }

  void reduce(mpfr_ptr x) {
    mpfr_fmod(x, x, period, MPFR_RNDN);
    if (mpfr_sgn(x) < 0) mpfr_add(x, x, period, MPFR_RNDN);
  }
};

double torus_growth(const Expansion& q) {
  auto tm = q.torus_map();
  if (!tm) throw Error("orbit: expansion has no integral torus map");
  Eigen::EigenSolver<Eigen::MatrixXd> es(tm->cast<double>());
  double rho = 1.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) rho = std::max(rho, std::abs(es.eigenvalues()(i)));
  return rho;
}

namespace {

// generator value to full precision: Newton on the minimal polynomial when
// one is declared, otherwise the stored double is taken as exact
void generator_value(mpfr_ptr out, const Generator& g, long prec) {
  mpfr_set_d(out, g.approx, MPFR_RNDN);
  if (g.minpoly.size() < 2) return;
  mpfr_t f, df, step;
  mpfr_inits2(prec, f, df, step, static_cast<mpfr_ptr>(nullptr));
  for (int it = 0; it < 200; ++it) {
    mpfr_set_si(f, 0, MPFR_RNDN);
    mpfr_set_si(df, 0, MPFR_RNDN);
    for (std::size_t i = g.minpoly.size(); i-- > 0;) {
      mpfr_mul(df, df, out, MPFR_RNDN);
      mpfr_add(df, df, f, MPFR_RNDN);
      mpfr_mul(f, f, out, MPFR_RNDN);
      mpfr_add_si(f, f, static_cast<long>(g.minpoly[i]), MPFR_RNDN);
    }
    if (mpfr_zero_p(df)) break;
    mpfr_div(step, f, df, MPFR_RNDN);
    mpfr_sub(out, out, step, MPFR_RNDN);
    if (mpfr_zero_p(step) || mpfr_get_exp(step) < -prec + 4) break;
  }
  mpfr_clears(f, df, step, static_cast<mpfr_ptr>(nullptr));
  if (std::abs(mpfr_get_d(out, MPFR_RNDN) - g.approx) > 1e-9 * std::max(1.0, std::abs(g.approx)))
    throw Error("orbit: generator '" + g.name + "' does not match its minimal polynomial");
}

}  // namespace

ToralOrbit::ToralOrbit(const Expansion& q, std::span<const double> k0, int steps, std::int64_t period,
                       std::optional<std::uint64_t> jitter_seed) {
  auto tm = q.torus_map();
  if (!tm) throw Error("orbit: expansion has no integral torus map");
  if (k0.size() != q.dim()) throw Error("orbit: starting point has the wrong dimension");
  if (period < 1) throw Error("orbit: period must be positive");
  const auto& basis = *q.basis();
  const std::size_t m = basis.size(), d = q.dim(), n = d * m;
  const double rho = torus_growth(q);
  const long prec = 160 + static_cast<long>(std::ceil(std::max(steps, 1) * std::log2(rho))) +
                    static_cast<long>(std::ceil(std::log2(static_cast<double>(period))));
  impl_ = std::make_unique<Impl>(prec, n);
  impl_->et = *tm;
  mpfr_set_si(impl_->period, static_cast<long>(period), MPFR_RNDN);

  std::vector<__mpfr_struct> g(m);
  for (std::size_t r = 0; r < m; ++r) {
    mpfr_init2(&g[r], prec);
    generator_value(&g[r], basis.generator(r), prec);
  }
  mpfr_t k;
  mpfr_init2(k, prec);
  gmp_randstate_t state;
  if (jitter_seed) {
    gmp_randinit_default(state);
    gmp_randseed_ui(state, static_cast<unsigned long>(*jitter_seed));
  }
  for (std::size_t j = 0; j < d; ++j) {
    mpfr_set_d(k, k0[j], MPFR_RNDN);
    if (jitter_seed) {
      // random bits below the last place of the double
      mpfr_urandomb(impl_->tmp, state);
      const int e = k0[j] == 0.0 ? -52 : std::ilogb(k0[j]) - 52;
      mpfr_mul_2si(impl_->tmp, impl_->tmp, e, MPFR_RNDN);
      mpfr_add(k, k, impl_->tmp, MPFR_RNDN);
    }
    for (std::size_t r = 0; r < m; ++r) {
      mpfr_mul(&impl_->u[j * m + r], k, &g[r], MPFR_RNDN);
      impl_->reduce(&impl_->u[j * m + r]);
    }
  }
  if (jitter_seed) gmp_randclear(state);
  mpfr_clear(k);
  for (auto& x : g) mpfr_clear(&x);
  u_.resize(n);
  for (std::size_t i = 0; i < n; ++i) u_[i] = mpfr_get_d(&impl_->u[i], MPFR_RNDN);
}

ToralOrbit::~ToralOrbit() = default;
ToralOrbit::ToralOrbit(ToralOrbit&&) noexcept = default;
ToralOrbit& ToralOrbit::operator=(ToralOrbit&&) noexcept = default;

long ToralOrbit::precision_bits() const { return impl_->prec; }

void ToralOrbit::advance() {
  auto& im = *impl_;
  const auto n = static_cast<Eigen::Index>(im.u.size());
  for (Eigen::Index a = 0; a < n; ++a) {
    mpfr_ptr acc = &im.next[static_cast<std::size_t>(a)];
    mpfr_set_si(acc, 0, MPFR_RNDN);
    for (Eigen::Index b = 0; b < n; ++b) {
      const int c = im.et(a, b);
      if (c == 0) continue;
      mpfr_mul_si(im.tmp, &im.u[static_cast<std::size_t>(b)], c, MPFR_RNDN);
      mpfr_add(acc, acc, im.tmp, MPFR_RNDN);
    }
    im.reduce(acc);
  }
  for (std::size_t i = 0; i < im.u.size(); ++i) {
    mpfr_swap(&im.u[i], &im.next[i]);
    u_[i] = mpfr_get_d(&im.u[i], MPFR_RNDN);
  }
}

}  // namespace renorm
