#include "renorm/mahler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "renorm/roots.hpp"

namespace renorm {

std::string to_string(MahlerMethod m) {
  switch (m) {
    case MahlerMethod::JensenExact: return "jensen-exact";
    case MahlerMethod::IteratedJensen: return "iterated-jensen";
    case MahlerMethod::QmcTorus: return "qmc-torus";
    case MahlerMethod::Birkhoff: return "birkhoff";
    case MahlerMethod::CircleQuadrature: return "circle-quadrature";
  }
  return "?";
}

namespace {

// log max(|a|, |b|)-style closed forms for the low degrees met in the
// inner Jensen step; NaN-free, -inf for the zero polynomial
double small_mahler(const Complex* c, std::size_t len) {
  std::size_t lo = 0, hi = len;
  while (lo < hi && c[lo] == Complex(0.0)) ++lo;
  while (hi > lo && c[hi - 1] == Complex(0.0)) --hi;
  if (lo == hi) return -std::numeric_limits<double>::infinity();
  const std::size_t deg = hi - lo - 1;
  const Complex* a = c + lo;
  if (deg == 0) return std::log(std::abs(a[0]));
  if (deg == 1) return std::log(std::max(std::abs(a[0]), std::abs(a[1])));
  if (deg == 2) {
    // a2 z^2 + a1 z + a0 with the cancellation-free root pair
    const Complex disc = std::sqrt(a[1] * a[1] - 4.0 * a[2] * a[0]);
    const Complex qq = -0.5 * (a[1] + (std::real(std::conj(a[1]) * disc) >= 0 ? disc : -disc));
    double m = std::log(std::abs(a[2]));
    if (qq == Complex(0.0)) return m;  // a1 = a0 = 0 was trimmed, so unreachable
    m += std::log(std::max(1.0, std::abs(qq / a[2])));
    m += std::log(std::max(1.0, std::abs(a[0] / qq)));
    return m;
  }
  std::vector<Complex> v(a, a + deg + 1);
  auto roots = polynomial_roots(v);
  double m = std::log(std::abs(v.back()));
  for (const auto& r : roots) m += std::log(std::max(1.0, std::abs(r)));
  return m;
}

}  // namespace

MahlerResult mahler_univariate(const std::vector<Complex>& coeffs) {
  std::size_t lo = 0, hi = coeffs.size();
  while (lo < hi && coeffs[lo] == Complex(0.0)) ++lo;
  while (hi > lo && coeffs[hi - 1] == Complex(0.0)) --hi;
  if (lo == hi) throw Error("Mahler measure of the zero polynomial");
  std::vector<Complex> a(coeffs.begin() + static_cast<long>(lo), coeffs.begin() + static_cast<long>(hi));
  MahlerResult res;
  res.method = MahlerMethod::JensenExact;
  res.value = std::log(std::abs(a.back()));
  if (a.size() == 1) return res;
  const auto roots = polynomial_roots(a);
  double err = 0.0;
  for (const auto& r : roots) {
    const double mod = std::abs(r);
    res.value += std::log(std::max(1.0, mod));
    // a root can only move log max(1,|r|) by its Newton step
    const double step = std::abs(newton_correction(a, r));
    if (mod + step > 1.0) err += step / std::max(mod, 1e-300);
  }
  res.error = err + 4.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(roots.size());
  res.nodes = roots.size();
  return res;
}

std::vector<Complex> laurent_coefficients(const GenTrigPoly& p) {
  if (p.dim() != 1 || !p.is_periodic()) throw Error("expected a periodic polynomial in one variable");
  if (p.is_zero()) throw Error("Mahler measure of the zero polynomial");
  std::int64_t lo = std::numeric_limits<std::int64_t>::max(), hi = std::numeric_limits<std::int64_t>::min();
  for (const auto& t : p.terms()) {
    lo = std::min(lo, t.exponent(0, 0).numerator());
    hi = std::max(hi, t.exponent(0, 0).numerator());
  }
  std::vector<Complex> c(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (const auto& t : p.terms()) c[static_cast<std::size_t>(t.exponent(0, 0).numerator() - lo)] += t.coeff;
  return c;
}

MahlerResult mahler_univariate(const GenTrigPoly& p) { return mahler_univariate(laurent_coefficients(p)); }

MahlerResult mahler_multivariate(const GenTrigPoly& p, const QmcOptions& opts) {
  if (!p.is_periodic()) throw Error("mahler_multivariate: polynomial is not periodic; use quasiperiodic_log_mean");
  if (p.is_zero()) throw Error("Mahler measure of the zero polynomial");
  const std::size_t d = p.dim();
  std::vector<std::int64_t> lo(d, std::numeric_limits<std::int64_t>::max()), hi(d, std::numeric_limits<std::int64_t>::min());
  for (const auto& t : p.terms())
    for (std::size_t j = 0; j < d; ++j) {
      lo[j] = std::min(lo[j], t.exponent(j, 0).numerator());
      hi[j] = std::max(hi[j], t.exponent(j, 0).numerator());
    }
  std::vector<std::size_t> used;
  for (std::size_t j = 0; j < d; ++j)
    if (hi[j] > lo[j]) used.push_back(j);
  if (used.empty()) {
    // a single monomial
    MahlerResult r;
    r.value = std::log(std::abs(p.terms().front().coeff));
    return r;
  }
  // highest degree first; ties go to the lower index
  std::size_t v = used.front();
  for (auto j : used)
    if (hi[j] - lo[j] > hi[v] - lo[v]) v = j;
  if (used.size() == 1) {
    std::vector<Complex> c(static_cast<std::size_t>(hi[v] - lo[v] + 1), 0.0);
    for (const auto& t : p.terms()) c[static_cast<std::size_t>(t.exponent(v, 0).numerator() - lo[v])] += t.coeff;
    return mahler_univariate(c);
  }
  std::vector<std::size_t> outer;
  for (auto j : used)
    if (j != v) outer.push_back(j);
  const std::size_t s = outer.size();
  const std::size_t deg = static_cast<std::size_t>(hi[v] - lo[v]);
  struct Flat {
    std::size_t power;
    std::vector<double> a;
    Complex c;
  };
  std::vector<Flat> terms;
  for (const auto& t : p.terms()) {
    Flat f{static_cast<std::size_t>(t.exponent(v, 0).numerator() - lo[v]), {}, t.coeff};
    for (auto j : outer) f.a.push_back(static_cast<double>(t.exponent(j, 0).numerator()));
    terms.push_back(std::move(f));
  }
  auto slice = [&](std::span<const double> x) {
    std::vector<Complex> c(deg + 1, 0.0);
    for (const auto& t : terms) {
      double ph = 0.0;
      for (std::size_t i = 0; i < s; ++i) ph += t.a[i] * x[i];
      ph -= std::floor(ph);
      c[t.power] += t.c * std::polar(1.0, 2.0 * std::numbers::pi * ph);
    }
    return small_mahler(c.data(), c.size());
  };
  const auto q = lattice_mean(s, slice, opts);
  MahlerResult r;
  r.value = q.mean;
  r.error = q.std_error;
  r.method = MahlerMethod::IteratedJensen;
  r.nodes = q.nodes;
  r.clip_mass = q.clip_mass;
  return r;
}

MahlerResult quasiperiodic_log_mean(const GenTrigPoly& p, const QmcOptions& opts) {
  if (p.is_periodic()) return mahler_multivariate(p, opts);
  if (!p.basis()->independent()) throw Error("quasiperiodic_log_mean: generators declared rationally dependent");
  return mahler_multivariate(torus_lift(p).poly, opts);
}

MahlerResult torus_log_mean(std::size_t s, const std::function<double(std::span<const double>)>& log_f,
                            const QmcOptions& opts) {
  const auto q = lattice_mean(s, log_f, opts);
  MahlerResult r;
  r.value = q.mean;
  r.error = q.std_error;
  r.method = MahlerMethod::QmcTorus;
  r.nodes = q.nodes;
  r.clip_mass = q.clip_mass;
  return r;
}

MahlerResult birkhoff_log_mean(std::size_t d, const std::function<double(std::span<const double>)>& log_f,
                               const BirkhoffMeanOptions& opts) {
  if (opts.samples < 2) throw Error("birkhoff_log_mean: need at least two samples");
  struct Part {
    double sum = 0.0, sq = 0.0;
    std::size_t clipped = 0;
  };
  constexpr std::size_t chunk = 4096;
  auto parts = parallel_chunks<Part>(opts.samples, chunk, [&](std::size_t c, std::size_t b, std::size_t e) {
    auto rng = sample_rng(opts.seed, c);
    std::uniform_real_distribution<double> u(0.0, opts.window);
    std::vector<double> k(d);
    Part part;
    for (std::size_t i = b; i < e; ++i) {
      for (auto& x : k) x = u(rng);
      double y = log_f(k);
      if (!(y > opts.clip)) {
        y = opts.clip;
        ++part.clipped;
      }
      part.sum += y;
      part.sq += y * y;
    }
    return part;
  });
  Part tot;
  for (const auto& p : parts) {
    tot.sum += p.sum;
    tot.sq += p.sq;
    tot.clipped += p.clipped;
  }
  const double n = static_cast<double>(opts.samples);
  MahlerResult r;
  r.value = tot.sum / n;
  r.error = std::sqrt(std::max(0.0, tot.sq / n - r.value * r.value) / (n - 1.0));
  r.method = MahlerMethod::Birkhoff;
  r.nodes = opts.samples;
  r.clip_mass = static_cast<double>(tot.clipped) / n;
  return r;
}

}  // namespace renorm
