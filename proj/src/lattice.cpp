#include "renorm/lattice.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include <fmt/format.h>

#include "renorm/rational.hpp"

namespace renorm {

namespace {

constexpr std::size_t kCandidates = 32;
constexpr std::size_t kChunk = 2048;

double b2(double x) { return x * x - x + 1.0 / 6.0; }

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % n);
}

}  // namespace

double lattice_p2(std::size_t n, std::span<const std::uint64_t> z) {
  const double c = 2.0 * std::numbers::pi * std::numbers::pi;
  auto parts = parallel_chunks<double>(n, kChunk, [&](std::size_t, std::size_t b, std::size_t e) {
    double acc = 0.0;
    for (std::size_t k = b; k < e; ++k) {
      double prod = 1.0;
      for (auto zj : z) prod *= 1.0 + c * b2(static_cast<double>(mulmod(k, zj, n)) / static_cast<double>(n));
      acc += prod;
    }
    return acc;
  });
  double s = 0.0;
  for (double x : parts) s += x;
  return s / static_cast<double>(n) - 1.0;
}

LatticeRule korobov_lattice(std::size_t n, std::size_t s) {
  if (n == 0) throw Error("korobov_lattice: n must be positive");
  static std::mutex mu;
  static std::map<std::pair<std::size_t, std::size_t>, LatticeRule> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find({n, s}); it != cache.end()) return it->second;
  }
  auto build = [&](std::uint64_t a) {
    LatticeRule r;
    r.n = n;
    std::uint64_t p = 1;
    for (std::size_t j = 0; j < s; ++j) {
      r.z.push_back(p);
      p = mulmod(p, a, n);
    }
    return r;
  };
  LatticeRule best = build(1);
  if (s >= 2 && n > 2) {
    best.p2 = std::numeric_limits<double>::infinity();
    // candidates spread over (1, n/2), coprime to n
    for (std::size_t c = 0; c < kCandidates; ++c) {
      std::uint64_t a = 2 + splitmix64(n * 131 + s * 7 + c) % (n / 2);
      while (std::gcd(a, static_cast<std::uint64_t>(n)) != 1) ++a;
      auto r = build(a);
      r.p2 = lattice_p2(n, r.z);
      if (r.p2 < best.p2) best = r;
    }
  } else {
    best.p2 = lattice_p2(n, best.z);
  }
  std::lock_guard<std::mutex> lock(mu);
  cache[{n, s}] = best;
  return best;
}

QmcEstimate lattice_mean(std::size_t s, const std::function<double(std::span<const double>)>& f,
                         const QmcOptions& opts) {
  if (opts.shifts < 2) throw Error("lattice_mean: at least two random shifts are needed");
  QmcEstimate out;
  std::size_t n = std::max<std::size_t>(opts.min_points, 1);
  for (int level = 0;; ++level) {
    const auto rule = korobov_lattice(n, s);
    std::vector<double> est(static_cast<std::size_t>(opts.shifts));
    std::size_t clipped = 0;
    for (int r = 0; r < opts.shifts; ++r) {
      auto rng = sample_rng(opts.seed, static_cast<std::uint64_t>(level) * 1024 + static_cast<std::uint64_t>(r));
      std::uniform_real_distribution<double> u(0.0, 1.0);
      std::vector<double> shift(s);
      for (auto& x : shift) x = u(rng);
      struct Part {
        double sum = 0.0;
        std::size_t clipped = 0;
      };
      auto parts = parallel_chunks<Part>(n, kChunk, [&](std::size_t, std::size_t b, std::size_t e) {
        Part p;
        std::vector<double> x(s);
        for (std::size_t k = b; k < e; ++k) {
          for (std::size_t j = 0; j < s; ++j) {
            double v = static_cast<double>(mulmod(k, rule.z[j], n)) / static_cast<double>(n) + shift[j];
            x[j] = v >= 1.0 ? v - 1.0 : v;
          }
          double y = f(x);
          if (!(y > opts.clip)) {  // also catches NaN from log(0)
            y = opts.clip;
            ++p.clipped;
          }
          p.sum += y;
        }
        return p;
      });
      double sum = 0.0;
      for (const auto& p : parts) {
        sum += p.sum;
        clipped += p.clipped;
      }
      est[static_cast<std::size_t>(r)] = sum / static_cast<double>(n);
    }
    double mean = 0.0;
    for (double e : est) mean += e;
    mean /= static_cast<double>(est.size());
    double var = 0.0;
    for (double e : est) var += (e - mean) * (e - mean);
    var /= static_cast<double>(est.size() - 1);
    out.nodes += n * est.size();
    out.mean = mean;
    out.std_error = std::sqrt(var / static_cast<double>(est.size()));
    out.clip_mass = static_cast<double>(clipped) / static_cast<double>(n * est.size());
    if (opts.tol <= 0.0 || out.std_error <= opts.tol) return out;
    if (out.nodes + 2 * n * est.size() > opts.max_total)
      throw Error(fmt::format("tolerance {:.3g} unattainable within budget of {} nodes (reached {:.3g})", opts.tol,
                              opts.max_total, out.std_error));
    n *= 2;
  }
}

}  // namespace renorm
