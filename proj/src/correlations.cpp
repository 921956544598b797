#include "renorm/correlations.hpp"

#include <array>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include <fmt/format.h>

#include "renorm/parallel.hpp"

namespace renorm {

double PairCorrelation::value(int i, int j, const ExponentVector& z) const {
  auto it = nu.find({i, j, z});
  return it == nu.end() ? 0.0 : it->second;
}

namespace {

constexpr std::size_t kMaxCoords = 8;
using Key = std::array<std::int64_t, kMaxCoords + 2>;

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::uint64_t h = 0x243f6a8885a308d3ULL;
    for (auto x : k) h = splitmix64(h ^ static_cast<std::uint64_t>(x));
    return static_cast<std::size_t>(h);
  }
};

using Counts = std::unordered_map<Key, std::uint64_t, KeyHash>;

// coverage raster of the patch: cells whose centres lie in some tile
class Raster {
 public:
  Raster(const InflationRule& rule, const Patch& patch, const std::vector<std::vector<double>>& pos,
         const std::vector<std::vector<double>>& edges) {
    d_ = rule.dim;
    double min_edge = std::numeric_limits<double>::infinity();
    for (const auto& e : edges)
      for (double x : e) min_edge = std::min(min_edge, x);
    h_ = min_edge / 2.0;
    double cells = 1.0;
    for (std::size_t c = 0; c < d_; ++c) cells *= (patch.upper[c] - patch.lower[c]) / h_ + 1.0;
    if (cells > 1e8) h_ *= std::pow(cells / 1e8, 1.0 / static_cast<double>(d_));
    lower_ = patch.lower;
    for (std::size_t c = 0; c < d_; ++c)
      n_[c] = static_cast<long>(std::ceil((patch.upper[c] - patch.lower[c]) / h_));
    if (d_ == 1) n_[1] = 1;
    // prefix sums of uncovered cells, (n0 + 1) x (n1 + 1)
    std::vector<char> covered(static_cast<std::size_t>(n_[0] * n_[1]), 0);
    for (std::size_t t = 0; t < pos.size(); ++t) {
      long lo[2] = {0, 0}, hi[2] = {0, 0};
      for (std::size_t c = 0; c < d_; ++c) {
        lo[c] = std::max(0L, static_cast<long>(std::ceil((pos[t][c] - lower_[c]) / h_ - 0.5)));
        hi[c] = std::min(n_[c] - 1, static_cast<long>(std::ceil((pos[t][c] + edges[t][c] - lower_[c]) / h_ - 0.5)) - 1);
      }
      for (long a = lo[0]; a <= hi[0]; ++a)
        for (long b = lo[1]; b <= hi[1]; ++b) covered[static_cast<std::size_t>(a * n_[1] + b)] = 1;
    }
    pre_.assign(static_cast<std::size_t>((n_[0] + 1) * (n_[1] + 1)), 0);
    for (long a = 0; a < n_[0]; ++a)
      for (long b = 0; b < n_[1]; ++b)
        at(a + 1, b + 1) = at(a, b + 1) + at(a + 1, b) - at(a, b) + (covered[static_cast<std::size_t>(a * n_[1] + b)] ? 0 : 1);
  }

  double cell() const { return h_; }

  /// The closed box [x - g, x + g] lies inside the patch and is covered.
  bool covers(const std::vector<double>& x, double g) const {
    long lo[2] = {0, 0}, hi[2] = {0, 0};
    for (std::size_t c = 0; c < d_; ++c) {
      lo[c] = static_cast<long>(std::floor((x[c] - g - lower_[c]) / h_));
      hi[c] = static_cast<long>(std::floor((x[c] + g - lower_[c]) / h_));
      if (lo[c] < 0 || hi[c] >= n_[c]) return false;
    }
    const std::int64_t bad = at(hi[0] + 1, hi[1] + 1) - at(lo[0], hi[1] + 1) - at(hi[0] + 1, lo[1]) + at(lo[0], lo[1]);
    return bad == 0;
  }

 private:
  std::int64_t& at(long a, long b) { return pre_[static_cast<std::size_t>(a * (n_[1] + 1) + b)]; }
  std::int64_t at(long a, long b) const { return pre_[static_cast<std::size_t>(a * (n_[1] + 1) + b)]; }

  std::size_t d_ = 1;
  double h_ = 1.0;
  std::vector<double> lower_;
  long n_[2] = {1, 1};
  std::vector<std::int64_t> pre_;
};

double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

PairCorrelation empirical_pair_correlation(const InflationRule& rule, const Patch& patch, double range) {
  if (patch.tiles.empty()) throw Error("pair correlation: empty patch");
  if (rule.dim > 2) throw Error("pair correlation: only dimensions 1 and 2 are supported");
  if (!(range > 0.0)) throw Error("pair correlation: range must be positive");
  double min_side = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < rule.dim; ++c) min_side = std::min(min_side, patch.upper[c] - patch.lower[c]);
  if (range > min_side / 4.0)
    throw Error(fmt::format("pair correlation: range {} too large for patch (half inradius {})", range, min_side / 4.0));
  const std::size_t m = rule.basis->size();
  const std::size_t dm = rule.dim * m;
  if (dm > kMaxCoords) throw Error("pair correlation: too many module coordinates");

  // exact positions on a common denominator
  std::int64_t den = 1;
  for (const auto& t : patch.tiles)
    for (std::size_t v = 0; v < dm; ++v) den = std::lcm(den, t.pos[v].denominator());
  const std::size_t np = patch.tiles.size();
  std::vector<std::int64_t> ipos(np * dm);
  std::vector<std::vector<double>> pos(np), tile_edges(np);
  std::vector<std::vector<double>> edges;
  for (const auto& tile : rule.tiles) edges.push_back(tile.edges.real_value(*rule.basis));
  double max_edge = 0.0;
  for (const auto& e : edges) max_edge = std::max(max_edge, sup_norm(e));
  for (std::size_t t = 0; t < np; ++t) {
    const auto& p = patch.tiles[t].pos;
    for (std::size_t v = 0; v < dm; ++v) ipos[t * dm + v] = p[v].numerator() * (den / p[v].denominator());
    pos[t] = p.real_value(*rule.basis);
    tile_edges[t] = edges[static_cast<std::size_t>(patch.tiles[t].type)];
  }

  Raster raster(rule, patch, pos, tile_edges);
  const double guard = range + max_edge + raster.cell();
  std::vector<char> in_window(np, 0);
  std::size_t nw = 0;
  for (std::size_t t = 0; t < np; ++t)
    if (raster.covers(pos[t], guard)) {
      in_window[t] = 1;
      ++nw;
    }
  if (nw == 0) throw Error("pair correlation: range too large for patch (empty window)");

  // bucket grid with cell size = range
  long nb[2] = {1, 1};
  for (std::size_t c = 0; c < rule.dim; ++c)
    nb[c] = std::max(1L, static_cast<long>(std::ceil((patch.upper[c] - patch.lower[c]) / range)) + 1);
  auto bucket_of = [&](const std::vector<double>& x, std::size_t c) {
    return std::clamp(static_cast<long>(std::floor((x[c] - patch.lower[c]) / range)), 0L, nb[c] - 1);
  };
  std::vector<std::size_t> start(static_cast<std::size_t>(nb[0] * nb[1]) + 1, 0), order(np);
  std::vector<std::size_t> cell(np);
  for (std::size_t t = 0; t < np; ++t) {
    cell[t] = static_cast<std::size_t>(bucket_of(pos[t], 0) * nb[1] + (rule.dim > 1 ? bucket_of(pos[t], 1) : 0));
    ++start[cell[t] + 1];
  }
  std::partial_sum(start.begin(), start.end(), start.begin());
  {
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (std::size_t t = 0; t < np; ++t) order[fill[cell[t]]++] = t;
  }

  const double tol = 1e-9 * std::max(1.0, range);
  auto parts = parallel_chunks<Counts>(np, 8192, [&](std::size_t, std::size_t b, std::size_t e) {
    Counts counts;
    Key key{};
    for (std::size_t x = b; x < e; ++x) {
      if (!in_window[x]) continue;
      const long bx = bucket_of(pos[x], 0), by = rule.dim > 1 ? bucket_of(pos[x], 1) : 0;
      for (long a = std::max(0L, bx - 1); a <= std::min(nb[0] - 1, bx + 1); ++a)
        for (long c = std::max(0L, by - 1); c <= std::min(nb[1] - 1, by + 1); ++c) {
          const auto cid = static_cast<std::size_t>(a * nb[1] + c);
          for (std::size_t q = start[cid]; q < start[cid + 1]; ++q) {
            const std::size_t y = order[q];
            bool near = true;
            for (std::size_t k = 0; k < rule.dim && near; ++k) near = std::abs(pos[y][k] - pos[x][k]) <= range + tol;
            if (!near) continue;
            // (x, y) and its mirror (y, x), each carrying the [x in W] half
            key[0] = patch.tiles[x].type;
            key[1] = patch.tiles[y].type;
            for (std::size_t v = 0; v < dm; ++v) key[v + 2] = ipos[y * dm + v] - ipos[x * dm + v];
            ++counts[key];
            std::swap(key[0], key[1]);
            for (std::size_t v = 0; v < dm; ++v) key[v + 2] = -key[v + 2];
            ++counts[key];
          }
        }
    }
    return counts;
  });
  Counts total;
  for (auto& p : parts)
    for (const auto& [k, c] : p) total[k] += c;

  PairCorrelation out;
  out.types = rule.size();
  out.dim = rule.dim;
  out.basis = rule.basis;
  out.range = range;
  out.window_points = nw;
  out.frequencies.assign(rule.size(), 0.0);
  for (std::size_t t = 0; t < np; ++t)
    if (in_window[t]) out.frequencies[static_cast<std::size_t>(patch.tiles[t].type)] += 1.0;
  for (auto& f : out.frequencies) f /= static_cast<double>(nw);
  const double norm = 2.0 * static_cast<double>(nw);
  for (const auto& [k, c] : total) {
    ExponentVector z(rule.dim, m);
    for (std::size_t v = 0; v < dm; ++v) z[v] = Rational(k[v + 2], den);
    out.nu[{static_cast<int>(k[0]), static_cast<int>(k[1]), z}] = static_cast<double>(c) / norm;
  }
  return out;
}

double required_correlation_range(const InflationRule& rule, double range) {
  double maxdisp = 0.0;
  for (const auto& row : rule.t)
    for (const auto& pts : row)
      for (const auto& x : pts) maxdisp = std::max(maxdisp, sup_norm(x.real_value(*rule.basis)));
  const Eigen::MatrixXd qinv = rule.q.real_matrix().inverse();
  const double opnorm = qinv.cwiseAbs().rowwise().sum().maxCoeff();
  return std::max(range, (range + 2.0 * maxdisp) * opnorm);
}

ResidualReport renormalisation_residual(const InflationRule& rule, const PairCorrelation& corr, double range) {
  const double need = required_correlation_range(rule, range);
  if (corr.range + 1e-9 < need)
    throw Error(fmt::format("renormalisation residual: insufficient range {} (need {} for |z| <= {})", corr.range,
                            need, range));
  const double tol = 1e-9 * std::max(1.0, range);
  const double det = rule.q.abs_det();
  const auto& basis = *rule.basis;
  std::map<CorrelationKey, double> rhs;
  const std::size_t l = rule.size();
  for (const auto& [key, val] : corr.nu) {
    const auto& [mm, nn, w] = key;
    const ExponentVector qw = rule.q.apply(w);
    for (std::size_t i = 0; i < l; ++i)
      for (const auto& r : rule.t[i][static_cast<std::size_t>(mm)])
        for (std::size_t j = 0; j < l; ++j)
          for (const auto& s : rule.t[j][static_cast<std::size_t>(nn)]) {
            ExponentVector z = qw - r + s;
            if (sup_norm(z.real_value(basis)) > range + tol) continue;
            rhs[{static_cast<int>(i), static_cast<int>(j), std::move(z)}] += val / det;
          }
  }
  ResidualReport rep;
  auto consider = [&](const CorrelationKey& k, double lhs, double rv) {
    ++rep.evaluated;
    const double res = std::abs(lhs - rv);
    if (res > rep.max_residual || rep.evaluated == 1) {
      rep.max_residual = res;
      rep.i = std::get<0>(k);
      rep.j = std::get<1>(k);
      rep.z = std::get<2>(k);
      rep.lhs = lhs;
      rep.rhs = rv;
    }
  };
  for (const auto& [k, v] : corr.nu) {
    if (sup_norm(std::get<2>(k).real_value(basis)) > range + tol) continue;
    auto it = rhs.find(k);
    consider(k, v, it == rhs.end() ? 0.0 : it->second);
  }
  for (const auto& [k, v] : rhs)
    if (!corr.nu.count(k)) consider(k, 0.0, v);
  return rep;
}

}  // namespace renorm
