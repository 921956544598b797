#pragma once

// Lyapunov exponents of the Fourier cocycle, the m_N upper-bound ladder and
// the resulting singularity verdict.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "renorm/catalogue.hpp"
#include "renorm/fourier.hpp"
#include "renorm/mahler.hpp"

namespace renorm {

/// B evaluated in lifted coordinates u[j*m + r] = g_r k_j. The entries are
/// periodic in every u-variable with the common period `period()`.
class LiftedCocycle {
 public:
  explicit LiftedCocycle(const FourierMatrix& b);

  const FourierMatrix& matrix() const { return b_; }
  std::size_t lifted_dim() const { return n_; }
  std::int64_t period() const { return period_; }
  const Eigen::MatrixXi& torus_map() const { return et_; }

  Eigen::MatrixXcd evaluate(std::span<const double> u) const;
  /// Lifted point of the physical k (reduced mod the period).
  std::vector<double> lift(std::span<const double> k) const;
  /// u -> E^T u mod period, in doubles; fine for a handful of steps.
  void step(std::vector<double>& u) const;
  /// B^(n) at the lifted point u, evaluated in doubles.
  Eigen::MatrixXcd cocycle(std::span<const double> u, int n) const;

 private:
  struct Entry {
    std::size_t i, j;
    std::vector<double> a;  // n_ coefficients per term
    std::vector<Complex> c;
  };
  FourierMatrix b_;
  std::size_t n_ = 0;
  std::int64_t period_ = 1;
  Eigen::MatrixXi et_;
  std::vector<Entry> entries_;
};

struct LyapunovEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  int iterations = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> starts;  // k0 per sample
  std::vector<double> per_sample;
};

/// (1/n) log ||B^(n)(k0)||_F along the exact orbit of k0, with the running
/// product renormalised every 32 steps.
LyapunovEstimate birkhoff_exponent(const FourierMatrix& b, std::span<const double> k0, int n);

struct BirkhoffOptions {
  std::size_t samples = 64;
  int iterations = 2000;
  std::uint64_t seed = kDefaultSeed;
};

/// Mean +- standard error over random starting points in [0,1)^d.
LyapunovEstimate birkhoff_exponent(const FourierMatrix& b, const BirkhoffOptions& opts = {});

/// Random start for sample `index`; exactly representable small rationals are
/// rejected.
std::vector<double> random_start(std::size_t d, std::uint64_t seed, std::uint64_t index);

/// Chi: m_N = m(p_N) / (2N), bounds chi (1D integer expansions).
/// TwoChi: m_N = (1/N) M(log ||B^(N)||_F^2), bounds 2 chi.
enum class LadderConvention { Chi, TwoChi };
std::string to_string(LadderConvention c);

struct LadderRow {
  int n = 0;
  double m = 0.0;
  double error = 0.0;
  MahlerMethod method = MahlerMethod::JensenExact;
};

struct BoundLadder {
  LadderConvention convention = LadderConvention::Chi;
  std::vector<LadderRow> rows;
  /// Row with the smallest m_N + error.
  const LadderRow& best() const;
};

enum class LadderPath { Auto, Roots, CircleQuadrature, Torus };

struct LadderOptions {
  int max_n = 6;
  LadderPath path = LadderPath::Auto;
  QmcOptions qmc{};
  /// Circle quadrature nodes per N; 0 picks 2^(N+13).
  std::size_t circle_nodes = 0;
};

/// Roots: Jensen on the symbolic p_N = ||B^(N)||_F^2 (1D, integer Q).
/// CircleQuadrature: the same mean by equispaced nodes. Torus: lattice
/// quadrature of the lifted cocycle over T^{d m}.
BoundLadder upper_bound_ladder(const FourierMatrix& b, const LadderOptions& opts = {});

enum class Conclusion { Singular, Inconclusive, Inapplicable };
std::string to_string(Conclusion c);

struct Verdict {
  Conclusion conclusion = Conclusion::Inconclusive;
  LadderConvention convention = LadderConvention::Chi;
  double threshold = 0.0;  // 1/2 log|det Q| (Chi) or log|det Q| (TwoChi)
  double bound = 0.0;
  double error = 0.0;
  double margin = 0.0;  // threshold - bound - error
  std::string method;
  std::string explanation;
  std::optional<BoundLadder> ladder;
};

struct VerdictOptions {
  int max_n = 0;  // 0: 12 for the roots path, 4 for the torus path
  QmcOptions qmc{};
};

/// Compares the best available bound on the maximal Lyapunov exponent with
/// half the log of |det Q|. Uses the exact scalar exponent m(B) for one-tile
/// rules, m(p) and m(q - r) for binary block rules, the catalogue similarity
/// when present, and the m_N ladder otherwise.
Verdict singularity_verdict(const CatalogueEntry& entry, const VerdictOptions& opts = {});
Verdict singularity_verdict(const InflationRule& rule, const VerdictOptions& opts = {});

/// Hermitian PSD H as a sum of mutually orthogonal rank-one PSD terms.
std::vector<Eigen::MatrixXcd> hermitian_rank_one_split(const Eigen::MatrixXcd& h);

}  // namespace renorm
