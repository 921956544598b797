// renorm: command-line front end.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "CLI11.hpp"
#include "renorm/catalogue.hpp"
#include "renorm/correlations.hpp"
#include "renorm/fourier.hpp"
#include "renorm/lyapunov.hpp"
#include "renorm/mahler.hpp"
#include "renorm/parallel.hpp"
#include "renorm/riesz.hpp"
#include "renorm/rule_io.hpp"

#ifndef RENORM_VERSION
#define RENORM_VERSION "dev"
#endif

using namespace renorm;

namespace {

constexpr int kOk = 0, kError = 1, kInconclusive = 2;

struct Globals {
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 0;
  std::string output;
};

std::string g9(double x) { return fmt::format("{:.9g}", x); }

// writes to --output or stdout; the header carries version, seed and parameters
class Sink {
 public:
  Sink(const Globals& g, const std::string& command, const std::vector<std::pair<std::string, std::string>>& params) {
    if (!g.output.empty()) {
      file_.open(g.output);
      if (!file_) throw Error(fmt::format("cannot write '{}'", g.output));
    }
    std::string p;
    for (const auto& [k, v] : params) p += fmt::format(" {}={}", k, v);
    out() << fmt::format("# renorm {} {} seed={}{}\n", RENORM_VERSION, command, g.seed, p);
  }
  std::ostream& out() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  void comment(const std::string& s) { out() << "# " << s << '\n'; }
  void row(const std::string& s) { out() << s << '\n'; }

 private:
  std::ofstream file_;
};

struct Source {
  InflationRule rule;
  std::optional<CatalogueEntry> entry;
};

Source load_source(const std::string& s) {
  constexpr std::string_view prefix = "builtin:";
  if (s.rfind(prefix, 0) == 0) {
    auto e = builtin(s.substr(prefix.size()));
    return {e.rule, e};
  }
  return {load_rule_file(s), std::nullopt};
}

std::string rational_str(const Rational& r) {
  return r.denominator() == 1 ? std::to_string(r.numerator()) : fmt::format("{}/{}", r.numerator(), r.denominator());
}

std::string coeffs_str(const ExponentVector& z) {
  std::vector<std::string> parts;
  for (std::size_t j = 0; j < z.dim(); ++j) {
    std::vector<std::string> c;
    for (std::size_t r = 0; r < z.gens(); ++r) c.push_back(rational_str(z(j, r)));
    parts.push_back(fmt::format("({})", fmt::join(c, " ")));
  }
  return fmt::format("{}", fmt::join(parts, " "));
}

// ---------------------------------------------------------------- commands

int cmd_rule_validate(const Globals& g, const std::string& src) {
  auto s = load_source(src);
  const auto m = substitution_matrix(s.rule);
  std::string why;
  const bool primitive = is_primitive(m, &why);
  Sink sink(g, "rule validate", {{"rule", src}});
  sink.row("key,value");
  sink.row(fmt::format("name,{}", s.rule.name));
  sink.row(fmt::format("dimension,{}", s.rule.dim));
  sink.row(fmt::format("types,{}", s.rule.size()));
  sink.row(fmt::format("det_Q,{}", g9(s.rule.q.abs_det())));
  sink.row(fmt::format("primitive,{}", primitive ? "true" : "false"));
  bool ok = primitive;
  if (!primitive) sink.row(fmt::format("primitive_reason,{}", why));
  if (primitive) {
    const auto pf = pf_data(m);
    sink.row(fmt::format("lambda_PF,{}", g9(pf.lambda)));
    for (Eigen::Index i = 0; i < pf.frequencies.size(); ++i)
      sink.row(fmt::format("frequency[{}],{}", s.rule.tiles[static_cast<std::size_t>(i)].label, g9(pf.frequencies(i))));
  }
  if (s.rule.stone) {
    const auto rep = validate_stone_inflation(s.rule);
    sink.row(fmt::format("stone_volume,{}", rep.volume_ok));
    sink.row(fmt::format("stone_disjoint,{}", rep.disjoint_ok));
    sink.row(fmt::format("stone_contained,{}", rep.contained_ok));
    for (const auto& p : rep.problems) sink.comment(p);
    ok = ok && rep.ok();
  } else {
    sink.comment("not a stone inflation: only counts and volumes are checked");
  }
  return ok ? kOk : kError;
}

int cmd_catalogue_export(const Globals& g, const std::string& name) {
  const auto j = rule_to_json(builtin(name).rule).dump(2);
  if (g.output.empty()) {
    std::cout << j << '\n';
  } else {
    std::ofstream f(g.output);
    if (!f) throw Error(fmt::format("cannot write '{}'", g.output));
    f << j << '\n';
  }
  return kOk;
}

int cmd_fourier_det(const Globals& g, const std::string& src) {
  auto s = load_source(src);
  const auto b = fourier_matrix(s.rule);
  Sink sink(g, "fourier det", {{"rule", src}});
  sink.comment("B(k) =");
  std::istringstream lines(b.to_string());
  for (std::string line; std::getline(lines, line);) sink.comment("  " + line);
  const auto det = det_polynomial(b);
  sink.row(fmt::format("det,{}", det.is_zero() ? "0" : det.to_string()));
  if (s.entry && s.entry->similarity) {
    const auto u = apply_similarity(b, *s.entry->similarity);
    sink.comment("U B U^-1 =");
    std::istringstream ul(u.to_string());
    for (std::string line; std::getline(ul, line);) sink.comment("  " + line);
  }
  return kOk;
}

LadderPath parse_path(const std::string& p) {
  if (p == "auto") return LadderPath::Auto;
  if (p == "roots") return LadderPath::Roots;
  if (p == "circle") return LadderPath::CircleQuadrature;
  if (p == "torus") return LadderPath::Torus;
  throw Error(fmt::format("unknown ladder path '{}'", p));
}

FourierMatrix ladder_matrix(const Source& s, bool reduce) {
  auto b = fourier_matrix(s.rule);
  if (reduce && s.entry && s.entry->similarity && !s.entry->reduced_block.empty())
    return apply_similarity(b, *s.entry->similarity).block(s.entry->reduced_block);
  return b;
}

void write_ladder(Sink& sink, const BoundLadder& l) {
  sink.comment(fmt::format("convention={}", to_string(l.convention)));
  sink.row("N,mN,err,method");
  for (const auto& r : l.rows) sink.row(fmt::format("{},{},{},{}", r.n, g9(r.m), g9(r.error), to_string(r.method)));
}

int cmd_lyapunov_bound(const Globals& g, const std::string& src, int max_n, const std::string& path, double tol,
                       bool reduce) {
  auto s = load_source(src);
  LadderOptions lo;
  lo.max_n = max_n;
  lo.path = parse_path(path);
  lo.qmc.tol = tol;
  lo.qmc.seed = g.seed;
  const auto l = upper_bound_ladder(ladder_matrix(s, reduce), lo);
  Sink sink(g, "lyapunov bound",
            {{"rule", src}, {"max_n", std::to_string(max_n)}, {"path", path}, {"tol", g9(tol)}, {"reduce", reduce ? "1" : "0"}});
  write_ladder(sink, l);
  return kOk;
}

int cmd_lyapunov_birkhoff(const Globals& g, const std::string& src, std::size_t samples, int iters, bool reduce) {
  auto s = load_source(src);
  BirkhoffOptions bo;
  bo.samples = samples;
  bo.iterations = iters;
  bo.seed = g.seed;
  const auto est = birkhoff_exponent(ladder_matrix(s, reduce), bo);
  Sink sink(g, "lyapunov birkhoff",
            {{"rule", src}, {"samples", std::to_string(samples)}, {"iters", std::to_string(iters)}, {"reduce", reduce ? "1" : "0"}});
  sink.comment(fmt::format("chi_hat={} std_error={}", g9(est.value), g9(est.std_error)));
  sink.row("sampleIndex,k,estimate");
  for (std::size_t i = 0; i < est.per_sample.size(); ++i) {
    std::vector<std::string> k;
    for (double x : est.starts[i]) k.push_back(g9(x));
    sink.row(fmt::format("{},{},{}", i, fmt::join(k, " "), g9(est.per_sample[i])));
  }
  return kOk;
}

int cmd_verdict(const Globals& g, const std::string& src, int max_n) {
  auto s = load_source(src);
  VerdictOptions vo;
  vo.max_n = max_n;
  vo.qmc.seed = g.seed;
  const auto v = s.entry ? singularity_verdict(*s.entry, vo) : singularity_verdict(s.rule, vo);
  Sink sink(g, "verdict", {{"rule", src}, {"max_n", std::to_string(max_n)}});
  sink.row("key,value");
  sink.row(fmt::format("conclusion,{}", to_string(v.conclusion)));
  if (v.conclusion != Conclusion::Inapplicable) {
    sink.row(fmt::format("convention,{}", to_string(v.convention)));
    sink.row(fmt::format("bound,{}", g9(v.bound)));
    sink.row(fmt::format("error,{}", g9(v.error)));
    sink.row(fmt::format("threshold,{}", g9(v.threshold)));
    sink.row(fmt::format("margin,{}", g9(v.margin)));
    sink.row(fmt::format("method,\"{}\"", v.method));
  }
  sink.row(fmt::format("explanation,\"{}\"", v.explanation));
  return v.conclusion == Conclusion::Singular ? kOk : kInconclusive;
}

int cmd_correlate(const Globals& g, const std::string& src, int level, double range, int seed_tile, bool residual) {
  auto s = load_source(src);
  const auto patch = inflate_patch(s.rule, seed_tile, level);
  const double counted = residual ? required_correlation_range(s.rule, range) : range;
  const auto corr = empirical_pair_correlation(s.rule, patch, counted);
  Sink sink(g, "correlate",
            {{"rule", src}, {"level", std::to_string(level)}, {"range", g9(range)}, {"seed_tile", std::to_string(seed_tile)}});
  sink.comment(fmt::format("tiles={} window_points={} counted_range={}", patch.tiles.size(), corr.window_points, g9(counted)));
  if (residual) {
    const auto rep = renormalisation_residual(s.rule, corr, range);
    sink.comment(fmt::format("residual={} at i={} j={} z=[{}] lhs={} rhs={} evaluated={}", g9(rep.max_residual), rep.i,
                             rep.j, coeffs_str(rep.z), g9(rep.lhs), g9(rep.rhs), rep.evaluated));
  }
  sink.row("i,j,z_coeffs,z_float,nu");
  for (const auto& [key, nu] : corr.nu) {
    const auto& [i, j, z] = key;
    std::vector<std::string> zf;
    for (double x : z.real_value(*s.rule.basis)) zf.push_back(g9(x));
    sink.row(fmt::format("{},{},{},{},{}", i, j, coeffs_str(z), fmt::join(zf, " "), g9(nu)));
  }
  return kOk;
}

RieszDensity parse_family(const std::string& f) {
  const auto colon = f.find(':');
  const std::string kind = f.substr(0, colon), arg = colon == std::string::npos ? "" : f.substr(colon + 1);
  if (kind == "fejer") return RieszDensity::fejer(arg.empty() ? 2 : std::stoi(arg));
  if (kind == "staggered-square") return RieszDensity::staggered_square(arg.empty() ? 0.0 : std::stod(arg));
  if (kind == "supertile") {
    // supertile:<rule source>[#type]
    const auto hash = arg.rfind('#');
    const int type = hash == std::string::npos ? 0 : std::stoi(arg.substr(hash + 1));
    return RieszDensity::supertile(load_source(arg.substr(0, hash)).rule, type);
  }
  throw Error(fmt::format("unknown density family '{}' (fejer:M, staggered-square:a, supertile:<rule>[#type])", f));
}

int cmd_riesz(const Globals& g, const std::string& family, int depth, std::size_t grid, double k1, double k2) {
  const auto f = parse_family(family);
  Sink sink(g, "riesz", {{"family", family}, {"depth", std::to_string(depth)}, {"grid", std::to_string(grid)},
                         {"k1", g9(k1)}, {"k2", g9(k2)}});
  const double need = f.frequency(depth) * 2.0;
  if (f.dim() == 1) {
    if (static_cast<double>(grid) / k1 < need)
      sink.comment(fmt::format("warning: grid below the Nyquist rate of the finest factor ({} nodes per unit)", need));
    sink.row("k1,density");
    for (std::size_t i = 0; i <= grid; ++i) {
      const double k[1] = {k1 * static_cast<double>(i) / static_cast<double>(grid)};
      sink.row(fmt::format("{},{}", g9(k[0]), g9(f(depth, k))));
    }
    return kOk;
  }
  if (static_cast<double>(grid) / std::max(k1, k2) < need)
    sink.comment(fmt::format("warning: grid below the Nyquist rate of the finest factor ({} nodes per unit)", need));
  const auto d = distribution_function(f, depth, k1, k2, grid);
  sink.row("k1,k2,density,F");
  for (std::size_t i = 0; i <= grid; ++i)
    for (std::size_t j = 0; j <= grid; ++j)
      sink.row(fmt::format("{},{},{},{}", g9(k1 * static_cast<double>(i) / static_cast<double>(grid)),
                           g9(k2 * static_cast<double>(j) / static_cast<double>(grid)), g9(d.density_at(i, j)),
                           g9(d.at(i, j))));
  return kOk;
}

// ---------------------------------------------------------------- reproductions

int reproduce_table1(const Globals& g, int max_n) {
  auto e = builtin("abcd");
  const auto red = apply_similarity(fourier_matrix(e.rule), *e.similarity).block(e.reduced_block);
  LadderOptions lo;
  lo.max_n = max_n;
  lo.path = LadderPath::Roots;
  const auto l = upper_bound_ladder(red, lo);
  Sink sink(g, "reproduce table1", {{"max_n", std::to_string(max_n)}});
  sink.comment("m_N = m(p_N) / (2N) for the reduced 2x2 block of the abcd Fourier matrix");
  write_ladder(sink, l);
  return kOk;
}

int reproduce_fig3(const Globals& g, int max_n, double tol, std::size_t samples, int iters) {
  const auto b = fourier_matrix(builtin("frank-robinson").rule);
  LadderOptions lo;
  lo.max_n = max_n;
  lo.path = LadderPath::Torus;
  lo.qmc.tol = tol;
  lo.qmc.seed = g.seed;
  const auto l = upper_bound_ladder(b, lo);
  BirkhoffOptions bo;
  bo.samples = samples;
  bo.iterations = iters;
  bo.seed = g.seed;
  const auto est = birkhoff_exponent(b, bo);
  const double lam = frank_robinson_lambda();
  const double thr = 2.0 * std::log(lam);
  Sink sink(g, "reproduce fig3", {{"max_n", std::to_string(max_n)}, {"tol", g9(tol)}, {"samples", std::to_string(samples)},
                                  {"iters", std::to_string(iters)}});
  sink.comment(fmt::format("threshold 2 log lambda = {}", g9(thr)));
  sink.comment(fmt::format("birkhoff 2 chi_hat = {} +- {}", g9(2 * est.value), g9(2 * est.std_error)));
  write_ladder(sink, l);
  const auto& last = l.rows.back();
  const bool singular = last.m + last.error < thr;
  sink.comment(fmt::format("m_{} = {} vs {}: {}", last.n, g9(last.m), g9(thr),
                           singular ? "singular" : "inconclusive (ladder still decreasing)"));
  return singular ? kOk : kInconclusive;
}

int reproduce_mahler_1xy(const Globals& g) {
  const auto p = GenTrigPoly::from_terms(2, FrequencyBasis::trivial(),
                                         {{ExponentVector::integral({0, 0}), 1.0},
                                          {ExponentVector::integral({1, 0}), 1.0},
                                          {ExponentVector::integral({0, 1}), 1.0}});
  QmcOptions qo;
  qo.seed = g.seed;
  const auto m = mahler_multivariate(p, qo);
  const double quad = 2.0 * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                                [](double t) { return std::log(2.0 * std::cos(std::numbers::pi * t)); }, 0.0, 1.0 / 3.0,
                                15, 1e-14);
  Sink sink(g, "reproduce mahler-1xy", {});
  sink.row("quantity,value");
  sink.row(fmt::format("m(1+x+y),{}", g9(m.value)));
  sink.row(fmt::format("error,{}", g9(m.error)));
  sink.row(fmt::format("method,{}", to_string(m.method)));
  sink.row(fmt::format("quadrature,{}", g9(quad)));
  sink.row(fmt::format("difference,{}", g9(std::abs(m.value - quad))));
  return kOk;
}

int reproduce_fejer(const Globals& g, int max_m, int depth) {
  Sink sink(g, "reproduce fejer", {{"max_m", std::to_string(max_m)}, {"depth", std::to_string(depth)}});
  sink.row("M,n,weights_exact,max_transform_gap,unit_mass");
  std::mt19937_64 rng(g.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int m = 2; m <= max_m; ++m)
    for (int n = 0; n <= depth; ++n) {
      const auto comb = riesz_product_comb(m, n);
      const auto mn = static_cast<std::int64_t>(std::llround(std::pow(m, n)));
      bool exact = comb.size() == static_cast<std::size_t>(2 * mn - 1);
      for (std::int64_t l = 1 - mn; l < mn && exact; ++l)
        exact = comb.weight(ExponentVector::integral({l})) == Rational(mn - std::abs(l), mn);
      const auto f = RieszDensity::fejer(m);
      const auto poly = fourier_polynomial(comb);
      double gap = 0.0;
      for (int s = 0; s < 1000; ++s) {
        const double k[1] = {u(rng)};
        gap = std::max(gap, std::abs(poly.evaluate(k) - Complex(f(n, k))));
      }
      const auto mass = integrate_density(f, n, 0.0, 1.0, 2 * static_cast<std::size_t>(mn) + 2);
      sink.row(fmt::format("{},{},{},{},{}", m, n, exact ? "true" : "false", g9(gap), g9(mass.value)));
    }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"renorm: diffraction of inflation tilings via renormalisation"};
  app.set_version_flag("--version", std::string(RENORM_VERSION));
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "random seed (fixed default)")->capture_default_str();
  app.add_option("--workers", g.workers, "worker threads (default: RENORM_WORKERS or all cores)");
  app.add_option("-o,--output", g.output, "output file (default: stdout)");

  std::string src, name, path = "auto", family = "fejer:2", what;
  int max_n = 6, level = 8, seed_tile = 0, iters = 2000, depth = 8;
  std::size_t samples = 64, grid = 256;
  double tol = 1e-4, range = 5.0, k1 = 1.0, k2 = 1.0;
  bool reduce = false, residual = false;
  int status = kOk;

  auto* rule = app.add_subcommand("rule", "rule files");
  rule->require_subcommand(1);
  auto* validate = rule->add_subcommand("validate", "primitivity, PF data and stone-inflation checks");
  validate->add_option("rule", src, "rule file or builtin:<name>")->required();
  validate->callback([&] { status = cmd_rule_validate(g, src); });

  auto* cat = app.add_subcommand("catalogue", "built-in rules");
  cat->require_subcommand(1);
  auto* exp = cat->add_subcommand("export", "write a built-in rule as rule-file JSON");
  exp->add_option("name", name, "fibonacci, abcd, block-fig1, frank-robinson, staggered(M,N,[a1,...])")->required();
  exp->callback([&] { status = cmd_catalogue_export(g, name); });
  cat->add_subcommand("list", "list built-in rule names")->callback([&] {
    for (const auto& n : builtin_names()) std::cout << n << '\n';
  });

  auto* fourier = app.add_subcommand("fourier", "Fourier matrix");
  fourier->require_subcommand(1);
  auto* det = fourier->add_subcommand("det", "B(k) and det B(k)");
  det->add_option("rule", src)->required();
  det->callback([&] { status = cmd_fourier_det(g, src); });

  auto* lyap = app.add_subcommand("lyapunov", "Lyapunov exponents");
  lyap->require_subcommand(1);
  auto* bound = lyap->add_subcommand("bound", "upper-bound ladder m_N");
  bound->add_option("rule", src)->required();
  bound->add_option("--max-n", max_n)->capture_default_str();
  bound->add_option("--path", path, "auto|roots|circle|torus")->capture_default_str();
  bound->add_option("--tol", tol, "QMC tolerance on the torus path")->capture_default_str();
  bound->add_flag("--reduce", reduce, "use the catalogue similarity and reduced block");
  bound->callback([&] { status = cmd_lyapunov_bound(g, src, max_n, path, tol, reduce); });
  auto* birk = lyap->add_subcommand("birkhoff", "Birkhoff averages along exact orbits");
  birk->add_option("rule", src)->required();
  birk->add_option("--samples", samples)->capture_default_str();
  birk->add_option("--iters", iters)->capture_default_str();
  birk->add_option("--seed", g.seed)->capture_default_str();
  birk->add_flag("--reduce", reduce, "use the catalogue similarity and reduced block");
  birk->callback([&] { status = cmd_lyapunov_birkhoff(g, src, samples, iters, reduce); });

  auto* verdict = app.add_subcommand("verdict", "absence of absolutely continuous diffraction");
  verdict->add_option("rule", src)->required();
  int verdict_n = 0;
  verdict->add_option("--max-n", verdict_n, "ladder depth (0: default)");
  verdict->callback([&] { status = cmd_verdict(g, src, verdict_n); });

  auto* corr = app.add_subcommand("correlate", "pair correlations of a supertile patch");
  corr->add_option("rule", src)->required();
  corr->add_option("--level", level)->capture_default_str();
  corr->add_option("--range", range)->capture_default_str();
  corr->add_option("--seed-tile", seed_tile)->capture_default_str();
  corr->add_flag("--residual", residual, "also evaluate the renormalisation identity up to --range");
  corr->callback([&] { status = cmd_correlate(g, src, level, range, seed_tile, residual); });

  auto* riesz = app.add_subcommand("riesz", "Riesz product densities and distribution functions");
  riesz->add_option("--family", family, "fejer:M | staggered-square:a | supertile:<rule>[#type]")->capture_default_str();
  riesz->add_option("--depth", depth)->capture_default_str();
  riesz->add_option("--grid", grid)->capture_default_str();
  riesz->add_option("--k1", k1)->capture_default_str();
  riesz->add_option("--k2", k2)->capture_default_str();
  riesz->callback([&] { status = cmd_riesz(g, family, depth, grid, k1, k2); });

  auto* rep = app.add_subcommand("reproduce", "published computations");
  int rep_n = 0;
  rep->add_option("what", what, "table1 | fig3 | mahler-1xy | fejer")
      ->required()
      ->check(CLI::IsMember({"table1", "fig3", "mahler-1xy", "fejer"}));
  rep->add_option("--max-n", rep_n, "ladder depth (table1: 12, fig3: 6)");
  rep->add_option("--tol", tol)->capture_default_str();
  rep->add_option("--samples", samples)->capture_default_str();
  rep->add_option("--iters", iters)->capture_default_str();
  rep->add_option("--depth", depth, "fejer: largest n")->capture_default_str();
  rep->callback([&] {
    if (what == "table1") status = reproduce_table1(g, rep_n > 0 ? rep_n : 12);
    if (what == "fig3") status = reproduce_fig3(g, rep_n > 0 ? rep_n : 6, tol > 1e-4 ? tol : 2e-3, samples, iters);
    if (what == "mahler-1xy") status = reproduce_mahler_1xy(g);
    if (what == "fejer") status = reproduce_fejer(g, 3, std::min(depth, 6));
  });

  app.parse_complete_callback([&] {
    if (g.workers > 0) set_worker_count(g.workers);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kError;
  } catch (const std::exception& e) {
    std::cerr << "renorm: error: " << e.what() << '\n';
    return kError;
  }
  return status;
}
