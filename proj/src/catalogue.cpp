#include "renorm/catalogue.hpp"

#include <cmath>
#include <regex>

#include <fmt/format.h>

namespace renorm {

double frank_robinson_lambda() { return 0.5 * (1.0 + std::sqrt(13.0)); }

namespace {

using Pos = std::pair<Rational, Rational>;  // c0 + c1 * generator

ExponentVector lam2(Pos x, Pos y) { return ExponentVector(2, 2, {x.first, x.second, y.first, y.second}); }

CatalogueEntry fibonacci() {
  CatalogueEntry e;
  e.name = "fibonacci";
  e.rule = realize_1d(SubstitutionRule1D::from_words({"ab", "a"}), e.name);
  e.notes = "a -> ab, b -> a; lengths (tau, 1)";
  return e;
}

CatalogueEntry abcd() {
  CatalogueEntry e;
  e.name = "abcd";
  e.rule = realize_1d(SubstitutionRule1D::from_words({"ab", "ca", "bd", "dc"}), e.name);
  Eigen::MatrixXcd u(4, 4);
  u << 1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1, -1, -1;
  e.similarity = 0.5 * u;
  e.reduced_block = {2, 3};
  e.notes = "a -> ab, b -> ca, c -> bd, d -> dc; U B U^-1 = diag(1+z, 1-z, [[-z,1],[1,z]])";
  return e;
}

CatalogueEntry block_fig1() {
  CatalogueEntry e;
  e.name = "block-fig1";
  InflationRule& r = e.rule;
  r.name = e.name;
  r.dim = 2;
  r.basis = FrequencyBasis::trivial();
  r.q = Expansion::diagonal(r.basis, {"3", "2"});
  r.tiles = {{"a", ExponentVector::integral({1, 1})}, {"b", ExponentVector::integral({1, 1})}};
  r.t.assign(2, std::vector<PointList>(2));
  auto p = [](std::int64_t x, std::int64_t y) { return ExponentVector::integral({x, y}); };
  // q = x^2 (1+y), r = y, s0 = 1 + x + x y, s1 = 0
  r.t[0][0] = {p(0, 0), p(1, 0), p(1, 1), p(2, 0), p(2, 1)};
  r.t[1][0] = {p(0, 1)};
  r.t[0][1] = {p(0, 0), p(1, 0), p(1, 1), p(0, 1)};
  r.t[1][1] = {p(2, 0), p(2, 1)};
  e.binary_block = true;
  e.notes = "binary block substitution, Q = diag(3,2)";
  return e;
}

CatalogueEntry frank_robinson() {
  CatalogueEntry e;
  e.name = "frank-robinson";
  InflationRule& r = e.rule;
  r.name = e.name;
  r.dim = 2;
  const double lam = frank_robinson_lambda();
  auto b = std::make_shared<FrequencyBasis>(std::vector<Generator>{{"1", 1.0, {}}, {"lambda", lam, {-3, -1, 1}}});
  RationalMatrix a(2, 2);
  a(0, 1) = 3;
  a(1, 0) = 1;
  a(1, 1) = 1;
  b->add_multiplier("lambda", a);
  r.basis = b;
  r.q = Expansion::diagonal(r.basis, {"lambda", "lambda"});
  const Pos one{1, 0}, L{0, 1};
  r.tiles = {{"large", lam2(L, L)}, {"horizontal", lam2(L, one)}, {"vertical", lam2(one, L)}, {"small", lam2(one, one)}};
  auto P = [](Rational c0, Rational c1) { return Pos{c0, c1}; };
  r.t.assign(4, std::vector<PointList>(4));
  // inflated large square, side lambda + 3
  r.t[0][0] = {lam2(P(2, 0), P(2, 0))};
  r.t[1][0] = {lam2(P(2, 0), P(0, 0)), lam2(P(2, 0), P(1, 0)), lam2(P(0, 0), P(2, 1))};
  r.t[2][0] = {lam2(P(0, 0), P(2, 0)), lam2(P(1, 0), P(2, 0)), lam2(P(2, 1), P(0, 0))};
  r.t[3][0] = {lam2(P(0, 0), P(0, 0)), lam2(P(1, 0), P(0, 0)), lam2(P(0, 0), P(1, 0)),
               lam2(P(1, 0), P(1, 0)), lam2(P(2, 1), P(0, 1)), lam2(P(0, 1), P(2, 1)),
               lam2(P(1, 1), P(2, 1)), lam2(P(2, 1), P(1, 1)), lam2(P(2, 1), P(2, 1))};
  // inflated horizontal rectangle, (lambda + 3) x lambda
  r.t[0][1] = {lam2(P(0, 0), P(0, 0))};
  r.t[2][1] = {lam2(P(0, 1), P(0, 0)), lam2(P(1, 1), P(0, 0)), lam2(P(2, 1), P(0, 0))};
  // inflated vertical rectangle, lambda x (lambda + 3)
  r.t[0][2] = {lam2(P(0, 0), P(0, 0))};
  r.t[1][2] = {lam2(P(0, 0), P(0, 1)), lam2(P(0, 0), P(1, 1)), lam2(P(0, 0), P(2, 1))};
  // inflated small square
  r.t[0][3] = {lam2(P(0, 0), P(0, 0))};
  e.notes =
      "Frank-Robinson stone inflation, Q = lambda I, lambda^2 = lambda + 3; type order (large, horizontal "
      "lambda x 1, vertical 1 x lambda, small); placements reconstructed from the Fourier matrix";
  return e;
}

bool small_rational(double a, Rational& out) {
  for (std::int64_t q = 1; q <= 64; ++q) {
    const double v = a * static_cast<double>(q);
    const double rv = std::round(v);
    if (std::abs(v - rv) < 1e-12 * static_cast<double>(q) * std::max(1.0, std::abs(a))) {
      out = Rational(static_cast<std::int64_t>(rv), q);
      return true;
    }
  }
  return false;
}

}  // namespace

CatalogueEntry staggered(int m, int n, const std::vector<double>& shifts_in) {
  if (m < 2 || n < 2) throw Error("staggered: M and N must be at least 2");
  std::vector<double> shifts = shifts_in;
  if (shifts.size() == static_cast<std::size_t>(m) && shifts.front() == 0.0) shifts.erase(shifts.begin());
  if (shifts.size() != static_cast<std::size_t>(m - 1))
    throw Error(fmt::format("staggered: expected {} shifts a_1..a_{}", m - 1, m - 1));
  for (double a : shifts)
    if (!std::isfinite(a)) throw Error("staggered: shifts must be finite");

  // generators for the irrational shifts
  std::vector<Generator> gens{{"1", 1.0, {}}};
  std::vector<std::pair<Rational, std::size_t>> shift_rep;  // rational part, generator index (0 = none)
  shift_rep.emplace_back(Rational(0), 0);                   // a_0
  for (double a : shifts) {
    Rational rq;
    if (small_rational(a, rq)) {
      shift_rep.emplace_back(rq, 0);
      continue;
    }
    std::size_t idx = 0;
    for (std::size_t g = 1; g < gens.size(); ++g)
      if (gens[g].approx == a) idx = g;
    if (idx == 0) {
      gens.push_back({fmt::format("a{}", gens.size()), a, {}});
      idx = gens.size() - 1;
    }
    shift_rep.emplace_back(Rational(0), idx);
  }

  CatalogueEntry e;
  std::string list;
  for (std::size_t i = 0; i < shifts.size(); ++i) list += (i ? "," : "") + fmt::format("{:.17g}", shifts[i]);
  e.name = fmt::format("staggered({},{},[{}])", m, n, list);
  InflationRule& r = e.rule;
  r.name = e.name;
  r.dim = 2;
  r.basis = gens.size() == 1 ? FrequencyBasis::trivial() : std::make_shared<const FrequencyBasis>(gens);
  r.q = Expansion::diagonal(r.basis, {std::to_string(m), std::to_string(n)});
  const std::size_t g = r.basis->size();
  ExponentVector unit(2, g);
  unit(0, 0) = 1;
  unit(1, 0) = 1;
  r.tiles = {{"square", unit}};
  r.t.assign(1, std::vector<PointList>(1));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      ExponentVector x(2, g);
      x(0, 0) = i;
      x(1, 0) = Rational(j) + shift_rep[i].first;
      if (shift_rep[i].second) x(1, shift_rep[i].second) = 1;
      r.t[0][0].push_back(x);
    }
  // shifted columns stick out of the inflated square
  r.stone = gens.size() == 1 && std::all_of(shift_rep.begin(), shift_rep.end(), [](const auto& s) {
              return s.first == 0;
            });
  e.notes = "staggered block substitution; a_0 = 0";
  return e;
}

CatalogueEntry builtin(const std::string& name) {
  if (name == "fibonacci") return fibonacci();
  if (name == "abcd") return abcd();
  if (name == "block-fig1") return block_fig1();
  if (name == "frank-robinson") return frank_robinson();
  static const std::regex stag(R"(staggered\(\s*(\d+)\s*,\s*(\d+)\s*(?:,\s*\[([^\]]*)\])?\s*\))");
  std::smatch mt;
  if (std::regex_match(name, mt, stag)) {
    const int m = std::stoi(mt[1]), n = std::stoi(mt[2]);
    std::vector<double> shifts;
    if (mt[3].matched) {
      std::string s = mt[3];
      std::size_t pos = 0;
      while (pos < s.size()) {
        std::size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        std::string tok = s.substr(pos, next - pos);
        if (tok.find_first_not_of(" \t") != std::string::npos) shifts.push_back(std::stod(tok));
        pos = next + 1;
      }
    }
    if (shifts.empty() && m > 1 && !mt[3].matched) shifts.assign(static_cast<std::size_t>(m - 1), 0.0);
    return staggered(m, n, shifts);
  }
  throw Error(fmt::format("unknown builtin rule '{}'", name));
}

std::vector<std::string> builtin_names() {
  return {"fibonacci", "abcd", "block-fig1", "staggered(M,N,[a1,...])", "frank-robinson"};
}

}  // namespace renorm
