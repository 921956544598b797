#include "renorm/rule_io.hpp"

#include <fstream>

#include <fmt/format.h>

#include "renorm/catalogue.hpp"
#include "renorm/measures.hpp"

namespace renorm {

using nlohmann::json;

namespace {

json rational_to_json(const Rational& r) { return {r.numerator(), r.denominator()}; }

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw Error(fmt::format("{}: {}", path, what)); }

const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

std::string sub(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }
std::string sub(const std::string& path, std::size_t i) { return fmt::format("{}[{}]", path, i); }

const json& array_at(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

Rational rational_at(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer()) {
    const auto den = j[1].get<std::int64_t>();
    if (den == 0) fail(path, "zero denominator");
    return Rational(j[0].get<std::int64_t>(), den);
  }
  if (j.is_number_float()) return snap_to_grid(j.get<double>());
  fail(path, "expected a rational [num, den]");
}

RationalMatrix matrix_at(const json& j, std::size_t n, const std::string& path) {
  array_at(j, path);
  if (j.size() != n) fail(path, fmt::format("expected {} rows", n));
  RationalMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = array_at(j[r], sub(path, r));
    if (row.size() != n) fail(sub(path, r), fmt::format("expected {} entries", n));
    for (std::size_t c = 0; c < n; ++c) m(r, c) = rational_at(row[c], sub(sub(path, r), c));
  }
  return m;
}

ExponentVector point_at(const json& j, std::size_t dim, std::size_t gens, const std::string& path) {
  ExponentVector e;
  try {
    e = exponent_from_json(j, gens);
  } catch (const Error& err) {
    fail(path, err.what());
  } catch (const json::exception& err) {
    fail(path, err.what());
  }
  if (e.dim() != dim) fail(path, fmt::format("expected {} coordinates, got {}", dim, e.dim()));
  return e;
}

BasisPtr basis_from_json(const json& j, const std::string& path) {
  std::vector<Generator> gens;
  const auto& list = array_at(field(j, "generators", path), sub(path, "generators"));
  for (std::size_t r = 0; r < list.size(); ++r) {
    const std::string p = sub(sub(path, "generators"), r);
    Generator g;
    const auto& approx = field(list[r], "approx", p);
    if (!approx.is_number()) fail(sub(p, "approx"), "expected a number");
    g.approx = approx.get<double>();
    g.name = list[r].value("name", r == 0 && g.approx == 1.0 ? std::string("1") : fmt::format("g{}", r));
    if (auto it = list[r].find("minpoly"); it != list[r].end()) {
      array_at(*it, sub(p, "minpoly"));
      for (std::size_t c = 0; c < it->size(); ++c) {
        if (!(*it)[c].is_number_integer()) fail(sub(sub(p, "minpoly"), c), "expected an integer");
        g.minpoly.push_back((*it)[c].get<std::int64_t>());
      }
    }
    gens.push_back(std::move(g));
  }
  const bool independent = j.value("independent", true);
  std::shared_ptr<FrequencyBasis> basis;
  try {
    basis = std::make_shared<FrequencyBasis>(std::move(gens), independent);
  } catch (const Error& err) {
    fail(sub(path, "generators"), err.what());
  }
  if (auto it = j.find("multipliers"); it != j.end()) {
    if (!it->is_object()) fail(sub(path, "multipliers"), "expected an object");
    for (const auto& [name, mat] : it->items()) {
      const std::string p = sub(sub(path, "multipliers"), name.c_str());
      try {
        basis->add_multiplier(name, matrix_at(mat, basis->size(), p));
      } catch (const Error& err) {
        const std::string what = err.what();
        if (what.rfind(p, 0) == 0) throw;
        fail(p, what);
      }
    }
  }
  return basis;
}

}  // namespace

json rule_to_json(const InflationRule& rule) {
  const auto& basis = *rule.basis;
  json gens = json::array();
  for (const auto& g : basis.generators()) {
    json e = {{"name", g.name}, {"approx", g.approx}};
    if (!g.minpoly.empty()) e["minpoly"] = g.minpoly;
    gens.push_back(e);
  }
  json mults = json::object();
  for (const auto& m : basis.multipliers()) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.action.rows(); ++r) {
      json row = json::array();
      for (std::size_t c = 0; c < m.action.cols(); ++c) row.push_back(rational_to_json(m.action(r, c)));
      rows.push_back(row);
    }
    mults[m.name] = rows;
  }
  json expansion;
  if (!rule.q.factor_names().empty()) {
    expansion["factors"] = rule.q.factor_names();
  } else {
    const std::size_t m = basis.size();
    json rows = json::array();
    for (std::size_t r = 0; r < rule.dim; ++r) {
      json row = json::array();
      for (std::size_t c = 0; c < rule.dim; ++c) row.push_back(rational_to_json(rule.q.action()(r * m, c * m)));
      rows.push_back(row);
    }
    expansion["matrix"] = rows;
  }
  json tiles = json::array();
  for (const auto& t : rule.tiles) tiles.push_back({{"label", t.label}, {"edges", exponent_to_json(t.edges)}});
  json disp = json::array();
  for (const auto& row : rule.t) {
    json r = json::array();
    for (const auto& pts : row) {
      json list = json::array();
      for (const auto& p : pts) list.push_back(exponent_to_json(p));
      r.push_back(list);
    }
    disp.push_back(r);
  }
  json out = {{"name", rule.name},
              {"dimension", rule.dim},
              {"basis", {{"generators", gens}, {"independent", basis.independent()}, {"multipliers", mults}}},
              {"expansion", expansion},
              {"prototiles", tiles},
              {"displacements", disp},
              {"stone", rule.stone}};
  if (rule.symbolic) out["symbolic"] = {{"images", rule.symbolic->words()}};
  return out;
}

InflationRule rule_from_json(const json& j) {
  if (!j.is_object()) fail("(root)", "expected an object");
  std::optional<SubstitutionRule1D> symbolic;
  if (auto it = j.find("symbolic"); it != j.end()) {
    const auto& images = array_at(field(*it, "images", "symbolic"), "symbolic.images");
    std::vector<std::string> words;
    for (std::size_t i = 0; i < images.size(); ++i) {
      if (!images[i].is_string()) fail(sub("symbolic.images", i), "expected a string");
      words.push_back(images[i].get<std::string>());
    }
    try {
      symbolic = SubstitutionRule1D::from_words(words);
      symbolic->validate();
    } catch (const Error& err) {
      fail("symbolic.images", err.what());
    }
  }
  const std::string name = j.value("name", std::string("rule"));
  if (!j.contains("prototiles") && !j.contains("displacements")) {
    if (!symbolic) fail("displacements", "missing (and no symbolic images given)");
    try {
      return realize_1d(*symbolic, name);
    } catch (const Error& err) {
      fail("symbolic", err.what());
    }
  }

  InflationRule rule;
  rule.name = name;
  const auto& dim = field(j, "dimension", "");
  if (!dim.is_number_integer() || dim.get<std::int64_t>() < 1) fail("dimension", "expected a positive integer");
  rule.dim = dim.get<std::size_t>();
  rule.basis = j.contains("basis") ? basis_from_json(j["basis"], "basis") : FrequencyBasis::trivial();
  const std::size_t m = rule.basis->size();

  const auto& ex = field(j, "expansion", "");
  try {
    if (ex.contains("factors")) {
      const auto& f = array_at(ex["factors"], "expansion.factors");
      std::vector<std::string> names;
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (!f[i].is_string() && !f[i].is_number_integer()) fail(sub("expansion.factors", i), "expected a name");
        names.push_back(f[i].is_string() ? f[i].get<std::string>() : std::to_string(f[i].get<std::int64_t>()));
      }
      if (names.size() != rule.dim) fail("expansion.factors", fmt::format("expected {} factors", rule.dim));
      rule.q = Expansion::diagonal(rule.basis, names);
    } else if (ex.contains("matrix")) {
      rule.q = Expansion::matrix(rule.basis, matrix_at(ex["matrix"], rule.dim, "expansion.matrix"));
    } else {
      fail("expansion", "needs \"factors\" or \"matrix\"");
    }
  } catch (const Error& err) {
    const std::string what = err.what();
    if (what.rfind("expansion", 0) == 0) throw;
    fail("expansion", what);
  }

  const auto& tiles = array_at(field(j, "prototiles", ""), "prototiles");
  if (tiles.empty()) fail("prototiles", "at least one prototile is required");
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    const std::string p = sub("prototiles", i);
    Prototile t;
    t.label = tiles[i].value("label", fmt::format("t{}", i));
    t.edges = point_at(field(tiles[i], "edges", p), rule.dim, m, sub(p, "edges"));
    rule.tiles.push_back(std::move(t));
  }
  const std::size_t l = rule.tiles.size();
  const auto& disp = array_at(field(j, "displacements", ""), "displacements");
  if (disp.size() != l) fail("displacements", fmt::format("expected {} rows", l));
  rule.t.assign(l, std::vector<PointList>(l));
  for (std::size_t i = 0; i < l; ++i) {
    const std::string pi = sub("displacements", i);
    const auto& row = array_at(disp[i], pi);
    if (row.size() != l) fail(pi, fmt::format("expected {} columns", l));
    for (std::size_t c = 0; c < l; ++c) {
      const std::string pc = sub(pi, c);
      const auto& pts = array_at(row[c], pc);
      for (std::size_t k = 0; k < pts.size(); ++k) rule.t[i][c].push_back(point_at(pts[k], rule.dim, m, sub(pc, k)));
    }
  }
  rule.stone = j.value("stone", true);
  rule.symbolic = symbolic;
  try {
    rule.check_shape();
  } catch (const Error& err) {
    fail("(rule)", err.what());
  }
  return rule;
}

InflationRule load_rule_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open rule file '{}'", path));
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& err) {
    throw Error(fmt::format("{}: malformed JSON: {}", path, err.what()));
  }
  return rule_from_json(j);
}

void save_rule_file(const InflationRule& rule, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(fmt::format("cannot write '{}'", path));
  out << rule_to_json(rule).dump(2) << '\n';
}

InflationRule load_rule_source(const std::string& source) {
  constexpr std::string_view prefix = "builtin:";
  if (source.rfind(prefix, 0) == 0) return builtin(source.substr(prefix.size())).rule;
  return load_rule_file(source);
}

}  // namespace renorm
