#include "renorm/measures.hpp"

namespace renorm {

nlohmann::json exponent_to_json(const ExponentVector& e) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t j = 0; j < e.dim(); ++j) {
    nlohmann::json coord = nlohmann::json::array();
    for (std::size_t r = 0; r < e.gens(); ++r) coord.push_back({e(j, r).numerator(), e(j, r).denominator()});
    out.push_back(coord);
  }
  return out;
}

namespace {

Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer()) {
    const auto den = j[1].get<std::int64_t>();
    if (den == 0) throw Error("rational with zero denominator");
    return Rational(j[0].get<std::int64_t>(), den);
  }
  if (j.is_number_float()) return snap_to_grid(j.get<double>());
  throw Error("expected a rational [num, den]");
}

}  // namespace

ExponentVector exponent_from_json(const nlohmann::json& j, std::size_t gens) {
  if (!j.is_array()) throw Error("point must be an array of coordinates");
  ExponentVector e(j.size(), gens);
  for (std::size_t c = 0; c < j.size(); ++c) {
    const auto& coord = j[c];
    // a bare number or a single [num, den] is a coefficient on the unit generator
    const bool single = coord.is_array() && gens == 1 && coord.size() == 2 && coord[0].is_number_integer();
    if (!coord.is_array() || single) {
      e(c, 0) = rational_from_json(coord);
      continue;
    }
    if (coord.size() != gens) throw Error("point coordinate has the wrong number of generator coefficients");
    for (std::size_t r = 0; r < gens; ++r) e(c, r) = rational_from_json(coord[r]);
  }
  return e;
}

nlohmann::json to_json(const DiracComb& c) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& [x, w] : c.atoms())
    atoms.push_back({{"point", exponent_to_json(x)}, {"weight", {w.real(), w.imag()}}});
  return {{"dimension", c.dim()}, {"atoms", atoms}};
}

DiracComb comb_from_json(const nlohmann::json& j, BasisPtr basis) {
  if (!basis) basis = FrequencyBasis::trivial();
  const auto dim = j.at("dimension").get<std::size_t>();
  DiracComb c(dim, basis);
  for (const auto& a : j.at("atoms")) {
    auto x = exponent_from_json(a.at("point"), basis->size());
    if (x.dim() != dim) throw Error("atom point has the wrong dimension");
    const auto& w = a.at("weight");
    c.add(x, Complex(w.at(0).get<double>(), w.at(1).get<double>()));
  }
  return c;
}

}  // namespace renorm
