#pragma once

// Rule files (JSON). Rationals are [num, den]; points are per-coordinate
// lists of generator coefficients. A 1D rule may give "symbolic" images
// instead of prototiles and displacements.
//
// {"name", "dimension",
//  "basis": {"generators": [{"name", "approx", "minpoly"}], "independent",
//            "multipliers": {"<name>": [[rational...]...]}},
//  "expansion": {"factors": ["<name>", ...]} | {"matrix": [[rational...]...]},
//  "prototiles": [{"label", "edges": point}],
//  "displacements": [[[point...]...]...],   // [i][j]: tiles i inside Q(t_j)
//  "symbolic": {"images": ["ab", "a"]}, "stone": bool}

#include <string>

#include "json.hpp"
#include "renorm/inflation.hpp"

namespace renorm {

nlohmann::json rule_to_json(const InflationRule& rule);

/// Errors name the offending field, e.g. "displacements[1][0][2]: ...".
InflationRule rule_from_json(const nlohmann::json& j);

InflationRule load_rule_file(const std::string& path);
void save_rule_file(const InflationRule& rule, const std::string& path);

/// "builtin:<name>" or a path to a rule file.
InflationRule load_rule_source(const std::string& source);

}  // namespace renorm
