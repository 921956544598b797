#pragma once

#include <optional>
#include <string>
#include <vector>

#include "renorm/algebraic.hpp"
#include "renorm/trigpoly.hpp"

namespace renorm {

/// Letters are 0-based indices; images[j] is the word rho(j).
struct SubstitutionRule1D {
  std::vector<std::vector<int>> images;

  std::size_t size() const { return images.size(); }
  /// Builds a rule from words over a, b, c, ... ("ab", "ca", ...).
  static SubstitutionRule1D from_words(const std::vector<std::string>& words);
  std::vector<std::string> words() const;
  void validate() const;
};

/// outer o inner: the image of j is outer applied letter by letter to inner(j).
SubstitutionRule1D compose(const SubstitutionRule1D& outer, const SubstitutionRule1D& inner);

struct Prototile {
  std::string label;
  /// Edge lengths of the axis-aligned box, one coordinate each, as exponents
  /// over the frequency basis.
  ExponentVector edges;
};

using PointList = std::vector<ExponentVector>;

struct InflationRule {
  std::string name;
  std::size_t dim = 1;
  BasisPtr basis;
  Expansion q;
  std::vector<Prototile> tiles;
  /// t[i][j]: positions (lower-left corners) of tiles of type i inside Q(t_j).
  std::vector<std::vector<PointList>> t;
  /// False when the tiles do not partition the inflated tiles (only counts
  /// and volumes are meaningful then).
  bool stone = true;
  std::optional<SubstitutionRule1D> symbolic;

  std::size_t size() const { return tiles.size(); }
  double volume(std::size_t i) const;
  /// Largest Euclidean norm among all displacement positions.
  double max_displacement() const;
  void check_shape() const;
};

IntMatrix substitution_matrix(const InflationRule& rule);
IntMatrix substitution_matrix(const SubstitutionRule1D& rule);

/// Primitivity via boolean powers up to L^2 - 2L + 2. On failure `why`
/// names a pair of types that never reach each other.
bool is_primitive(const IntMatrix& m, std::string* why = nullptr);

struct PFData {
  double lambda = 0.0;
  Eigen::VectorXd frequencies;  // right eigenvector, sums to 1
  Eigen::VectorXd lengths;      // left eigenvector, smallest entry 1
  std::vector<Complex> eigenvalues;  // sorted by decreasing modulus
  double residual = 0.0;
};

PFData pf_data(const IntMatrix& m);

/// Interval lengths from the left PF eigenvector (exact in Q(lambda)),
/// left endpoints as control points.
InflationRule realize_1d(const SubstitutionRule1D& rule, const std::string& name = "");

struct ValidationReport {
  bool volume_ok = true;
  bool disjoint_ok = true;
  bool contained_ok = true;
  std::vector<std::string> problems;
  /// (column, index a, index b) into the flattened tile list of that column
  struct Overlap {
    std::size_t column;
    std::size_t type_a, pos_a, type_b, pos_b;
  };
  std::vector<Overlap> overlaps;
  bool ok() const { return volume_ok && disjoint_ok && contained_ok; }
};

ValidationReport validate_stone_inflation(const InflationRule& rule);

struct PlacedTile {
  int type = 0;
  ExponentVector pos;
};

struct Patch {
  std::vector<PlacedTile> tiles;
  std::vector<double> lower, upper;  // bounding box of the supertile
  std::vector<std::size_t> counts;   // per type
};

inline constexpr std::size_t kPatchTileCap = 20'000'000;

/// Level-n supertile of the given type with its control point at the origin.
Patch inflate_patch(const InflationRule& rule, int seed, int level);

}  // namespace renorm
