#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "limitcone/hyp2.hpp"

namespace limitcone::polygons {

struct PentagonParams {
  Scalar x;
  Scalar y;
};

// Side lengths of the right-angled pentagon P'(x, y) in counterclockwise
// order; x and y sit at positions 1 and 3.
std::array<Scalar, 5> pentagon_sides(const PentagonParams& p);

// Right-angled (2g+2)-gon realized in the upper half-plane. Side k runs from
// vertices[k] to vertices[k+1] counterclockwise; side 0 is e_0, on the
// imaginary axis starting at i.
struct EmbeddedPolygon {
  int genus = 0;
  std::vector<Scalar> params;  // x_0 .. x_{2g-2}
  std::vector<hyp2::Point> vertices;
  std::vector<hyp2::OrientedGeodesic> sides;
  std::vector<Scalar> side_lengths;
  // Geometric side pairs joined by the interior chain edges e_1 .. e_{2g-3}.
  std::vector<std::array<int, 2>> chain_edges;
  int shift = 0;

  int size() const { return static_cast<int>(sides.size()); }
  // Geometric side carrying abstract label l in 1..n.
  int side_of_label(int label) const;
  // Same polygon with a different labelling shift.
  EmbeddedPolygon shifted(int s) const;
};

EmbeddedPolygon build_chain_polygon(int genus, const std::vector<Scalar>& params);

enum class Parity { Same, Mixed };

struct ChordRecord {
  int side_i;  // geometric sides, side_i < side_j
  int side_j;
  hyp2::OrientedGeodesic geodesic;  // from side_i to side_j
  Scalar length;
  Parity parity;
};

// One chord per side pair at cyclic distance >= 3: (g+1)(2g-3) in total.
std::vector<ChordRecord> enumerate_chords(const EmbeddedPolygon& poly);

// Abstract curve label: an edge (i == j) or a chord {i, j}, labels 1..n.
struct CurveLabel {
  int i;
  int j;

  bool is_edge() const { return i == j; }
  std::string to_string() const;
  // 2 for edges and same-parity chords, 4 for mixed-parity chords.
  int lift_multiplicity() const;
  friend auto operator<=>(const CurveLabel&, const CurveLabel&) = default;
};

// Length of every edge and chord, keyed by abstract label under the
// polygon's shift.
std::map<CurveLabel, Scalar> labelled_length_system(const EmbeddedPolygon& poly);

// Reflection in the side carrying each label 1..n, in label order.
std::vector<hyp2::Isometry> reflection_generators(const EmbeddedPolygon& poly);

struct AdjustOptions {
  double min_log2 = -3.0;  // multipliers in [1/8, 8]
  double max_log2 = 3.0;
  int refinements = 4;  // grid steps 1, 1/2, 1/4, 1/8 in log2
  int max_sweeps = 8;
};

struct AdjustResult {
  std::vector<Scalar> params;
  std::vector<double> log2_multipliers;
  double score;
  int evaluations;
};

// Objective: a score that is > 0 exactly when the parameters are acceptable.
using AdjustObjective = std::function<double(const std::vector<Scalar>&)>;

// Deterministic coordinate search over per-parameter multipliers 2^m with m
// on a dyadically refined grid. Returns as soon as the score is positive;
// throws AdjustmentFailed with the best score otherwise.
AdjustResult multiplicative_adjust(const std::vector<Scalar>& base, const AdjustObjective& objective,
                                   const AdjustOptions& options = {});

}  // namespace limitcone::polygons
