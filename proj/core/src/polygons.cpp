#include "limitcone/polygons.hpp"

#include <algorithm>
#include <cmath>

namespace limitcone::polygons {

using hyp2::Isometry;
using hyp2::OrientedGeodesic;
using hyp2::Point;

std::array<Scalar, 5> pentagon_sides(const PentagonParams& p) {
  if (p.x <= 0 || p.y <= 0) throw Error(ErrorCode::NonPositiveParam, "pentagon parameters must be positive");
  Scalar sx = sinh(p.x), sy = sinh(p.y);
  Scalar cx = cosh(p.x), cy = cosh(p.y);
  // arccosh(1 / (tanh x tanh y)) written as arccosh1p to keep digits when
  // the argument is close to 1.
  Scalar middle = acosh1p((cx * cy - sx * sy) / (sx * sy));
  return {asinh(cy / sx), p.x, std::move(middle), p.y, asinh(cx / sy)};
}

int EmbeddedPolygon::side_of_label(int label) const {
  int n = size();
  if (label < 1 || label > n) throw Error(ErrorCode::InvalidArgument, "label out of range");
  return (((label - 1 - shift) % n) + n) % n;
}

EmbeddedPolygon EmbeddedPolygon::shifted(int s) const {
  EmbeddedPolygon out = *this;
  out.shift = ((s % size()) + size()) % size();
  return out;
}

namespace {

struct Pentagon {
  std::array<Scalar, 5> lengths;
  std::array<int, 5> chain_edge;  // index j of e_j on that side, -1 otherwise
};

// Q_k for k = 1 .. 2g-2. For odd k, e_k lies two sides counterclockwise
// after e_{k-1}; for even k, two sides clockwise.
std::vector<Pentagon> chain_pentagons(int genus, const std::vector<Scalar>& x) {
  std::vector<Pentagon> out;
  for (int k = 1; k <= 2 * genus - 2; ++k) {
    Pentagon q;
    q.chain_edge.fill(-1);
    if (k % 2 == 1) {
      q.lengths = pentagon_sides({x[k - 1], x[k]});
      q.chain_edge[1] = k - 1;
      q.chain_edge[3] = k;
    } else {
      q.lengths = pentagon_sides({x[k], x[k - 1]});
      q.chain_edge[1] = k;
      q.chain_edge[3] = k - 1;
    }
    out.push_back(std::move(q));
  }
  return out;
}

int index_of_edge(const Pentagon& q, int j) {
  for (int i = 0; i < 5; ++i) {
    if (q.chain_edge[i] == j) return i;
  }
  throw Error(ErrorCode::EmbeddingFailure, "chain edge missing from pentagon");
}

Scalar max_entry(const Isometry& m) {
  Scalar r = abs(m.a());
  for (const auto& e : m.entries()) r = max(r, abs(e));
  return r;
}

}  // namespace

EmbeddedPolygon build_chain_polygon(int genus, const std::vector<Scalar>& params) {
  if (genus < 2) throw Error(ErrorCode::InvalidArgument, "genus must be >= 2");
  if (static_cast<int>(params.size()) != 2 * genus - 1) {
    throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(2 * genus - 1) + " chain parameters");
  }
  for (const auto& x : params) {
    if (x <= 0) throw Error(ErrorCode::NonPositiveParam, "chain parameter " + x.to_string(20) + " <= 0");
  }
  const int interior_last = 2 * genus - 3;
  std::vector<Pentagon> q = chain_pentagons(genus, params);

  // Combinatorial walk around the boundary of the union. Crossing an
  // interior chain edge continues straight into the neighbour.
  std::vector<Scalar> lengths;
  std::vector<std::vector<int>> touching(interior_last + 1);
  int k = 0, idx = 1;  // e_0 in Q_1
  lengths.push_back(q[0].lengths[idx]);
  for (int guard = 0;; ++guard) {
    if (guard > 10 * static_cast<int>(q.size()) + 10) throw Error(ErrorCode::EmbeddingFailure, "boundary walk did not close");
    int next = (idx + 1) % 5;
    int j = q[k].chain_edge[next];
    if (j >= 1 && j <= interior_last) {
      int other = (k == j - 1) ? j : j - 1;  // Q_j has index j-1, Q_{j+1} index j
      touching[j].push_back(static_cast<int>(lengths.size()) - 1);
      k = other;
      idx = (index_of_edge(q[k], j) + 1) % 5;
      lengths.back() += q[k].lengths[idx];
      continue;
    }
    idx = next;
    if (k == 0 && idx == 1) break;
    lengths.push_back(q[k].lengths[idx]);
  }
  if (static_cast<int>(lengths.size()) != 2 * genus + 2) {
    throw Error(ErrorCode::EmbeddingFailure, "boundary walk produced " + std::to_string(lengths.size()) + " sides");
  }

  Precision prec{params.front().precision()};
  Isometry frame = Isometry::identity(prec);
  Isometry turn = Isometry::rotation(pi(prec) / 2);
  Point base{Scalar(prec), Scalar(1L, prec)};
  auto zero = hyp2::BoundaryPoint::finite(Scalar(prec));
  auto inf = hyp2::BoundaryPoint::infinity(prec);

  EmbeddedPolygon poly;
  poly.genus = genus;
  poly.params = params;
  Scalar scale(1L, prec);
  for (const auto& len : lengths) {
    poly.vertices.push_back(frame.apply(base));
    poly.sides.push_back({frame.apply(zero), frame.apply(inf)});
    frame = frame * Isometry::translation(len) * turn;
    scale = max(scale, max_entry(frame));
  }
  poly.side_lengths = std::move(lengths);

  Scalar tol = pow2(32 - prec.bits, prec) * sqr(scale);
  bool closed = frame.projectively_equal(Isometry::identity(prec), tol);
  if (!closed) throw Error(ErrorCode::EmbeddingFailure, "polygon does not close up");

  for (int j = 1; j <= interior_last; ++j) {
    if (touching[j].size() != 2) throw Error(ErrorCode::EmbeddingFailure, "chain edge without two feet");
    auto [a, b] = std::minmax(touching[j][0], touching[j][1]);
    poly.chain_edges.push_back({a, b});
  }
  return poly;
}

namespace {

int cyclic_distance(int i, int j, int n) {
  int d = std::abs(i - j) % n;
  return std::min(d, n - d);
}

void check_foot(const EmbeddedPolygon& poly, int side, const OrientedGeodesic& perp) {
  auto foot = hyp2::intersection(poly.sides[side], perp);
  if (!foot) throw Error(ErrorCode::FootOutsideSide, "perpendicular misses side " + std::to_string(side));
  int n = poly.size();
  const Scalar& len = poly.side_lengths[side];
  Scalar d1 = hyp2::distance(poly.vertices[side], *foot);
  Scalar d2 = hyp2::distance(*foot, poly.vertices[(side + 1) % n]);
  Scalar tol = pow2(-len.precision() / 2, len.prec()) * max(Scalar(1L, len.prec()), len);
  if (d1.is_zero() || d2.is_zero() || abs(d1 + d2 - len) > tol) {
    throw Error(ErrorCode::FootOutsideSide, "perpendicular foot outside side " + std::to_string(side));
  }
}

}  // namespace

std::vector<ChordRecord> enumerate_chords(const EmbeddedPolygon& poly) {
  int n = poly.size();
  std::vector<ChordRecord> out;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (cyclic_distance(i, j, n) < 3) continue;
      auto cp = hyp2::common_perpendicular(poly.sides[i], poly.sides[j]);
      check_foot(poly, i, cp.geodesic);
      check_foot(poly, j, cp.geodesic);
      out.push_back({i, j, cp.geodesic, cp.length, (j - i) % 2 == 0 ? Parity::Same : Parity::Mixed});
    }
  }
  return out;
}

std::string CurveLabel::to_string() const {
  if (is_edge()) return "edge " + std::to_string(i);
  return "chord " + std::to_string(i) + "-" + std::to_string(j);
}

int CurveLabel::lift_multiplicity() const {
  if (is_edge()) return 2;
  return (j - i) % 2 == 0 ? 2 : 4;
}

std::map<CurveLabel, Scalar> labelled_length_system(const EmbeddedPolygon& poly) {
  int n = poly.size();
  auto label_of = [&](int side) { return (side + poly.shift) % n + 1; };
  std::map<CurveLabel, Scalar> out;
  for (int side = 0; side < n; ++side) {
    int l = label_of(side);
    out.emplace(CurveLabel{l, l}, poly.side_lengths[side]);
  }
  for (auto& chord : enumerate_chords(poly)) {
    int a = label_of(chord.side_i), b = label_of(chord.side_j);
    out.emplace(CurveLabel{std::min(a, b), std::max(a, b)}, std::move(chord.length));
  }
  return out;
}

std::vector<Isometry> reflection_generators(const EmbeddedPolygon& poly) {
  std::vector<Isometry> out;
  for (int l = 1; l <= poly.size(); ++l) out.push_back(hyp2::reflection(poly.sides[poly.side_of_label(l)]));
  return out;
}

AdjustResult multiplicative_adjust(const std::vector<Scalar>& base, const AdjustObjective& objective,
                                   const AdjustOptions& options) {
  std::vector<double> m(base.size(), 0.0);
  int evaluations = 0;
  auto params_for = [&](const std::vector<double>& mult) {
    std::vector<Scalar> p;
    for (std::size_t i = 0; i < base.size(); ++i) {
      Precision prec = base[i].prec();
      Scalar factor = mult[i] == std::floor(mult[i])
                          ? pow2(static_cast<long>(mult[i]), prec)
                          : exp(Scalar(mult[i], prec) * log(Scalar(2L, prec)));
      p.push_back(base[i] * factor);
    }
    return p;
  };
  auto score_of = [&](const std::vector<double>& mult) {
    ++evaluations;
    return objective(params_for(mult));
  };

  double best = score_of(m);
  if (best > 0) return {base, m, best, evaluations};

  for (int r = 0; r < options.refinements; ++r) {
    double step = std::ldexp(1.0, -r);
    for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
      bool improved = false;
      for (std::size_t i = 0; i < m.size(); ++i) {
        std::vector<double> candidates;
        if (r == 0) {
          for (double v = options.min_log2; v <= options.max_log2; v += step) candidates.push_back(v);
        } else {
          for (int t : {-2, -1, 1, 2}) candidates.push_back(m[i] + t * step);
        }
        double keep = m[i];
        double chosen = keep;
        for (double v : candidates) {
          if (v == keep || v < options.min_log2 || v > options.max_log2) continue;
          m[i] = v;
          double s = score_of(m);
          if (s > best) {
            best = s;
            chosen = v;
          }
          if (best > 0) break;
        }
        m[i] = chosen;
        if (chosen != keep) improved = true;
        if (best > 0) return {params_for(m), m, best, evaluations};
      }
      if (!improved) break;
    }
  }
  throw Error(ErrorCode::AdjustmentFailed,
              "no multipliers in [2^" + std::to_string(options.min_log2) + ", 2^" + std::to_string(options.max_log2) +
                  "] satisfy the objective; best score " + std::to_string(best) + " after " +
                  std::to_string(evaluations) + " evaluations");
}

}  // namespace limitcone::polygons
