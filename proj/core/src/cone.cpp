#include "limitcone/cone.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace limitcone::cone {

namespace {

void require_dim3(std::size_t d) {
  if (d != 3) throw Error(ErrorCode::UnsupportedDimension, "hulls are implemented for d = 3, got d = " + std::to_string(d));
}

long precision_of(const std::vector<Scalar>& v) {
  long p = kMinPrecisionBits;
  for (const auto& x : v) p = std::max(p, x.precision());
  return p;
}

// Precision at which sums and triple products of the given values are exact.
long exact_precision(std::initializer_list<const std::vector<Scalar>*> vs) {
  long p = kMinPrecisionBits;
  long lo = 0, hi = 0;
  bool any = false;
  for (const auto* v : vs) {
    for (const auto& x : *v) {
      p = std::max(p, x.precision());
      if (x.is_zero()) continue;
      long e = x.exponent();
      lo = any ? std::min(lo, e) : e;
      hi = any ? std::max(hi, e) : e;
      any = true;
    }
  }
  return 3 * (p + (hi - lo)) + 8;
}

// Sign of det[p, q, r]; positive iff (p, q, r) is counterclockwise in the
// chart. Computed exactly.
int orientation(const SimplexPoint& p, const SimplexPoint& q, const SimplexPoint& r) {
  Precision P{exact_precision({&p.bary, &q.bary, &r.bary})};
  auto at = [&](const SimplexPoint& s, int i) { return s.bary[i].with_precision(P); };
  Scalar p0 = at(p, 0), p1 = at(p, 1), p2 = at(p, 2);
  Scalar q0 = at(q, 0), q1 = at(q, 1), q2 = at(q, 2);
  Scalar r0 = at(r, 0), r1 = at(r, 1), r2 = at(r, 2);
  Scalar det = p0 * (q1 * r2 - q2 * r1) - p1 * (q0 * r2 - q2 * r0) + p2 * (q0 * r1 - q1 * r0);
  return det.sign();
}

Scalar triple(const SimplexPoint& p, const SimplexPoint& q, const SimplexPoint& r) {
  const auto& a = p.bary;
  const auto& b = q.bary;
  const auto& c = r.bary;
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0]);
}

Scalar chart_distance(const SimplexPoint& p, const SimplexPoint& q) {
  auto [px, py] = chart(p);
  auto [qx, qy] = chart(q);
  return sqrt(sqr(px - qx) + sqr(py - qy));
}

// |sin| of the turn at q, in the chart.
Scalar turn_sine(const SimplexPoint& p, const SimplexPoint& q, const SimplexPoint& r) {
  Scalar d1 = chart_distance(p, q);
  Scalar d2 = chart_distance(q, r);
  if (d1.is_zero() || d2.is_zero()) return Scalar(q.bary[0].prec());
  Precision prec = q.bary[0].prec();
  // Chart area of the unit simplex is sqrt(3)/4 while det = 1 there.
  return abs(triple(p, q, r)) * sqrt(Scalar(3L, prec)) / 2 / (d1 * d2);
}

Scalar sum_of(const std::vector<Scalar>& v) {
  Scalar s(Precision{precision_of(v)});
  for (const auto& x : v) s += x;
  return s;
}

}  // namespace

Functional Functional::normalized(std::vector<Scalar> c) {
  if (c.empty()) throw Error(ErrorCode::ZeroVector, "empty functional");
  Scalar m = abs(c[0]);
  for (const auto& x : c) m = max(m, abs(x));
  if (m.is_zero()) throw Error(ErrorCode::ZeroVector, "zero functional");
  for (auto& x : c) x /= m;
  return Functional{std::move(c)};
}

Scalar Functional::operator()(const std::vector<Scalar>& x) const {
  if (x.size() != c.size()) throw Error(ErrorCode::InvalidArgument, "dimension mismatch");
  Scalar s(Precision{std::max(precision_of(c), precision_of(x))});
  for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * x[i];
  return s;
}

SimplexPoint projectivize(const MultiLength& v) {
  if (v.coords.empty()) throw Error(ErrorCode::ZeroVector, "empty multi-length");
  for (const auto& x : v.coords) {
    if (x < 0) throw Error(ErrorCode::InvalidArgument, "negative multi-length coordinate");
  }
  Scalar s = sum_of(v.coords);
  if (s.is_zero()) throw Error(ErrorCode::ZeroVector, "multi-length is zero");
  SimplexPoint out;
  for (const auto& x : v.coords) out.bary.push_back(x / s);
  return out;
}

std::pair<Scalar, Scalar> chart(const SimplexPoint& p) {
  require_dim3(p.bary.size());
  Precision prec{precision_of(p.bary)};
  return {p.bary[1] + p.bary[2] / 2, p.bary[2] * sqrt(Scalar(3L, prec)) / 2};
}

bool azimuthal(const Functional& f) {
  int negative = 0;
  for (const auto& x : f.c) negative += x < 0;
  return negative == 1 && sum_of(f.c) > 0;
}

Scalar azimuthal_margin(const Functional& f) {
  std::vector<Scalar> sorted = f.c;
  std::sort(sorted.begin(), sorted.end());
  Scalar m = min(sum_of(f.c), -sorted[0]);
  if (sorted.size() > 1) m = min(m, sorted[1]);
  return m;
}

HullCertificate convex_hull(const std::vector<SimplexPoint>& points, const HullOptions& options) {
  if (points.empty()) throw Error(ErrorCode::InvalidArgument, "hull of no points");
  for (const auto& p : points) require_dim3(p.bary.size());
  long prec = 0;
  for (const auto& p : points) prec = std::max(prec, precision_of(p.bary));
  Precision P{prec};
  Scalar tol = options.collinear_tol ? *options.collinear_tol : pow2(-prec / 2, P);
  Scalar same_tol = pow2(24 - prec, P);

  // Lexicographic on (b2 + b3/2, b3), i.e. on the chart coordinates.
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<Scalar> key_x;
  for (const auto& p : points) {
    Precision E{exact_precision({&p.bary})};
    key_x.push_back(p.bary[1].with_precision(E) + p.bary[2].with_precision(E) / 2);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (key_x[i] != key_x[j]) return key_x[i] < key_x[j];
    return points[i].bary[2] < points[j].bary[2];
  });

  // Merge coincident inputs.
  std::vector<std::size_t> reps;
  std::vector<std::vector<std::size_t>> members;
  for (std::size_t idx : order) {
    bool merged = false;
    for (std::size_t k = reps.size(); k-- > 0;) {
      if (chart_distance(points[reps[k]], points[idx]) <= same_tol) {
        members[k].push_back(idx);
        merged = true;
        break;
      }
      // Sorted by x: earlier points further than same_tol in x cannot match.
      if (key_x[idx] - key_x[reps[k]] > same_tol) break;
    }
    if (!merged) {
      reps.push_back(idx);
      members.push_back({idx});
    }
  }

  auto left_turn = [&](std::size_t a, std::size_t b, std::size_t c) {
    if (orientation(points[a], points[b], points[c]) <= 0) return false;
    return turn_sine(points[a], points[b], points[c]) > tol;
  };
  std::vector<std::size_t> chain;  // positions in reps
  auto build = [&](auto begin, auto end) {
    std::size_t base = chain.size();
    for (auto it = begin; it != end; ++it) {
      while (chain.size() >= base + 2 && !left_turn(reps[chain[chain.size() - 2]], reps[chain.back()], reps[*it])) {
        chain.pop_back();
      }
      chain.push_back(*it);
    }
    chain.pop_back();
  };
  std::vector<std::size_t> idx(reps.size());
  std::iota(idx.begin(), idx.end(), 0);
  HullCertificate hull;
  if (reps.size() == 1) {
    hull.vertices.push_back(points[reps[0]]);
    hull.sources.push_back(members[0]);
    return hull;
  }
  build(idx.begin(), idx.end());
  build(idx.rbegin(), idx.rend());
  // Collinear inputs collapse to their two extremes.
  if (chain.size() == 2 && chain[0] == chain[1]) chain.pop_back();

  for (std::size_t k : chain) {
    hull.vertices.push_back(points[reps[k]]);
    hull.sources.push_back(members[k]);
  }
  std::size_t n = hull.vertices.size();
  if (n >= 3) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t j = (i + 1) % n;
      const auto& a = hull.vertices[i].bary;
      const auto& b = hull.vertices[j].bary;
      std::vector<Scalar> c{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
      hull.facets.push_back({i, j, Functional::normalized(std::move(c)), false});
    }
  }
  return hull;
}

HullCertificate certify(HullCertificate hull) {
  bool all = hull.vertices.size() >= 3 && !hull.facets.empty();
  for (auto& f : hull.facets) {
    f.azimuthal = azimuthal(f.functional);
    all = all && f.azimuthal;
  }
  hull.verdict = all ? Verdict::Certified : Verdict::Partial;
  hull.evaluated = true;
  return hull;
}

std::vector<Scalar> exterior_angles(const HullCertificate& hull) {
  std::size_t n = hull.vertices.size();
  std::vector<Scalar> out;
  if (n < 3) return out;
  for (std::size_t i = 0; i < n; ++i) {
    auto [x0, y0] = chart(hull.vertices[(i + n - 1) % n]);
    auto [x1, y1] = chart(hull.vertices[i]);
    auto [x2, y2] = chart(hull.vertices[(i + 1) % n]);
    Scalar ux = x1 - x0, uy = y1 - y0;
    Scalar vx = x2 - x1, vy = y2 - y1;
    out.push_back(atan2(ux * vy - uy * vx, ux * vx + uy * vy));
  }
  return out;
}

std::vector<Extremality> extremality_report(const std::vector<SimplexPoint>& points, const HullOptions& options) {
  if (points.size() < 3) throw Error(ErrorCode::InvalidArgument, "extremality needs at least 3 points");
  HullCertificate hull = convex_hull(points, options);
  std::vector<Scalar> angles = exterior_angles(hull);
  std::vector<Extremality> out(points.size(), Extremality{PointClass::Interior, std::nullopt, std::nullopt});
  for (std::size_t v = 0; v < hull.sources.size(); ++v) {
    for (std::size_t i : hull.sources[v]) {
      out[i] = {PointClass::Vertex, angles.empty() ? std::nullopt : std::optional<Scalar>(angles[v]), v};
    }
  }
  if (hull.vertices.size() < 3) return out;
  long prec = 0;
  for (const auto& p : points) prec = std::max(prec, precision_of(p.bary));
  Scalar tol = options.collinear_tol ? *options.collinear_tol : pow2(-prec / 2, Precision{prec});
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (out[i].kind == PointClass::Vertex) continue;
    auto r = contains(hull, points[i], tol);
    if (r.status != Containment::Inside) out[i].kind = PointClass::EdgeInterior;
  }
  return out;
}

ContainmentResult contains(const HullCertificate& hull, const SimplexPoint& p, const Scalar& tol) {
  if (hull.vertices.size() < 3 || hull.facets.empty()) throw Error(ErrorCode::DegenerateHull, "hull has fewer than 3 vertices");
  require_dim3(p.bary.size());
  std::optional<Scalar> best;
  std::size_t best_facet = 0;
  for (std::size_t k = 0; k < hull.facets.size(); ++k) {
    const auto& c = hull.facets[k].functional.c;
    Scalar mean = sum_of(c) / 3;
    Scalar norm2(Precision{precision_of(c)});
    for (const auto& x : c) norm2 += sqr(x - mean);
    Scalar margin = hull.facets[k].functional(p.bary) / sqrt(norm2);
    if (!best || margin < *best) {
      best = std::move(margin);
      best_facet = k;
    }
  }
  Containment status = *best < -tol ? Containment::Outside : (*best <= tol ? Containment::Boundary : Containment::Inside);
  return {status, std::move(*best), best_facet};
}

}  // namespace limitcone::cone

namespace limitcone::cone {

ContainmentChecker::ContainmentChecker(const HullCertificate& hull) {
  if (hull.vertices.size() < 3 || hull.facets.empty()) throw Error(ErrorCode::DegenerateHull, "hull has fewer than 3 vertices");
  for (const auto& f : hull.facets) {
    const auto& c = f.functional.c;
    require_dim3(c.size());
    Scalar mean = sum_of(c) / 3;
    Scalar norm2(Precision{precision_of(c)});
    for (const auto& x : c) norm2 += sqr(x - mean);
    Scalar norm = sqrt(norm2);
    std::vector<Scalar> n;
    std::array<double, 3> d{};
    for (std::size_t i = 0; i < 3; ++i) {
      n.push_back(c[i] / norm);
      d[i] = n.back().to_double();
    }
    normals_.push_back(std::move(n));
    approx_.push_back(d);
  }
}

ContainmentResult ContainmentChecker::operator()(const SimplexPoint& p, const Scalar& tol) const {
  require_dim3(p.bary.size());
  // Barycentric coordinates are in [0, 1] and the normals have unit length,
  // so binary64 margins are accurate to well below this screen.
  constexpr double kScreen = 1e-9;
  std::array<double, 3> x{p.bary[0].to_double(), p.bary[1].to_double(), p.bary[2].to_double()};
  double approx_min = 0;
  std::size_t approx_facet = 0;
  std::optional<Scalar> best;
  std::size_t best_facet = 0;
  for (std::size_t k = 0; k < normals_.size(); ++k) {
    const auto& a = approx_[k];
    double m = a[0] * x[0] + a[1] * x[1] + a[2] * x[2];
    if (k == 0 || m < approx_min) {
      approx_min = m;
      approx_facet = k;
    }
    if (m > kScreen) continue;
    const auto& n = normals_[k];
    Scalar exact = n[0] * p.bary[0] + n[1] * p.bary[1] + n[2] * p.bary[2];
    if (!best || exact < *best) {
      best = std::move(exact);
      best_facet = k;
    }
  }
  if (!best) {
    best = Scalar(approx_min, p.bary[0].prec());
    best_facet = approx_facet;
  }
  Containment status = *best < -tol ? Containment::Outside : (*best <= tol ? Containment::Boundary : Containment::Inside);
  return {status, std::move(*best), best_facet};
}

}  // namespace limitcone::cone
