#include "limitcone/hyp2.hpp"

#include <string>

namespace limitcone::hyp2 {

namespace {

Scalar norm_inf(const BoundaryPoint& p) { return max(abs(p.u()), abs(p.v())); }

Scalar equality_tolerance(long prec) { return pow2(16 - prec, Precision{prec}); }

void require_distinct(const BoundaryPoint& a, const BoundaryPoint& b, const char* what) {
  if (same_point(a, b)) throw Error(ErrorCode::Degenerate, std::string("coincident endpoints: ") + what);
}

}  // namespace

BoundaryPoint BoundaryPoint::finite(Scalar x) {
  Scalar one(1L, x.prec());
  return BoundaryPoint(std::move(x), std::move(one));
}

BoundaryPoint BoundaryPoint::infinity(Precision prec) { return BoundaryPoint(Scalar(1L, prec), Scalar(prec)); }

BoundaryPoint BoundaryPoint::projective(const Scalar& u, const Scalar& v) {
  if (v.is_zero()) {
    if (u.is_zero()) throw Error(ErrorCode::InvalidArgument, "boundary point (0, 0)");
    return infinity(Precision{max_precision(u, v)});
  }
  Scalar x = u / v;
  if (!x.is_finite()) return infinity(Precision{max_precision(u, v)});
  return finite(std::move(x));
}

const Scalar& BoundaryPoint::coordinate() const {
  if (is_infinite()) throw Error(ErrorCode::InvalidArgument, "coordinate of the point at infinity");
  return u_;
}

bool same_point(const BoundaryPoint& a, const BoundaryPoint& b) {
  Scalar det = bracket(a, b);
  if (det.is_zero()) return true;
  long p = std::max(a.precision(), b.precision());
  return abs(det) <= equality_tolerance(p) * norm_inf(a) * norm_inf(b);
}

Scalar bracket(const BoundaryPoint& a, const BoundaryPoint& b) { return a.u() * b.v() - b.u() * a.v(); }

Scalar distance(const Point& p, const Point& q) {
  Scalar dx = p.x - q.x;
  Scalar dy = p.y - q.y;
  return acosh1p((sqr(dx) + sqr(dy)) / (p.y * q.y * 2));
}

Isometry Isometry::from_matrix(Scalar a, Scalar b, Scalar c, Scalar d) {
  Scalar det = a * d - b * c;
  if (det.is_zero()) throw Error(ErrorCode::Degenerate, "singular matrix");
  int orientation = det.sign();
  Scalar s = sqrt(abs(det));
  a /= s;
  b /= s;
  c /= s;
  d /= s;
  return Isometry({std::move(a), std::move(b), std::move(c), std::move(d)}, orientation);
}

Isometry Isometry::identity(Precision prec) {
  return Isometry({Scalar(1L, prec), Scalar(prec), Scalar(prec), Scalar(1L, prec)}, 1);
}

Isometry Isometry::translation(const Scalar& t) {
  Scalar half = t / 2;
  Scalar e = exp(half);
  Scalar z(t.prec());
  Scalar inv = exp(-half);
  return Isometry({std::move(e), z, z, std::move(inv)}, 1);
}

Isometry Isometry::rotation(const Scalar& theta) {
  Scalar half = theta / 2;
  Scalar c = cos(half);
  Scalar s = sin(half);
  return Isometry({c, s, -s, c}, 1);
}

BoundaryPoint Isometry::apply(const BoundaryPoint& p) const {
  return BoundaryPoint::projective(a() * p.u() + b() * p.v(), c() * p.u() + d() * p.v());
}

Point Isometry::apply(const Point& z) const {
  Scalar cx_d = c() * z.x + d();
  Scalar cy = c() * z.y;
  Scalar den = sqr(cx_d) + sqr(cy);
  Scalar re = ((a() * z.x + b()) * cx_d + a() * c() * sqr(z.y)) / den;
  Scalar im = z.y / den;
  return Point{std::move(re), std::move(im)};
}

Isometry Isometry::inverse() const {
  // adj(M) / det with det = orientation.
  if (orientation_ > 0) return Isometry({d(), -b(), -c(), a()}, 1);
  return Isometry({-d(), b(), c(), -a()}, -1);
}

bool Isometry::projectively_equal(const Isometry& other, const Scalar& tol) const {
  if (orientation_ != other.orientation_) return false;
  for (int sign : {1, -1}) {
    bool all = true;
    for (std::size_t k = 0; k < 4 && all; ++k) {
      all = abs(m_[k] - other.m_[k] * sign) <= tol * max(Scalar(1L, m_[k].prec()), abs(m_[k]));
    }
    if (all) return true;
  }
  return false;
}

Isometry operator*(const Isometry& lhs, const Isometry& rhs) {
  const auto& l = lhs.m_;
  const auto& r = rhs.m_;
  return Isometry({l[0] * r[0] + l[1] * r[2], l[0] * r[1] + l[1] * r[3], l[2] * r[0] + l[3] * r[2],
                   l[2] * r[1] + l[3] * r[3]},
                  lhs.orientation_ * rhs.orientation_);
}

OrientedGeodesic make_geodesic(BoundaryPoint backward, BoundaryPoint forward) {
  require_distinct(backward, forward, "geodesic");
  return OrientedGeodesic{std::move(backward), std::move(forward)};
}

Isometry frame_along(const OrientedGeodesic& l) {
  const auto& p = l.forward;
  const auto& m = l.backward;
  Scalar det = p.u() * m.v() - m.u() * p.v();
  if (det.sign() > 0) return Isometry::from_matrix(p.u(), m.u(), p.v(), m.v());
  return Isometry::from_matrix(p.u(), -m.u(), p.v(), -m.v());
}

Scalar translation_length(const Isometry& m) {
  if (m.orientation() < 0) throw Error(ErrorCode::OrientationReversing, "translation length of a reflection");
  Scalar t = abs(m.trace());
  if (t <= 2) throw Error(ErrorCode::NonHyperbolic, "|tr| = " + t.to_string(20) + " <= 2");
  return acosh1p(t / 2 - 1) * 2;
}

OrientedGeodesic axis(const Isometry& m) {
  if (m.orientation() < 0) throw Error(ErrorCode::OrientationReversing, "axis of a reflection");
  Scalar tr = m.trace();
  if (abs(tr) <= 2) throw Error(ErrorCode::NonHyperbolic, "|tr| = " + abs(tr).to_string(20) + " <= 2");
  int s = tr.sign();
  // Work with the representative of positive trace.
  Scalar a = m.a() * s, b = m.b() * s, c = m.c() * s, d = m.d() * s;
  Scalar t = abs(tr);
  Scalar big = (t + sqrt(sqr(t) - 4)) / 2;
  Scalar small = 1L / big;
  auto eigenvector = [&](const Scalar& lambda) {
    Scalar u1 = b, v1 = lambda - a;
    Scalar u2 = lambda - d, v2 = c;
    if (max(abs(u1), abs(v1)) >= max(abs(u2), abs(v2))) return BoundaryPoint::projective(u1, v1);
    return BoundaryPoint::projective(u2, v2);
  };
  return OrientedGeodesic{eigenvector(small), eigenvector(big)};
}

Scalar cross_ratio(const BoundaryPoint& a, const BoundaryPoint& b, const BoundaryPoint& c,
                   const BoundaryPoint& d) {
  require_distinct(a, b, "cross ratio first pair");
  require_distinct(c, d, "cross ratio second pair");
  Scalar den = bracket(a, d) * bracket(b, c);
  if (den.is_zero()) throw Error(ErrorCode::Degenerate, "cross ratio denominator vanishes");
  return bracket(a, c) * bracket(b, d) / den;
}

namespace {

// [x- : y- : x+ : y+] after checking that the four endpoints are distinct.
Scalar slack_ratio(const OrientedGeodesic& l, const OrientedGeodesic& lp) {
  const BoundaryPoint* pts[4] = {&l.backward, &l.forward, &lp.backward, &lp.forward};
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) require_distinct(*pts[i], *pts[j], "flow lines");
  }
  return cross_ratio(l.backward, lp.backward, l.forward, lp.forward);
}

}  // namespace

Scalar asymptotic_slack(const OrientedGeodesic& l, const OrientedGeodesic& lp) {
  return log(abs(slack_ratio(l, lp)));
}

std::optional<Scalar> crossing_angle(const OrientedGeodesic& l, const OrientedGeodesic& lp) {
  Scalar r = slack_ratio(l, lp);
  if (r <= 1) return std::nullopt;
  // cos^2(theta/2) = 1/r.
  return acos(sqrt(1L / r)) * 2;
}

namespace {

struct Circle {
  bool vertical;
  Scalar center;  // or the foot of the vertical line
  Scalar radius;
};

Circle as_circle(const OrientedGeodesic& l) {
  if (l.backward.is_infinite()) return {true, l.forward.coordinate(), Scalar(l.forward.u().prec())};
  if (l.forward.is_infinite()) return {true, l.backward.coordinate(), Scalar(l.backward.u().prec())};
  const Scalar& p = l.backward.coordinate();
  const Scalar& q = l.forward.coordinate();
  return {false, (p + q) / 2, abs(q - p) / 2};
}

}  // namespace

std::optional<Point> intersection(const OrientedGeodesic& l, const OrientedGeodesic& lp) {
  if (!crossing_angle(l, lp)) return std::nullopt;
  Circle c1 = as_circle(l);
  Circle c2 = as_circle(lp);
  if (c1.vertical && c2.vertical) return std::nullopt;
  if (c1.vertical) std::swap(c1, c2);
  Scalar x = c2.vertical ? c2.center
                         : (sqr(c1.radius) - sqr(c2.radius) + sqr(c2.center) - sqr(c1.center)) /
                               ((c2.center - c1.center) * 2);
  Scalar y2 = sqr(c1.radius) - sqr(x - c1.center);
  if (y2 <= 0) return std::nullopt;
  return Point{std::move(x), sqrt(y2)};
}

CommonPerpendicular common_perpendicular(const OrientedGeodesic& l, const OrientedGeodesic& lp) {
  const BoundaryPoint* a[2] = {&l.backward, &l.forward};
  const BoundaryPoint* b[2] = {&lp.backward, &lp.forward};
  for (auto* p : a) {
    for (auto* q : b) {
      if (same_point(*p, *q)) throw Error(ErrorCode::Asymptotic, "geodesics share an endpoint");
    }
  }
  if (crossing_angle(l, lp)) throw Error(ErrorCode::Crossing, "geodesics cross");
  // reflection(l) * reflection(lp) translates along the perpendicular by
  // twice the distance, from lp towards l.
  Isometry m = reflection(l) * reflection(lp);
  return CommonPerpendicular{axis(m).reversed(), translation_length(m) / 2};
}

Isometry reflection(const OrientedGeodesic& l) {
  const auto& p = l.backward;
  const auto& q = l.forward;
  Scalar s = p.u() * q.v() + q.u() * p.v();
  return Isometry::from_matrix(s, p.u() * q.u() * -2, p.v() * q.v() * 2, -s);
}

Resolution resolve_crossing(const Scalar& L2, const Scalar& L3, const Scalar& theta) {
  if (L2 <= 0 || L3 <= 0) throw Error(ErrorCode::InvalidArgument, "arc lengths must be positive");
  Precision prec{max_precision(L2, L3)};
  if (theta <= 0 || theta >= pi(prec)) throw Error(ErrorCode::InvalidArgument, "angle must lie in (0, pi)");
  Scalar ch2 = cosh(L2 / 2);
  Scalar ch3 = cosh(L3 / 2);
  Scalar half = theta / 2;
  Scalar values[3] = {ch2 * ch3 * sqr(sin(half)) * 2 - cosh((L2 - L3) / 2), ch2 * cos(half), ch3 * cos(half)};
  Scalar lengths[3];
  for (int k = 0; k < 3; ++k) {
    if (values[k] < 1) {
      throw Error(ErrorCode::NonHyperbolicResolution,
                  "resolution " + std::to_string(k + 1) + " has cosh value " + values[k].to_string(20));
    }
    lengths[k] = acosh(values[k]) * 2;
  }
  return Resolution{lengths[0], lengths[1], lengths[2]};
}

}  // namespace limitcone::hyp2
