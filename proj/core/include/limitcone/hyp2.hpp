#pragma once

#include <array>
#include <optional>
#include <utility>

#include "limitcone/scalar.hpp"

// Upper half-plane model of the hyperbolic plane. The boundary is P^1(R),
// with finite points stored as (x, 1) and the point at infinity as (1, 0).
namespace limitcone::hyp2 {

class BoundaryPoint {
 public:
  static BoundaryPoint finite(Scalar x);
  static BoundaryPoint infinity(Precision prec);
  // Projective pair (u, v), not both zero; canonicalized on construction.
  static BoundaryPoint projective(const Scalar& u, const Scalar& v);

  bool is_infinite() const { return v_.is_zero(); }
  // Finite coordinate; throws InvalidArgument at infinity.
  const Scalar& coordinate() const;
  const Scalar& u() const { return u_; }
  const Scalar& v() const { return v_; }
  long precision() const { return u_.precision(); }

  // Exact when the determinant vanishes exactly, else at 2^(16 - p).
  friend bool same_point(const BoundaryPoint& a, const BoundaryPoint& b);

 private:
  BoundaryPoint(Scalar u, Scalar v) : u_(std::move(u)), v_(std::move(v)) {}
  Scalar u_;
  Scalar v_;
};

// u_a v_b - u_b v_a; for finite points this is a - b.
Scalar bracket(const BoundaryPoint& a, const BoundaryPoint& b);

struct Point {
  Scalar x;
  Scalar y;  // > 0
};

Scalar distance(const Point& p, const Point& q);

// Element of PGL2(R) acting on the upper half-plane; orientation-reversing
// elements act by z -> (a conj(z) + b) / (c conj(z) + d).
class Isometry {
 public:
  // Normalizes |det| to 1; throws Degenerate on a singular matrix.
  static Isometry from_matrix(Scalar a, Scalar b, Scalar c, Scalar d);
  static Isometry identity(Precision prec);
  // Hyperbolic translation along (0, inf) by distance t, towards inf.
  static Isometry translation(const Scalar& t);
  // Counterclockwise rotation about i by angle theta.
  static Isometry rotation(const Scalar& theta);

  int orientation() const { return orientation_; }
  const std::array<Scalar, 4>& entries() const { return m_; }
  const Scalar& a() const { return m_[0]; }
  const Scalar& b() const { return m_[1]; }
  const Scalar& c() const { return m_[2]; }
  const Scalar& d() const { return m_[3]; }
  Scalar trace() const { return m_[0] + m_[3]; }
  long precision() const { return m_[0].precision(); }

  BoundaryPoint apply(const BoundaryPoint& p) const;
  Point apply(const Point& z) const;
  Isometry inverse() const;

  // Equality in the projective class, entrywise at tolerance tol.
  bool projectively_equal(const Isometry& other, const Scalar& tol) const;

  friend Isometry operator*(const Isometry& lhs, const Isometry& rhs);

 private:
  Isometry(std::array<Scalar, 4> m, int orientation) : m_(std::move(m)), orientation_(orientation) {}
  std::array<Scalar, 4> m_;
  int orientation_;
};

struct OrientedGeodesic {
  BoundaryPoint backward;
  BoundaryPoint forward;

  OrientedGeodesic reversed() const { return {forward, backward}; }
};

// Validates backward != forward.
OrientedGeodesic make_geodesic(BoundaryPoint backward, BoundaryPoint forward);

// Orientation-preserving isometry taking (0, inf) to l and i to a point of l.
Isometry frame_along(const OrientedGeodesic& l);

// 2 arccosh(|tr| / 2).
Scalar translation_length(const Isometry& m);
// (repelling, attracting) fixed points.
OrientedGeodesic axis(const Isometry& m);

// [a:b:c:d] normalized so that [inf:0:1:t] = t.
Scalar cross_ratio(const BoundaryPoint& a, const BoundaryPoint& b, const BoundaryPoint& c,
                   const BoundaryPoint& d);

// log |[x- : y- : x+ : y+]| for l = (x-, x+), lp = (y-, y+).
Scalar asymptotic_slack(const OrientedGeodesic& l, const OrientedGeodesic& lp);

// Angle in (0, pi) between crossing oriented geodesics, nullopt if they do
// not cross.
std::optional<Scalar> crossing_angle(const OrientedGeodesic& l, const OrientedGeodesic& lp);

// Intersection point of two crossing geodesics, nullopt otherwise.
std::optional<Point> intersection(const OrientedGeodesic& l, const OrientedGeodesic& lp);

struct CommonPerpendicular {
  OrientedGeodesic geodesic;  // oriented from l towards lp
  Scalar length;
};

CommonPerpendicular common_perpendicular(const OrientedGeodesic& l, const OrientedGeodesic& lp);

// Orientation-reversing involution fixing l pointwise.
Isometry reflection(const OrientedGeodesic& l);

struct Resolution {
  Scalar lam1;  // the single curve gamma'
  Scalar lam2;  // gamma''
  Scalar lam3;  // gamma'''
};

// Lengths of the resolutions of a self-crossing at angle theta splitting a
// closed geodesic into arcs of lengths L2 and L3 (pair-of-pants trigonometry).
Resolution resolve_crossing(const Scalar& L2, const Scalar& L3, const Scalar& theta);

}  // namespace limitcone::hyp2
