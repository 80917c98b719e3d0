#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "limitcone/cone.hpp"

using namespace limitcone;
using namespace limitcone::cone;

namespace {

const Precision P{256};

Scalar S(int v) { return Scalar(v, P); }
Scalar S(const char* text) { return Scalar::parse(text, P); }
Scalar S(double v) { return Scalar(v, P); }

SimplexPoint pt(int a, int b, int c) { return projectivize({{S(a), S(b), S(c)}}); }
SimplexPoint bary(const char* a, const char* b, const char* c) { return {{S(a), S(b), S(c)}}; }

std::vector<SimplexPoint> pants() { return {pt(2, 2, 1), pt(1, 2, 2), pt(2, 1, 2)}; }

SimplexPoint random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.01, 1.0);
  return projectivize({{S(d(rng)), S(d(rng)), S(d(rng))}});
}

bool same_point(const SimplexPoint& a, const SimplexPoint& b) {
  for (int i = 0; i < 3; ++i)
    if (abs(a.bary[i] - b.bary[i]) > pow2(-200, P)) return false;
  return true;
}

}  // namespace

TEST_CASE("projectivize") {
  auto p = pt(12, 16, 16);
  CHECK(p.bary[0] == S(3) / 11L);
  CHECK(p.bary[1] == S(4) / 11L);
  CHECK(p.bary[2] == S(4) / 11L);
  auto c = pt(1, 1, 1);
  for (const auto& v : c.bary) CHECK(v == S(1) / 3L);
  try {
    pt(0, 0, 0);
    FAIL("expected ZeroVector");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroVector);
  }
}

TEST_CASE("scale invariance") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(0.01, 50.0);
  for (int trial = 0; trial < 200; ++trial) {
    MultiLength v{{S(d(rng)), S(d(rng)), S(d(rng))}};
    Scalar t = S(d(rng));
    MultiLength w{{v.coords[0] * t, v.coords[1] * t, v.coords[2] * t}};
    auto a = projectivize(v), b = projectivize(w);
    for (int i = 0; i < 3; ++i) CHECK(relative_error(a.bary[i], b.bary[i]) < pow2(8 - P.bits, P));
  }
}

TEST_CASE("azimuthal functionals") {
  CHECK(azimuthal(Functional::normalized({S(-1), S(1), S(1)})));
  CHECK_FALSE(azimuthal(Functional::normalized({S(1), S(1), S(1)})));
  CHECK_FALSE(azimuthal(Functional::normalized({S(-2), S(1), S("0.5")})));
  CHECK_FALSE(azimuthal(Functional::normalized({S(-1), S(-1), S(3)})));
  CHECK(azimuthal(Functional::normalized({S(-1), S(0), S(2)})));
  CHECK(azimuthal_margin(Functional::normalized({S(-1), S(1), S(1)})) > 0L);
  CHECK(azimuthal_margin(Functional::normalized({S(-1), S(0), S(2)})).is_zero());
}

TEST_CASE("pants triangle is certified") {
  auto hull = certify(convex_hull(pants()));
  CHECK(hull.vertices.size() == 3);
  CHECK(hull.verdict == Verdict::Certified);
  REQUIRE(hull.facets.size() == 3);
  // The facet through (2,2,1) and (1,2,2) is proportional to their cross
  // product (2, -3, 2).
  bool found = false;
  for (const auto& f : hull.facets) {
    CHECK(f.azimuthal);
    auto on = [&](const SimplexPoint& p) { return abs(f.functional(p.bary)) < pow2(-200, P); };
    if (on(pt(2, 2, 1)) && on(pt(1, 2, 2))) {
      found = true;
      CHECK(f.functional.c[0] == S(2) / 3L);
      CHECK(f.functional.c[1] == -1L);
      CHECK(f.functional.c[2] == S(2) / 3L);
    }
  }
  CHECK(found);
}

TEST_CASE("degenerate and partial hulls") {
  auto single = certify(convex_hull({pt(1, 2, 3), pt(1, 2, 3), pt(2, 4, 6)}));
  CHECK(single.vertices.size() == 1);
  CHECK(single.verdict == Verdict::Partial);

  auto segment = certify(convex_hull({pt(1, 2, 3), pt(3, 2, 1)}));
  CHECK(segment.vertices.size() == 2);
  CHECK(segment.verdict == Verdict::Partial);

  auto with_inner = convex_hull({pt(2, 2, 1), pt(1, 2, 2), pt(2, 1, 2), pt(1, 1, 1)});
  CHECK(with_inner.vertices.size() == 3);

  // Facets on the chamber walls are supporting but not azimuthal.
  auto corners = certify(convex_hull({pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1)}));
  CHECK(corners.vertices.size() == 3);
  CHECK(corners.verdict == Verdict::Partial);

  // A small hull near e1 misses the central ray.
  auto corner = certify(convex_hull({bary("0.9", "0.05", "0.05"), bary("0.8", "0.15", "0.05"),
                                     bary("0.8", "0.05", "0.15"), bary("0.7", "0.15", "0.15")}));
  CHECK(corner.verdict == Verdict::Partial);
  int non_azimuthal = 0;
  for (const auto& f : corner.facets) non_azimuthal += !f.azimuthal;
  CHECK(non_azimuthal > 0);
}

TEST_CASE("containment against the pants triangle") {
  auto hull = certify(convex_hull(pants()));
  Scalar tol = S("1e-12");
  CHECK(contains(hull, pt(1, 1, 1), tol).status == Containment::Inside);
  CHECK(contains(hull, pt(2, 2, 1), tol).status == Containment::Boundary);
  auto out = contains(hull, bary("0.9", "0.05", "0.05"), tol);
  CHECK(out.status == Containment::Outside);
  CHECK(out.margin < 0L);

  ContainmentChecker check(hull);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    auto p = random_point(rng);
    auto slow = contains(hull, p, tol);
    auto fast = check(p, tol);
    CHECK(slow.status == fast.status);
  }
  try {
    contains(convex_hull({pt(1, 1, 1)}), pt(1, 1, 1), tol);
    FAIL("expected DegenerateHull");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateHull);
  }
}

TEST_CASE("extremality and exterior angles") {
  auto pts = pants();
  // Midpoint of the first edge and the barycenter.
  pts.push_back({{(pts[0].bary[0] + pts[1].bary[0]) / 2L, (pts[0].bary[1] + pts[1].bary[1]) / 2L,
                  (pts[0].bary[2] + pts[1].bary[2]) / 2L}});
  pts.push_back(pt(1, 1, 1));
  auto report = extremality_report(pts);
  REQUIRE(report.size() == 5);
  for (int i = 0; i < 3; ++i) {
    CHECK(report[i].kind == PointClass::Vertex);
    REQUIRE(report[i].exterior_angle);
    CHECK(*report[i].exterior_angle > 0L);
  }
  CHECK(report[3].kind == PointClass::EdgeInterior);
  CHECK(report[4].kind == PointClass::Interior);

  auto hull = convex_hull(pants());
  Scalar total(P);
  for (const auto& a : exterior_angles(hull)) total += a;
  CHECK(relative_error(total, 2L * pi(P)) < pow2(16 - P.bits, P));
}

TEST_CASE("random hulls: support, idempotence") {
  std::mt19937_64 rng(21);
  Scalar slack = -pow2(24 - P.bits, P);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<SimplexPoint> pts;
    for (int k = 0; k < 60; ++k) pts.push_back(random_point(rng));
    auto hull = convex_hull(pts);
    REQUIRE(hull.vertices.size() >= 3);
    for (const auto& f : hull.facets)
      for (const auto& v : hull.vertices) CHECK(f.functional(v.bary) >= slack);
    for (const auto& p : pts) CHECK(contains(hull, p, S("1e-30")).status != Containment::Outside);

    auto again = convex_hull(hull.vertices);
    REQUIRE(again.vertices.size() == hull.vertices.size());
    // Same cycle up to rotation.
    std::size_t start = 0;
    while (start < again.vertices.size() && !same_point(again.vertices[start], hull.vertices[0])) ++start;
    REQUIRE(start < again.vertices.size());
    for (std::size_t i = 0; i < hull.vertices.size(); ++i)
      CHECK(same_point(again.vertices[(start + i) % again.vertices.size()], hull.vertices[i]));
  }
}

TEST_CASE("crossing slacks dominate along one side") {
  // For azimuthal Omega with negative coefficient at i0 and c = Omega(1,1,1):
  // max(Omega(X) - c X_i0, Omega(X') - c X'_i0) >= 0 with X = -log sigma and
  // X' = -log(1 - sigma).
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(1e-9, 1.0 - 1e-9);
  std::uniform_real_distribution<double> coef(0.0, 1.0);
  const Precision p{128};
  int violations = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    int i0 = static_cast<int>(rng() % 3);
    std::vector<Scalar> c(3);
    for (int i = 0; i < 3; ++i) c[i] = Scalar(coef(rng), p);
    // Negative coefficient smaller in size than the sum of the others.
    c[i0] = -(c[(i0 + 1) % 3] + c[(i0 + 2) % 3]) * Scalar(unit(rng), p);
    auto omega = Functional::normalized(c);
    if (!azimuthal(omega)) continue;
    Scalar sum = omega.c[0] + omega.c[1] + omega.c[2];
    std::vector<Scalar> X(3), Xp(3);
    for (int i = 0; i < 3; ++i) {
      Scalar s(unit(rng), p);
      X[i] = -log(s);
      Xp[i] = -log1p(-s);
    }
    Scalar lhs = omega(X) - sum * X[i0];
    Scalar rhs = omega(Xp) - sum * Xp[i0];
    if (max(lhs, rhs) < -pow2(16 - p.bits, p) * 100L) ++violations;
  }
  CHECK(violations == 0);
}
