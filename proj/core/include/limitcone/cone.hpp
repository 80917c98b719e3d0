#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "limitcone/scalar.hpp"

// Projectivized cones in the Weyl chamber R^d_{>=0}. Hulls and certificates
// are implemented for d = 3, where the projectivization is a triangle.
namespace limitcone::cone {

struct MultiLength {
  std::vector<Scalar> coords;
};

// Barycentric coordinates, summing to 1.
struct SimplexPoint {
  std::vector<Scalar> bary;
};

// Omega = sum c_i e_i^*, normalized so that max |c_i| = 1.
struct Functional {
  std::vector<Scalar> c;

  static Functional normalized(std::vector<Scalar> c);
  Scalar operator()(const std::vector<Scalar>& x) const;
};

SimplexPoint projectivize(const MultiLength& v);

// Position in the equilateral chart with corners e1 = (0, 0), e2 = (1, 0),
// e3 = (1/2, sqrt(3)/2).
std::pair<Scalar, Scalar> chart(const SimplexPoint& p);

// Exactly one negative coefficient, the rest nonnegative, positive sum.
bool azimuthal(const Functional& f);
// min(sum c, -c_min, second smallest c): positive iff strictly azimuthal.
Scalar azimuthal_margin(const Functional& f);

struct Facet {
  std::size_t from;  // indices into HullCertificate::vertices
  std::size_t to;
  Functional functional;  // >= 0 on the hull
  bool azimuthal = false;
};

enum class Verdict { Certified, Partial };

struct HullCertificate {
  std::vector<SimplexPoint> vertices;  // counterclockwise in the chart
  // Input indices landing on each vertex (coincident inputs are merged).
  std::vector<std::vector<std::size_t>> sources;
  std::vector<Facet> facets;
  Verdict verdict = Verdict::Partial;
  bool evaluated = false;
};

struct HullOptions {
  // Normalized orientation below which three points count as collinear;
  // defaults to 2^(-p/2).
  std::optional<Scalar> collinear_tol;
};

HullCertificate convex_hull(const std::vector<SimplexPoint>& points, const HullOptions& options = {});

// Evaluates azimuthality facet by facet; certified iff the hull is a proper
// polygon and every facet is azimuthal.
HullCertificate certify(HullCertificate hull);

enum class PointClass { Vertex, EdgeInterior, Interior };

struct Extremality {
  PointClass kind;
  std::optional<Scalar> exterior_angle;  // vertices only
  std::optional<std::size_t> vertex;     // index into the hull
};

std::vector<Extremality> extremality_report(const std::vector<SimplexPoint>& points, const HullOptions& options = {});
// Exterior angle at each hull vertex in the equilateral chart.
std::vector<Scalar> exterior_angles(const HullCertificate& hull);

enum class Containment { Inside, Boundary, Outside };

struct ContainmentResult {
  Containment status;
  // Smallest signed distance to a facet line in barycentric units (negative
  // outside).
  Scalar margin;
  std::size_t facet;
};

ContainmentResult contains(const HullCertificate& hull, const SimplexPoint& p, const Scalar& tol);

// Batch form of contains: facet normals are prepared once and a binary64
// screen skips the exact evaluation of facets that are clearly far away.
class ContainmentChecker {
 public:
  explicit ContainmentChecker(const HullCertificate& hull);
  ContainmentResult operator()(const SimplexPoint& p, const Scalar& tol) const;

 private:
  std::vector<std::vector<Scalar>> normals_;
  std::vector<std::array<double, 3>> approx_;
};

}  // namespace limitcone::cone
