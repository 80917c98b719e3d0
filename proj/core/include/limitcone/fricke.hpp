#pragma once

#include <array>
#include <compare>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "limitcone/hyp2.hpp"

// Trace coordinates for representations of the one-holed torus group
// F2 = <a, b>. Simple closed curves are indexed by slopes p/q in P^1(Q); the
// base Farey triangle is (0/1, 1/1, 1/0) with words (a, ab, b).
namespace limitcone::fricke {

class Slope {
 public:
  // Reduces by gcd and normalizes the sign so that q >= 0 (1/0 for q = 0).
  static Slope make(long p, long q);

  long p() const { return p_; }
  long q() const { return q_; }
  // max(|p|, |q|, |p - q|): q on [0, 1], p on [1, inf], |p| + q on [-inf, 0].
  // Additive under Farey mediants on each of the three arcs.
  long height() const;
  std::string to_string() const;

  friend bool operator==(const Slope&, const Slope&) = default;
  friend std::strong_ordering operator<=>(const Slope& a, const Slope& b);

 private:
  Slope(long p, long q) : p_(p), q_(q) {}
  long p_;
  long q_;
};

struct FareyEntry {
  Slope slope;
  Slope parent_a;  // smaller neighbour in the arc order
  Slope parent_b;
};

// Traces at the regions 0/1, 1/1, 1/0.
struct TraceTriple {
  Scalar A;
  Scalar B;
  Scalar C;
};

enum class Slot { A, B, C };

// Generator pair with tr(m_a) = A, tr(m_b) = B, tr(m_a m_b) = C, for
// A, B, C > 2.
std::pair<hyp2::Isometry, hyp2::Isometry> realize_traces(const Scalar& A, const Scalar& B, const Scalar& C);

// Same parametrization with C < -2, the sign pattern of a pair of pants whose
// boundary curves are a, b and ab.
std::pair<hyp2::Isometry, hyp2::Isometry> realize_pants_traces(const Scalar& A, const Scalar& B, const Scalar& C);

TraceTriple markoff_mutate(const TraceTriple& t, Slot slot);

// A^2 + B^2 + C^2 - ABC - 2.
Scalar commutator_trace(const TraceTriple& t);
// 2 arccosh(-T/2) when T <= -2.
std::optional<Scalar> peripheral_length(const TraceTriple& t);

// Every slope of height <= q_max, with its Farey parents. The three base
// slopes carry themselves as parents.
std::vector<FareyEntry> farey_enumerate(long q_max);

// Word of the simple closed curve of slope s over {a, A = a^-1, b, B = b^-1}.
std::string slope_word(const Slope& s);

// Stern–Brocot descent from the base arc containing s.
struct FareyPath {
  Slope left;
  Slope right;
  std::vector<bool> steps;  // true = descend to the right half
};
FareyPath farey_path(const Slope& s);

// Multi-Fuchsian torus representation in trace coordinates. Traces are
// memoized per component behind a single lock.
class TorusRep {
 public:
  explicit TorusRep(std::vector<TraceTriple> components);
  TorusRep(const TorusRep& other);
  TorusRep& operator=(const TorusRep&) = delete;

  std::size_t dimension() const { return components_.size(); }
  const TraceTriple& component(std::size_t i) const { return components_.at(i); }
  long precision() const;

  // Throws NotDiscretelike if an intermediate trace is <= 2.
  Scalar slope_trace(std::size_t component, const Slope& s) const;
  Scalar slope_length(std::size_t component, const Slope& s) const;

  // Matrix images of (a, b) in a component.
  std::pair<hyp2::Isometry, hyp2::Isometry> generators(std::size_t component) const;

 private:
  std::vector<TraceTriple> components_;
  mutable std::mutex mutex_;
  mutable std::vector<std::map<Slope, Scalar>> cache_;
};

// Component i gets traces 2 cosh(L[i][j] / 2) at (0/1, 1/1, 1/0). Validates
// T_i < -2 and traces > 2 down to the given Farey depth.
TorusRep torus_rep_from_length_triples(const std::vector<std::array<Scalar, 3>>& lengths, int check_depth = 4);

// Half-lengths of a hyperbolic triangle.
struct TriangleSides {
  Scalar a;
  Scalar b;
  Scalar c;
};

struct MutationStep {
  Scalar a, b, c;  // sorted, c largest
  Scalar slack;    // a + b - c
  Scalar predicted;  // K exp(-2(a + b)), K = exp(a0 + b0 + c0)
};

// Parses a path over {A, B, C}; rejects immediate repetitions.
std::vector<Slot> parse_mutation_path(const std::string& path);

// Steps 0..depth along the path (cycled if shorter than depth). Throws
// PrecisionExhausted once a slack drops under the rounding floor.
std::vector<MutationStep> mutation_slacks(const TriangleSides& tau0, const std::vector<Slot>& path, int depth);

struct XiPoint {
  Slope slope;
  Scalar x;
  Scalar y;
  // Exterior angle of the triangle formed with the two Farey parents, at
  // this tip; absent for 0/1 and 1/1.
  std::optional<Scalar> exterior_angle;
};

// xi_{p/q} = (2a / lambda(p/q)) (q, p) for slopes in [0, 1] with q <= q_max,
// where 2a = lambda(0/1), in Farey order.
std::vector<XiPoint> xi_points(const TorusRep& rep, std::size_t component, long q_max);

}  // namespace limitcone::fricke
