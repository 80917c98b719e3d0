#include "limitcone/fricke.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace limitcone::fricke {

using hyp2::Isometry;

Slope Slope::make(long p, long q) {
  if (p == 0 && q == 0) throw Error(ErrorCode::InvalidArgument, "slope 0/0");
  long g = std::gcd(p, q);
  p /= g;
  q /= g;
  if (q < 0 || (q == 0 && p < 0)) {
    p = -p;
    q = -q;
  }
  return Slope(p, q);
}

long Slope::height() const { return std::max({std::labs(p_), std::labs(q_), std::labs(p_ - q_)}); }

std::string Slope::to_string() const { return std::to_string(p_) + "/" + std::to_string(q_); }

std::strong_ordering operator<=>(const Slope& a, const Slope& b) {
  // 1/0 is the largest; otherwise compare p/q as rationals (q > 0).
  if (a.q_ == 0 || b.q_ == 0) return (a.q_ == 0) <=> (b.q_ == 0);
  return static_cast<__int128>(a.p_) * b.q_ <=> static_cast<__int128>(b.p_) * a.q_;
}

namespace {

void require_above_two(const Scalar& t, const char* what) {
  if (t <= 2) throw Error(ErrorCode::TraceOutOfRange, std::string(what) + " = " + t.to_string(20) + " <= 2");
}

Isometry matrix(const Scalar& a, const Scalar& b, const Scalar& c, const Scalar& d) {
  return Isometry::from_matrix(a, b, c, d);
}

std::pair<Isometry, Isometry> realize_with_zeta(const Scalar& A, const Scalar& B, const Scalar& zeta) {
  Precision prec{std::max(max_precision(A, B), zeta.precision())};
  Scalar one(1L, prec);
  Scalar zero(prec);
  return {matrix(A, -one, one, zero), matrix(zero, zeta, -(1L / zeta), B)};
}

// Unnormalized projective pair used during Stern–Brocot descent.
struct Frac {
  long p;
  long q;
};

Frac mediant(Frac l, Frac r) { return {l.p + r.p, l.q + r.q}; }

bool same_ratio(Frac f, const Slope& s) {
  return static_cast<__int128>(f.p) * s.q() == static_cast<__int128>(s.p()) * f.q;
}

// s < f as reals, for f with f.q > 0.
bool below(const Slope& s, Frac f) {
  if (s.q() == 0) return false;
  return static_cast<__int128>(s.p()) * f.q < static_cast<__int128>(f.p) * s.q();
}

enum class Arc { Unit, Upper, Lower };

struct ArcStart {
  Arc arc;
  Frac left;
  Frac right;
};

ArcStart arc_of(const Slope& s) {
  if (s.p() < 0) return {Arc::Lower, {-1, 0}, {0, 1}};
  if (s.p() <= s.q()) return {Arc::Unit, {0, 1}, {1, 1}};
  return {Arc::Upper, {1, 1}, {1, 0}};
}

bool is_base(const Slope& s) {
  return (s.p() == 0 && s.q() == 1) || (s.p() == 1 && s.q() == 1) || (s.p() == 1 && s.q() == 0);
}

// Walks the Stern–Brocot path from the arc endpoints to s, reporting each
// descent. Returns the start.
ArcStart descend(const Slope& s, const std::function<void(bool right, Frac m)>& visit) {
  ArcStart start = arc_of(s);
  Frac l = start.left;
  Frac r = start.right;
  while (true) {
    Frac m = mediant(l, r);
    if (same_ratio(m, s)) {
      visit(false, m);
      return start;
    }
    bool right = !below(s, m);
    visit(right, m);
    (right ? l : r) = m;
  }
}

}  // namespace

std::pair<Isometry, Isometry> realize_traces(const Scalar& A, const Scalar& B, const Scalar& C) {
  require_above_two(A, "A");
  require_above_two(B, "B");
  require_above_two(C, "C");
  Scalar zeta = (C + sqrt(sqr(C) - 4)) / 2;
  return realize_with_zeta(A, B, zeta);
}

std::pair<Isometry, Isometry> realize_pants_traces(const Scalar& A, const Scalar& B, const Scalar& C) {
  require_above_two(A, "A");
  require_above_two(B, "B");
  if (C >= -2) throw Error(ErrorCode::TraceOutOfRange, "pants trace C = " + C.to_string(20) + " >= -2");
  Scalar zeta = (C - sqrt(sqr(C) - 4)) / 2;
  return realize_with_zeta(A, B, zeta);
}

TraceTriple markoff_mutate(const TraceTriple& t, Slot slot) {
  switch (slot) {
    case Slot::A: return {t.B * t.C - t.A, t.B, t.C};
    case Slot::B: return {t.A, t.A * t.C - t.B, t.C};
    case Slot::C: return {t.A, t.B, t.A * t.B - t.C};
  }
  return t;
}

Scalar commutator_trace(const TraceTriple& t) { return sqr(t.A) + sqr(t.B) + sqr(t.C) - t.A * t.B * t.C - 2; }

std::optional<Scalar> peripheral_length(const TraceTriple& t) {
  Scalar T = commutator_trace(t);
  if (T > -2) return std::nullopt;
  return acosh1p(-T / 2 - 1) * 2;
}

std::vector<FareyEntry> farey_enumerate(long q_max) {
  if (q_max < 1) throw Error(ErrorCode::InvalidArgument, "q_max must be >= 1");
  std::vector<FareyEntry> out;
  for (auto s : {Slope::make(0, 1), Slope::make(1, 1), Slope::make(1, 0)}) out.push_back({s, s, s});
  auto height = [](Frac f) { return std::max({std::labs(f.p), std::labs(f.q), std::labs(f.p - f.q)}); };
  std::function<void(Frac, Frac)> recurse = [&](Frac l, Frac r) {
    Frac m = mediant(l, r);
    if (height(m) > q_max) return;
    out.push_back({Slope::make(m.p, m.q), Slope::make(l.p, l.q), Slope::make(r.p, r.q)});
    recurse(l, m);
    recurse(m, r);
  };
  recurse({0, 1}, {1, 1});
  recurse({1, 1}, {1, 0});
  recurse({-1, 0}, {0, 1});
  std::sort(out.begin(), out.end(), [](const FareyEntry& x, const FareyEntry& y) { return x.slope < y.slope; });
  return out;
}

FareyPath farey_path(const Slope& s) {
  if (is_base(s)) return {s, s, {}};
  std::vector<bool> steps;
  ArcStart start = descend(s, [&](bool right, Frac m) {
    if (!same_ratio(m, s)) steps.push_back(right);
  });
  return {Slope::make(start.left.p, start.left.q), Slope::make(start.right.p, start.right.q), std::move(steps)};
}

std::string slope_word(const Slope& s) {
  if (s.p() == 0 && s.q() == 1) return "a";
  if (s.p() == 1 && s.q() == 1) return "ab";
  if (s.p() == 1 && s.q() == 0) return "b";
  ArcStart start = arc_of(s);
  std::string wl, wr;
  switch (start.arc) {
    case Arc::Unit: wl = "a", wr = "ab"; break;
    case Arc::Upper: wl = "ab", wr = "b"; break;
    case Arc::Lower: wl = "B", wr = "a"; break;
  }
  std::string result;
  descend(s, [&](bool right, Frac m) {
    std::string wm = wl + wr;
    if (same_ratio(m, s)) {
      result = std::move(wm);
      return;
    }
    (right ? wl : wr) = std::move(wm);
  });
  return result;
}

TorusRep::TorusRep(std::vector<TraceTriple> components)
    : components_(std::move(components)), cache_(components_.size()) {
  if (components_.empty()) throw Error(ErrorCode::InvalidArgument, "representation without components");
}

TorusRep::TorusRep(const TorusRep& other) : components_(other.components_) {
  std::lock_guard lock(other.mutex_);
  cache_ = other.cache_;
}

long TorusRep::precision() const { return components_.front().A.precision(); }

Scalar TorusRep::slope_trace(std::size_t component, const Slope& s) const {
  const TraceTriple& t = components_.at(component);
  if (s == Slope::make(0, 1)) return t.A;
  if (s == Slope::make(1, 1)) return t.B;
  if (s == Slope::make(1, 0)) return t.C;
  {
    std::lock_guard lock(mutex_);
    auto& memo = cache_[component];
    if (auto it = memo.find(s); it != memo.end()) return it->second;
  }
  ArcStart start = arc_of(s);
  Scalar tl, tr, tco;
  switch (start.arc) {
    case Arc::Unit: tl = t.A, tr = t.B, tco = t.C; break;
    case Arc::Upper: tl = t.B, tr = t.C, tco = t.A; break;
    case Arc::Lower: tl = t.C, tr = t.A, tco = t.B; break;
  }
  std::vector<std::pair<Slope, Scalar>> visited;
  Scalar result;
  descend(s, [&](bool right, Frac m) {
    Scalar tm = tl * tr - tco;
    Slope ms = Slope::make(m.p, m.q);
    if (tm <= 2) {
      throw Error(ErrorCode::NotDiscretelike,
                  "trace at slope " + ms.to_string() + " is " + tm.to_string(20) + " <= 2");
    }
    visited.emplace_back(ms, tm);
    if (same_ratio(m, s)) {
      result = std::move(tm);
      return;
    }
    if (right) {
      tco = std::move(tl);
      tl = std::move(tm);
    } else {
      tco = std::move(tr);
      tr = std::move(tm);
    }
  });
  std::lock_guard lock(mutex_);
  auto& memo = cache_[component];
  for (auto& [slope, value] : visited) memo.emplace(slope, std::move(value));
  return result;
}

Scalar TorusRep::slope_length(std::size_t component, const Slope& s) const {
  return acosh1p(slope_trace(component, s) / 2 - 1) * 2;
}

std::pair<Isometry, Isometry> TorusRep::generators(std::size_t component) const {
  const TraceTriple& t = components_.at(component);
  // tr(a) = t(0/1), tr(b) = t(1/0), tr(ab) = t(1/1).
  return realize_traces(t.A, t.C, t.B);
}

TorusRep torus_rep_from_length_triples(const std::vector<std::array<Scalar, 3>>& lengths, int check_depth) {
  std::vector<TraceTriple> comps;
  for (const auto& row : lengths) {
    for (const auto& l : row) {
      if (l <= 0) throw Error(ErrorCode::LengthNonPositive, "length " + l.to_string(20) + " <= 0");
    }
    comps.push_back({cosh(row[0] / 2) * 2, cosh(row[1] / 2) * 2, cosh(row[2] / 2) * 2});
  }
  for (std::size_t i = 0; i < comps.size(); ++i) {
    Scalar T = commutator_trace(comps[i]);
    if (T >= -2) {
      throw Error(ErrorCode::NonConvexCocompact,
                  "component " + std::to_string(i + 1) + " has commutator trace " + T.to_string(20) + " >= -2");
    }
    std::function<void(const Scalar&, const Scalar&, const Scalar&, int)> check =
        [&](const Scalar& tl, const Scalar& tr, const Scalar& tco, int depth) {
          if (depth > check_depth) return;
          Scalar tm = tl * tr - tco;
          if (tm <= 2) {
            throw Error(ErrorCode::NonConvexCocompact,
                        "component " + std::to_string(i + 1) + " has a trace <= 2 at Farey depth " +
                            std::to_string(depth));
          }
          check(tl, tm, tr, depth + 1);
          check(tm, tr, tl, depth + 1);
        };
    const auto& t = comps[i];
    check(t.A, t.B, t.C, 1);
    check(t.B, t.C, t.A, 1);
    check(t.C, t.A, t.B, 1);
  }
  return TorusRep(std::move(comps));
}

std::vector<Slot> parse_mutation_path(const std::string& path) {
  std::vector<Slot> out;
  for (char ch : path) {
    Slot s;
    switch (ch) {
      case 'A': s = Slot::A; break;
      case 'B': s = Slot::B; break;
      case 'C': s = Slot::C; break;
      default: throw Error(ErrorCode::InvalidArgument, std::string("mutation slot '") + ch + "'");
    }
    if (!out.empty() && out.back() == s) {
      throw Error(ErrorCode::InvalidArgument, "mutation path backtracks at position " + std::to_string(out.size()));
    }
    out.push_back(s);
  }
  return out;
}

std::vector<MutationStep> mutation_slacks(const TriangleSides& tau0, const std::vector<Slot>& path, int depth) {
  if (depth < 0) throw Error(ErrorCode::InvalidArgument, "negative depth");
  if (depth > 0 && path.empty()) throw Error(ErrorCode::InvalidArgument, "empty mutation path");
  if (static_cast<std::size_t>(depth) > path.size() && path.front() == path.back()) {
    throw Error(ErrorCode::InvalidArgument, "cycled mutation path backtracks");
  }
  Scalar K = exp(tau0.a + tau0.b + tau0.c);
  long prec = K.precision();
  TraceTriple t{cosh(tau0.a) * 2, cosh(tau0.b) * 2, cosh(tau0.c) * 2};
  std::vector<MutationStep> out;
  for (int k = 0; k <= depth; ++k) {
    if (k > 0) {
      t = markoff_mutate(t, path[(k - 1) % path.size()]);
    }
    std::array<Scalar, 3> sides;
    const Scalar* traces[3] = {&t.A, &t.B, &t.C};
    for (int i = 0; i < 3; ++i) {
      if (*traces[i] <= 2) throw Error(ErrorCode::NotDiscretelike, "trace <= 2 at mutation step " + std::to_string(k));
      sides[i] = acosh1p(*traces[i] / 2 - 1);
    }
    std::sort(sides.begin(), sides.end());
    Scalar slack = sides[0] + sides[1] - sides[2];
    Scalar floor = max(Scalar(1L, Precision{prec}), sides[2]) * pow2(64 - prec, Precision{prec});
    if (slack <= floor) {
      throw Error(ErrorCode::PrecisionExhausted,
                  "slack at step " + std::to_string(k) + " is below the rounding floor at " + std::to_string(prec) +
                      " bits");
    }
    Scalar predicted = K * exp((sides[0] + sides[1]) * -2);
    out.push_back({sides[0], sides[1], sides[2], std::move(slack), std::move(predicted)});
  }
  return out;
}

std::vector<XiPoint> xi_points(const TorusRep& rep, std::size_t component, long q_max) {
  if (q_max < 1) throw Error(ErrorCode::InvalidArgument, "q_max must be >= 1");
  Scalar two_a = rep.slope_length(component, Slope::make(0, 1));
  std::vector<FareyEntry> unit;
  for (auto& e : farey_enumerate(q_max)) {
    if (e.slope.p() >= 0 && e.slope.q() > 0 && e.slope.p() <= e.slope.q() && e.slope.q() <= q_max) unit.push_back(e);
  }
  std::map<Slope, std::pair<Scalar, Scalar>> coords;
  for (const auto& e : unit) {
    Scalar scale = two_a / rep.slope_length(component, e.slope);
    coords.emplace(e.slope, std::make_pair(scale * e.slope.q(), scale * e.slope.p()));
  }
  std::vector<XiPoint> out;
  for (const auto& e : unit) {
    const auto& [x, y] = coords.at(e.slope);
    std::optional<Scalar> angle;
    if (e.slope != e.parent_a) {
      const auto& [x1, y1] = coords.at(e.parent_a);
      const auto& [x2, y2] = coords.at(e.parent_b);
      Scalar ux = x - x1, uy = y - y1;
      Scalar vx = x2 - x, vy = y2 - y;
      angle = atan2(ux * vy - uy * vx, ux * vx + uy * vy);
    }
    out.push_back({e.slope, x, y, std::move(angle)});
  }
  return out;
}

}  // namespace limitcone::fricke
