#include "limitcone/scenario.hpp"

#include <openssl/sha.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "json.hpp"

#include "limitcone/expr.hpp"

namespace limitcone::scenario {

using nlohmann::json;

std::string to_string(Kind kind) {
  switch (kind) {
    case Kind::Pants: return "pants";
    case Kind::Hexagon: return "hexagon";
    case Kind::Ngon: return "ngon";
    case Kind::Fish: return "fish";
    case Kind::Custom: return "custom";
  }
  return "?";
}

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::Config, what); }

// Scalars come as strings; integers are accepted as JSON numbers since they
// convert exactly. Fractional JSON numbers are refused.
std::string scalar_text(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  config_error(key + ": expected a quoted decimal or expression");
}

std::vector<std::vector<std::string>> scalar_matrix(const json& v, const std::string& key, std::size_t rows) {
  if (!v.is_array() || v.size() != rows) config_error(key + ": expected " + std::to_string(rows) + " rows");
  std::vector<std::vector<std::string>> out;
  for (const auto& row : v) {
    if (!row.is_array() || row.size() != 3) config_error(key + ": every row needs 3 entries");
    std::vector<std::string> r;
    for (const auto& e : row) r.push_back(scalar_text(e, key));
    out.push_back(std::move(r));
  }
  return out;
}

long integer(const json& v, const std::string& key) {
  if (!v.is_number_integer()) config_error(key + ": expected an integer");
  return v.get<long>();
}

Kind kind_from(const std::string& name) {
  for (Kind k : {Kind::Pants, Kind::Hexagon, Kind::Ngon, Kind::Fish, Kind::Custom}) {
    if (to_string(k) == name) return k;
  }
  config_error("unknown scenario \"" + name + "\"");
}

Scalar eval(const std::string& text, Precision prec, const std::string& key) {
  Scalar v = evaluate_expression(text, prec);
  if (!(v > 0)) config_error(key + " = " + text + " must be positive");
  return v;
}

std::vector<Scalar> ngon_alpha(const ScenarioConfig& cfg, Precision prec) {
  std::vector<Scalar> out;
  int m = 2 * cfg.genus - 1;
  for (int k = 0; k < m; ++k) {
    if (!cfg.alpha.empty()) {
      out.push_back(eval(cfg.alpha[k], prec, "alpha"));
    } else {
      out.push_back((8 + k * sqrt(Scalar(2L, prec))) / 8);
    }
  }
  return out;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) config_error("config must be a JSON object");
  if (!j.contains("scenario") || !j["scenario"].is_string()) config_error("missing \"scenario\"");

  ScenarioConfig cfg;
  cfg.kind = kind_from(j["scenario"].get<std::string>());
  for (const auto& [key, v] : j.items()) {
    if (key == "scenario") continue;
    if (key == "precision_bits") {
      cfg.precision_bits = integer(v, key);
      if (*cfg.precision_bits < kDefaultPrecisionBits) config_error("precision_bits must be >= 256");
    } else if (key == "word_max_len") {
      cfg.word_max_len = static_cast<int>(integer(v, key));
      if (*cfg.word_max_len < 1) config_error("word_max_len must be >= 1");
    } else if (key == "out_dir") {
      if (!v.is_string()) config_error("out_dir: expected a string");
      cfg.out_dir = v.get<std::string>();
    } else if (key == "vectors" && cfg.kind == Kind::Pants) {
      cfg.vectors = scalar_matrix(v, key, 3);
    } else if (key == "lengths" && cfg.kind == Kind::Custom) {
      cfg.lengths = scalar_matrix(v, key, 3);
    } else if (key == "x" && (cfg.kind == Kind::Hexagon || cfg.kind == Kind::Ngon)) {
      cfg.x = scalar_text(v, key);
    } else if (key == "delta" && cfg.kind == Kind::Hexagon) {
      cfg.delta = scalar_text(v, key);
    } else if (key == "genus" && cfg.kind == Kind::Ngon) {
      cfg.genus = static_cast<int>(integer(v, key));
      if (cfg.genus < 2) config_error("genus must be >= 2");
    } else if (key == "alpha" && cfg.kind == Kind::Ngon) {
      if (!v.is_array()) config_error("alpha: expected a list");
      for (const auto& e : v) cfg.alpha.push_back(scalar_text(e, key));
    } else if ((key == "a" || key == "b") && cfg.kind == Kind::Fish) {
      (key == "a" ? cfg.a : cfg.b) = scalar_text(v, key);
    } else if (key == "q_max" && (cfg.kind == Kind::Fish || cfg.kind == Kind::Custom)) {
      cfg.q_max = integer(v, key);
      if (cfg.q_max < 1) config_error("q_max must be >= 1");
    } else {
      config_error("unexpected key \"" + key + "\" for scenario " + to_string(cfg.kind));
    }
  }
  if (cfg.kind == Kind::Pants && cfg.vectors.empty()) config_error("pants needs \"vectors\"");
  if (cfg.kind == Kind::Custom && cfg.lengths.empty()) config_error("custom needs \"lengths\"");
  if (cfg.kind == Kind::Ngon && !cfg.alpha.empty() && static_cast<int>(cfg.alpha.size()) != 2 * cfg.genus - 1) {
    config_error("alpha needs 2g - 1 entries");
  }
  // Evaluate once so that malformed expressions fail at parse time.
  Precision probe{kDefaultPrecisionBits};
  for (const auto& rows : {cfg.vectors, cfg.lengths}) {
    for (const auto& row : rows) {
      for (const auto& e : row) eval(e, probe, "entry");
    }
  }
  switch (cfg.kind) {
    case Kind::Hexagon: eval(cfg.delta, probe, "delta"); [[fallthrough]];
    case Kind::Ngon: eval(cfg.x, probe, "x"); break;
    case Kind::Fish: eval(cfg.a, probe, "a"); eval(cfg.b, probe, "b"); break;
    default: break;
  }
  if (cfg.kind == Kind::Ngon) ngon_alpha(cfg, probe);
  return cfg;
}

std::string config_echo(const ScenarioConfig& cfg) {
  json j;
  j["scenario"] = to_string(cfg.kind);
  switch (cfg.kind) {
    case Kind::Pants: j["vectors"] = cfg.vectors; break;
    case Kind::Hexagon: j["x"] = cfg.x; j["delta"] = cfg.delta; break;
    case Kind::Ngon:
      j["x"] = cfg.x;
      j["genus"] = cfg.genus;
      if (!cfg.alpha.empty()) j["alpha"] = cfg.alpha;
      break;
    case Kind::Fish: j["a"] = cfg.a; j["b"] = cfg.b; j["q_max"] = cfg.q_max; break;
    case Kind::Custom: j["lengths"] = cfg.lengths; j["q_max"] = cfg.q_max; break;
  }
  if (cfg.precision_bits) j["precision_bits"] = *cfg.precision_bits;
  j["word_max_len"] = cfg.word_max_len.value_or(default_word_max_len(cfg.kind));
  return j.dump();
}

int default_word_max_len(Kind kind) {
  switch (kind) {
    case Kind::Pants: return 10;
    case Kind::Hexagon: return 10;
    case Kind::Ngon: return 6;
    case Kind::Fish: return 14;
    case Kind::Custom: return 12;
  }
  return 10;
}

namespace {

// Half the summed side lengths of the chain pentagons bounds every edge and
// chord of the polygon. Each parameter may still be scaled by up to 8 by the
// adjustment, which lengthens a side by at most 2 log 8 < 5.
double half_perimeter_bound(int genus, const std::vector<Scalar>& params) {
  double total = 0;
  for (int k = 1; k <= 2 * genus - 2; ++k) {
    auto sides = polygons::pentagon_sides({params[k - 1], params[k]});
    for (const auto& s : sides) total += s.to_double() + 5;
  }
  return total / 2;
}

}  // namespace

long effective_precision(const ScenarioConfig& cfg) {
  long requested = cfg.precision_bits.value_or(kDefaultPrecisionBits);
  if (requested < kDefaultPrecisionBits) config_error("precision_bits must be >= 256");
  Precision probe{kDefaultPrecisionBits};
  double lambda = 0;
  switch (cfg.kind) {
    case Kind::Pants:
      for (const auto& row : cfg.vectors) {
        for (const auto& e : row) lambda = std::max(lambda, eval(e, probe, "vectors").to_double());
      }
      break;
    case Kind::Hexagon: {
      Scalar x = eval(cfg.x, probe, "x");
      Scalar y = x * eval(cfg.delta, probe, "delta");
      lambda = half_perimeter_bound(2, {x, y, x});
      break;
    }
    case Kind::Ngon: {
      Scalar x = eval(cfg.x, probe, "x");
      std::vector<Scalar> flat(2 * cfg.genus - 1, x), skewed;
      for (const auto& a : ngon_alpha(cfg, probe)) skewed.push_back(exp(a * log(x)));
      lambda = std::max(half_perimeter_bound(cfg.genus, flat), half_perimeter_bound(cfg.genus, skewed));
      break;
    }
    case Kind::Fish: {
      double b = std::max(eval(cfg.a, probe, "a").to_double(), eval(cfg.b, probe, "b").to_double());
      lambda = 2.0 * static_cast<double>(cfg.q_max) * b;
      break;
    }
    case Kind::Custom:
      for (const auto& row : cfg.lengths) {
        for (const auto& e : row) lambda = std::max(lambda, eval(e, probe, "lengths").to_double());
      }
      lambda *= static_cast<double>(cfg.q_max);
      break;
  }
  long rule = static_cast<long>(std::ceil(3.0 * lambda / std::log(2.0))) + 64;
  return std::max({requested, kDefaultPrecisionBits, rule});
}

std::string git_blob_hash(const std::string& content) {
  std::string blob = "blob " + std::to_string(content.size()) + '\0' + content;
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(blob.data()), blob.size(), digest);
  std::string hex;
  char buf[3];
  for (unsigned char c : digest) {
    std::snprintf(buf, sizeof buf, "%02x", c);
    hex += buf;
  }
  return hex;
}

namespace {

struct Built {
  std::vector<Curve> curves;
  wordgen::Representation reps;
  wordgen::WordKind kind = wordgen::WordKind::FreeRank2;
  int generators = 2;
  cone::HullOptions hull_options;
};

cone::HullCertificate hull_of(const std::vector<Curve>& curves, const cone::HullOptions& options) {
  std::vector<cone::SimplexPoint> pts;
  for (const auto& c : curves) pts.push_back(c.sp);
  return cone::certify(cone::convex_hull(pts, options));
}

// Positive exactly when every facet is azimuthal and the hull has at least
// target vertices.
double hull_score(const cone::HullCertificate& hull, std::size_t target) {
  double margin = hull.facets.empty() ? -1.0 : 1e300;
  for (const auto& f : hull.facets) margin = std::min(margin, cone::azimuthal_margin(f.functional).to_double());
  if (hull.vertices.size() >= target) return margin;
  return std::min(margin, 0.0) - static_cast<double>(target - hull.vertices.size());
}

Curve make_curve(std::string id, std::string kind, std::vector<Scalar> lengths, int multiplicity = 1) {
  Curve c;
  c.id = std::move(id);
  c.kind = std::move(kind);
  c.ml.coords = std::move(lengths);
  c.sp = cone::projectivize(c.ml);
  c.multiplicity = multiplicity;
  return c;
}

// Reflection images conjugated so that the polygon vertex that minimizes the
// largest letter norm sits at i. The raw chain embedding keeps side 0 at i and
// lets far sides carry entries of size exp(diameter).
std::vector<hyp2::Isometry> centered(const std::vector<hyp2::Isometry>& letters, const std::vector<hyp2::Point>& candidates) {
  std::optional<Scalar> best_norm;
  std::vector<hyp2::Isometry> best;
  for (const auto& v : candidates) {
    auto g = hyp2::Isometry::from_matrix(Scalar(1L, v.x.prec()), -v.x, Scalar(v.x.prec()), v.y);
    auto g_inv = g.inverse();
    std::vector<hyp2::Isometry> conj;
    Scalar worst(v.x.prec());
    for (const auto& r : letters) {
      conj.push_back(g * r * g_inv);
      const auto& m = conj.back();
      worst = max(worst, max(abs(m.a()) + abs(m.b()), abs(m.c()) + abs(m.d())));
    }
    if (!best_norm || worst < *best_norm) {
      best_norm = worst;
      best = std::move(conj);
    }
  }
  return best;
}

// Edges and chords of three labelled polygons, one per component, with
// shifts 0, 1, 2.
Built polygon_triple(int genus, const std::array<std::vector<Scalar>, 3>& params) {
  Built out;
  out.kind = wordgen::WordKind::EvenReflection;
  out.generators = 2 * genus + 2;
  std::vector<std::map<polygons::CurveLabel, Scalar>> systems;
  for (int s = 0; s < 3; ++s) {
    auto poly = polygons::build_chain_polygon(genus, params[s]).shifted(s);
    systems.push_back(polygons::labelled_length_system(poly));
    out.reps.push_back(centered(polygons::reflection_generators(poly), poly.vertices));
  }
  for (const auto& [label, len] : systems[0]) {
    out.curves.push_back(make_curve(label.to_string(), label.is_edge() ? "edge" : "chord",
                                    {len, systems[1].at(label), systems[2].at(label)}, label.lift_multiplicity()));
  }
  return out;
}

Built torus_scenario(const std::vector<std::array<Scalar, 3>>& lengths, long q_max) {
  Built out;
  fricke::TorusRep rep = fricke::torus_rep_from_length_triples(lengths);
  for (const auto& e : fricke::farey_enumerate(q_max)) {
    std::vector<Scalar> ml;
    for (std::size_t i = 0; i < rep.dimension(); ++i) ml.push_back(rep.slope_length(i, e.slope));
    out.curves.push_back(make_curve(e.slope.to_string(), "slope", std::move(ml)));
  }
  std::vector<Scalar> peripheral;
  for (std::size_t i = 0; i < rep.dimension(); ++i) {
    auto len = fricke::peripheral_length(rep.component(i));
    if (!len) throw Error(ErrorCode::NonConvexCocompact, "commutator is not hyperbolic");
    peripheral.push_back(*len);
  }
  out.curves.push_back(make_curve("[a,b]", "peripheral", std::move(peripheral)));
  std::vector<std::pair<hyp2::Isometry, hyp2::Isometry>> gens;
  for (std::size_t i = 0; i < rep.dimension(); ++i) gens.push_back(rep.generators(i));
  out.reps = wordgen::free_rank2_images(gens);
  return out;
}

Built build_pants(const ScenarioConfig& cfg, Precision prec) {
  if (cfg.vectors.size() != 3) config_error("pants needs three vectors");
  std::vector<std::vector<Scalar>> v(3);
  for (int c = 0; c < 3; ++c) {
    for (const auto& e : cfg.vectors[c]) v[c].push_back(eval(e, prec, "vectors"));
  }
  Built out;
  const char* names[] = {"a", "b", "ab"};
  for (int c = 0; c < 3; ++c) out.curves.push_back(make_curve(names[c], "peripheral", v[c]));
  std::vector<std::pair<hyp2::Isometry, hyp2::Isometry>> gens;
  for (int i = 0; i < 3; ++i) {
    gens.push_back(fricke::realize_pants_traces(cosh(v[0][i] / 2) * 2, cosh(v[1][i] / 2) * 2, -cosh(v[2][i] / 2) * 2));
  }
  out.reps = wordgen::free_rank2_images(gens);
  return out;
}

std::vector<Scalar> scaled(const std::vector<Scalar>& base, std::size_t from, std::size_t count) {
  return {base.begin() + static_cast<long>(from), base.begin() + static_cast<long>(from + count)};
}

Built build_hexagon(const ScenarioConfig& cfg, Precision prec, std::optional<polygons::AdjustResult>& adjustment) {
  Scalar x = eval(cfg.x, prec, "x");
  Scalar y = x * eval(cfg.delta, prec, "delta");
  auto triple = [](const std::vector<Scalar>& xy) {
    std::vector<Scalar> p{xy[0], xy[1], xy[0]};
    return std::array<std::vector<Scalar>, 3>{p, p, p};
  };
  auto objective = [&](const std::vector<Scalar>& xy) {
    try {
      Built b = polygon_triple(2, triple(xy));
      return hull_score(hull_of(b.curves, {}), 6);
    } catch (const Error&) {
      return -1e9;
    }
  };
  adjustment = polygons::multiplicative_adjust({x, y}, objective);
  return polygon_triple(2, triple(adjustment->params));
}

Built build_ngon(const ScenarioConfig& cfg, Precision prec, std::optional<polygons::AdjustResult>& adjustment) {
  int g = cfg.genus;
  std::size_t m = static_cast<std::size_t>(2 * g - 1);
  Scalar x = eval(cfg.x, prec, "x");
  std::vector<Scalar> skewed;
  for (const auto& a : ngon_alpha(cfg, prec)) skewed.push_back(exp(a * log(x)));
  // The first two polygons are adjusted; the third keeps x^alpha_k.
  std::vector<Scalar> base(2 * m, x);
  auto triple = [&](const std::vector<Scalar>& p) {
    return std::array<std::vector<Scalar>, 3>{scaled(p, 0, m), scaled(p, m, m), skewed};
  };
  std::size_t target = static_cast<std::size_t>(4 * g - 1);
  auto objective = [&](const std::vector<Scalar>& p) {
    try {
      Built b = polygon_triple(g, triple(p));
      return hull_score(hull_of(b.curves, {}), target);
    } catch (const Error&) {
      return -1e9;
    }
  };
  adjustment = polygons::multiplicative_adjust(base, objective);
  return polygon_triple(g, triple(adjustment->params));
}

Built build_fish(const ScenarioConfig& cfg, Precision prec) {
  Scalar a = eval(cfg.a, prec, "a") * 2, b = eval(cfg.b, prec, "b") * 2;
  Built out = torus_scenario({{a, b, b}, {b, a, b}, {b, b, a}}, cfg.q_max);
  // Keep the collinearity tolerance below the smallest predicted exterior
  // angle (K / 2a) exp(-lambda) q, K = exp(a + 2b) with a, b half-lengths.
  Scalar k_over = exp((a + b * 2) / 2) / a;
  std::optional<Scalar> smallest;
  for (const auto& c : out.curves) {
    if (c.kind != "slope") continue;
    auto s = c.id.find('/');
    long q = std::labs(std::stol(c.id.substr(s + 1)));
    if (q == 0) continue;
    Scalar lam = *std::min_element(c.ml.coords.begin(), c.ml.coords.end());
    Scalar pred = k_over * exp(-lam) * q;
    if (!smallest || pred < *smallest) smallest = pred;
  }
  Scalar fallback = pow2(-prec.bits / 2, prec);
  out.hull_options.collinear_tol = smallest ? min(fallback, *smallest * pow2(-16, prec)) : fallback;
  return out;
}

Built build_custom(const ScenarioConfig& cfg, Precision prec) {
  std::vector<std::array<Scalar, 3>> rows;
  for (const auto& row : cfg.lengths) rows.push_back({eval(row[0], prec, "lengths"), eval(row[1], prec, "lengths"), eval(row[2], prec, "lengths")});
  return torus_scenario(rows, cfg.q_max);
}

Scalar bary_distance(const cone::SimplexPoint& p, const cone::SimplexPoint& q) {
  Scalar s = sqr(p.bary[0] - q.bary[0]);
  for (std::size_t i = 1; i < p.bary.size(); ++i) s += sqr(p.bary[i] - q.bary[i]);
  return sqrt(s);
}

void nearest_distances(CloudSummary& cloud, const cone::HullCertificate& hull) {
  std::vector<std::array<double, 3>> approx;
  for (const auto& p : cloud.points) approx.push_back({p.sp.bary[0].to_double(), p.sp.bary[1].to_double(), p.sp.bary[2].to_double()});
  for (const auto& v : hull.vertices) {
    std::array<double, 3> d{v.bary[0].to_double(), v.bary[1].to_double(), v.bary[2].to_double()};
    // Exact distances for the few closest candidates by binary64 distance.
    std::vector<std::pair<double, std::size_t>> best;
    for (std::size_t i = 0; i < approx.size(); ++i) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += (approx[i][k] - d[k]) * (approx[i][k] - d[k]);
      best.emplace_back(s, i);
      if (best.size() > 8) {
        std::nth_element(best.begin(), best.begin() + 4, best.end());
        best.resize(4);
      }
    }
    std::optional<Scalar> nearest;
    for (const auto& [s, i] : best) {
      Scalar dist = bary_distance(cloud.points[i].sp, v);
      if (!nearest || dist < *nearest) nearest = dist;
    }
    cloud.nearest_vertex_distance.push_back(nearest ? *nearest : Scalar(-1L, v.bary[0].prec()));
  }
}

// Jordan projections must not change when a word is conjugated by a letter.
bool conjugation_spot_check(const Built& b, const std::vector<wordgen::CloudPoint>& points, const Scalar& tol) {
  std::size_t checked = 0;
  for (const auto& p : points) {
    if (checked == 16) break;
    if (p.word.size() < 2) continue;
    wordgen::Word w = p.word;
    std::uint8_t first = w.letters.front();
    // x w x^-1 as a letter sequence; for reflections x^-1 = x.
    wordgen::Word inv{w.kind, {first}};
    inv = inv.inverse();
    wordgen::Word conj{w.kind, {}};
    conj.letters.push_back(inv.letters[0]);
    conj.letters.insert(conj.letters.end(), w.letters.begin(), w.letters.end());
    conj.letters.push_back(first);
    for (std::size_t c = 0; c < b.reps.size(); ++c) {
      Scalar t = abs(wordgen::evaluate(b.reps[c], conj).trace());
      if (t <= 2) return false;
      Scalar len = acosh1p(t / 2 - 1) * 2;
      if (!approx_equal(len, p.ml.coords[c], tol)) return false;
    }
    ++checked;
  }
  return true;
}

}  // namespace

ReportBundle run_scenario(const ScenarioConfig& cfg, const RunOptions& options) {
  ReportBundle out;
  out.config = cfg;
  out.precision_bits = effective_precision(cfg);
  out.input_hash = git_blob_hash(config_echo(cfg));
  Precision prec{out.precision_bits};

  auto build = [&](Precision at) {
    switch (cfg.kind) {
      case Kind::Pants: return build_pants(cfg, at);
      case Kind::Hexagon: return build_hexagon(cfg, at, out.adjustment);
      case Kind::Ngon: return build_ngon(cfg, at, out.adjustment);
      case Kind::Fish: return build_fish(cfg, at);
      case Kind::Custom: return build_custom(cfg, at);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown scenario");
  };
  Built built = build(prec);

  // A product of n letters loses up to n log2 max||letter|| bits to
  // cancellation. Rebuild at a precision that leaves 96 clean bits on top of
  // the rounding bound used by the cloud.
  const int word_max_len = cfg.word_max_len.value_or(default_word_max_len(cfg.kind));
  if (options.cloud) {
    double worst = 0;
    for (const auto& norms : wordgen::letter_log_norms(built.reps)) {
      for (double n : norms) worst = std::max(worst, n);
    }
    long needed = 16 + 96 + static_cast<long>(std::ceil(std::log2(word_max_len) + word_max_len * worst));
    needed = (needed + 31) / 32 * 32;
    if (needed > prec.bits) {
      out.precision_bits = needed;
      prec = Precision{needed};
      built = build(prec);
    }
  }

  out.hull = hull_of(built.curves, built.hull_options);
  auto angles = cone::exterior_angles(out.hull);
  for (std::size_t v = 0; v < out.hull.sources.size(); ++v) {
    for (std::size_t i : out.hull.sources[v]) {
      built.curves[i].vertex = v;
      if (!angles.empty()) built.curves[i].exterior_angle = angles[v];
    }
  }
  out.curves = std::move(built.curves);

  Scalar tight = pow2(-prec.bits / 2, prec);
  CloudSummary& cloud = out.cloud;
  cloud.word_max_len = word_max_len;
  cloud.tolerance = Scalar::parse("1e-12", prec);
  if (options.cloud) {
    auto words = wordgen::enumerate_words(built.kind, built.generators, cloud.word_max_len);
    cloud.words = words.size();
    auto c = wordgen::jordan_cloud(built.reps, words, options.threads);
    cloud.points = std::move(c.points);
    cloud.non_hyperbolic = std::move(c.non_hyperbolic);
    cloud.duplicates = c.duplicates;
    if (out.hull.vertices.size() >= 3) {
      cone::ContainmentChecker check(out.hull);
      for (const auto& p : cloud.points) {
        auto r = check(p.sp, cloud.tolerance);
        switch (r.status) {
          case cone::Containment::Inside: ++cloud.inside; break;
          case cone::Containment::Boundary: ++cloud.boundary; break;
          case cone::Containment::Outside: ++cloud.outside; break;
        }
        if (!cloud.worst_margin || r.margin < *cloud.worst_margin) cloud.worst_margin = r.margin;
      }
    }
    nearest_distances(cloud, out.hull);
    cloud.conjugation_check = conjugation_spot_check(built, cloud.points, tight);

    if (out.hull.facets.size() <= 32 && !cloud.points.empty()) {
      for (std::size_t f = 0; f < out.hull.facets.size(); ++f) {
        if (!out.hull.facets[f].azimuthal) continue;
        auto recs = wordgen::record_breaker_scan(cloud.points, out.hull.facets[f].functional);
        out.records.push_back({f, recs.size(), recs.back().ratio, recs.back().word.to_string()});
      }
    }
  }

  try {
    out.witness = wordgen::nonconjugacy_witness(built.reps, built.kind, std::min(cloud.word_max_len, 8), tight);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotFound) throw;
    out.witness_note = e.what();
  }

  if (cfg.kind == Kind::Fish) {
    Scalar a = eval(cfg.a, prec, "a"), b = eval(cfg.b, prec, "b");
    auto path = fricke::parse_mutation_path("AB");
    for (int depth = 10; depth >= 1; --depth) {
      try {
        out.slacks = fricke::mutation_slacks({a, b, b}, path, depth);
        break;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::PrecisionExhausted) throw;
      }
    }
  }

  if (cloud.outside > 0) {
    out.status = 3;
  } else if (out.hull.verdict != cone::Verdict::Certified) {
    out.status = 2;
  } else {
    out.status = 0;
  }
  return out;
}

}  // namespace limitcone::scenario
