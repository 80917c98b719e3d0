#include "limitcone/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace limitcone::report {

using nlohmann::json;
using scenario::ReportBundle;

namespace {

constexpr int kCloudDigits = 34;

json numbers(const std::vector<Scalar>& v, int digits = 0) {
  json out = json::array();
  for (const auto& x : v) out.push_back(x.to_string(digits));
  return out;
}

std::string verdict_name(cone::Verdict v) { return v == cone::Verdict::Certified ? "certified" : "partial"; }

std::string vertex_label(const ReportBundle& b, std::size_t v) {
  std::string label;
  for (std::size_t i : b.hull.sources[v]) {
    if (!label.empty()) label += ", ";
    label += b.curves[i].id;
  }
  return label;
}

}  // namespace

std::string report_json(const ReportBundle& b) {
  const long p = b.precision_bits;
  json j;
  j["format"] = "limitcone-report/1";
  j["scenario"] = scenario::to_string(b.config.kind);
  j["precision_bits"] = p;
  j["status"] = b.status;
  j["verdict"] = verdict_name(b.hull.verdict);
  j["provenance"] = {{"config", json::parse(scenario::config_echo(b.config))},
                     {"input_hash", b.input_hash},
                     {"precision_bits", p}};

  json hull;
  hull["precision_bits"] = p;
  hull["verdict"] = verdict_name(b.hull.verdict);
  hull["hypothesis"] =
      "facet certification assumes Zariski dense, pairwise nonconjugate components; the witness words are evidence "
      "of nonconjugacy, not a proof";
  auto angles = cone::exterior_angles(b.hull);
  hull["vertices"] = json::array();
  for (std::size_t v = 0; v < b.hull.vertices.size(); ++v) {
    json vj;
    vj["bary"] = numbers(b.hull.vertices[v].bary);
    vj["curves"] = vertex_label(b, v);
    if (!angles.empty()) vj["exterior_angle"] = angles[v].to_string();
    hull["vertices"].push_back(vj);
  }
  hull["facets"] = json::array();
  for (const auto& f : b.hull.facets) {
    hull["facets"].push_back(
        {{"from", f.from}, {"to", f.to}, {"functional", numbers(f.functional.c)}, {"azimuthal", f.azimuthal}});
  }
  j["hull"] = hull;

  j["curves"] = json::array();
  for (const auto& c : b.curves) {
    json cj{{"id", c.id},
            {"kind", c.kind},
            {"multiplicity", c.multiplicity},
            {"lengths", numbers(c.ml.coords)},
            {"bary", numbers(c.sp.bary)},
            {"precision_bits", p}};
    cj["vertex"] = c.vertex ? json(*c.vertex) : json(nullptr);
    if (c.exterior_angle) cj["exterior_angle"] = c.exterior_angle->to_string();
    j["curves"].push_back(cj);
  }

  const auto& cl = b.cloud;
  json cloud{{"precision_bits", p},
             {"word_max_len", cl.word_max_len},
             {"words", cl.words},
             {"points", cl.points.size()},
             {"duplicates", cl.duplicates},
             {"inside", cl.inside},
             {"boundary", cl.boundary},
             {"outside", cl.outside},
             {"tolerance", cl.tolerance.to_string(3)},
             {"conjugation_check", cl.conjugation_check},
             {"points_file", "curves.csv"}};
  cloud["worst_margin"] = cl.worst_margin ? json(cl.worst_margin->to_string(20)) : json(nullptr);
  cloud["nearest_vertex_distance"] = numbers(cl.nearest_vertex_distance, 20);
  cloud["non_hyperbolic"] = json::array();
  for (const auto& w : cl.non_hyperbolic) {
    cloud["non_hyperbolic"].push_back(
        {{"word", w.word.to_string()}, {"component", w.component + 1}, {"unresolved", w.unresolved}});
  }
  j["cloud"] = cloud;

  json records = json::array();
  for (const auto& r : b.records) {
    records.push_back({{"facet", r.facet},
                       {"count", r.count},
                       {"final_ratio", r.final_ratio.to_string(20)},
                       {"final_word", r.final_word}});
  }
  j["record_breakers"] = {{"facets", records},
                          {"caveat",
                           "a finite scan cannot tell whether the record-breaker sequence ends in powers of a single "
                           "element"}};

  json witness = json::array();
  for (const auto& w : b.witness) witness.push_back(w.to_string());
  j["nonconjugacy_witness"] = {{"words", witness}, {"note", b.witness_note}};

  if (b.adjustment) {
    j["adjustment"] = {{"log2_multipliers", b.adjustment->log2_multipliers},
                       {"score", b.adjustment->score},
                       {"evaluations", b.adjustment->evaluations},
                       {"params", numbers(b.adjustment->params, 40)},
                       {"precision_bits", p}};
  }
  if (!b.slacks.empty()) {
    json steps = json::array();
    for (std::size_t k = 0; k < b.slacks.size(); ++k) {
      const auto& s = b.slacks[k];
      steps.push_back({{"depth", k},
                       {"a", s.a.to_string(30)},
                       {"b", s.b.to_string(30)},
                       {"c", s.c.to_string(30)},
                       {"slack", s.slack.to_string(30)},
                       {"predicted", s.predicted.to_string(30)},
                       {"ratio", (s.slack / s.predicted).to_string(30)}});
    }
    j["slack_regression"] = {{"path", "AB"}, {"precision_bits", p}, {"steps", steps}};
  }
  return j.dump(1) + "\n";
}

std::string curves_csv(const ReportBundle& b) {
  std::ostringstream out;
  out << "curve_id,kind,len1,len2,len3,bary1,bary2,bary3,is_vertex,exterior_angle\n";
  for (const auto& c : b.curves) {
    out << c.id << ',' << c.kind;
    for (const auto& x : c.ml.coords) out << ',' << x.to_string();
    for (const auto& x : c.sp.bary) out << ',' << x.to_string();
    out << ',' << (c.vertex ? 1 : 0) << ',' << (c.exterior_angle ? c.exterior_angle->to_string() : "") << '\n';
  }
  for (const auto& p : b.cloud.points) {
    out << p.word.to_string() << ",word";
    for (const auto& x : p.ml.coords) out << ',' << x.to_string(kCloudDigits);
    for (const auto& x : p.sp.bary) out << ',' << x.to_string(kCloudDigits);
    out << ",0,\n";
  }
  return out.str();
}

StoredBundle stored(const ReportBundle& b) {
  StoredBundle s;
  s.scenario = scenario::to_string(b.config.kind);
  s.precision_bits = b.precision_bits;
  s.verdict = verdict_name(b.hull.verdict);
  s.vertices = b.hull.vertices;
  for (std::size_t v = 0; v < b.hull.vertices.size(); ++v) s.vertex_labels.push_back(vertex_label(b, v));
  for (const auto& f : b.hull.facets) s.facet_azimuthal.push_back(f.azimuthal);
  for (const auto& c : b.curves) s.curves.push_back({c.id, c.kind, c.sp, c.vertex.has_value()});
  Precision prec{b.precision_bits};
  for (const auto& p : b.cloud.points) {
    // Same rounding as the CSV rows, so render output does not depend on
    // whether the bundle was just computed or read back.
    cone::SimplexPoint sp;
    for (const auto& x : p.sp.bary) sp.bary.push_back(Scalar::parse(x.to_string(kCloudDigits), prec));
    s.cloud.push_back({p.word.to_string(), "word", std::move(sp), false});
  }
  s.tolerance = b.cloud.tolerance.to_string(3);
  return s;
}

namespace {

constexpr double kSide = 1000.0;
constexpr double kPad = 70.0;
const double kHeight = kSide * std::sqrt(3.0) / 2;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::pair<double, double> to_svg(const cone::SimplexPoint& p) {
  auto [cx, cy] = cone::chart(p);
  double x = kPad + kSide * cx.to_double();
  double y = kPad + kHeight - kSide * cy.to_double();
  x = std::min(std::max(x, 0.0), kSide + 2 * kPad);
  y = std::min(std::max(y, 0.0), kHeight + 2 * kPad);
  return {x, y};
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const StoredBundle& b) {
  if (b.vertices.empty()) throw Error(ErrorCode::DegenerateHull, "nothing to render: the hull has no vertex");
  std::ostringstream out;
  const double w = kSide + 2 * kPad, h = kHeight + 2 * kPad;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
      << "\" viewBox=\"0 0 " << fmt(w) << ' ' << fmt(h) << "\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << fmt(kPad) << "\" y=\"24\" font-size=\"18\">" << escape(b.scenario) << ": " << b.verdict
      << ", " << b.vertices.size() << " vertices, " << b.precision_bits << " bits</text>\n";

  // Chamber: corner i is the ray of the i-th coordinate.
  const double x0 = kPad, y0 = kPad + kHeight;
  const double x1 = kPad + kSide, y1 = y0;
  const double x2 = kPad + kSide / 2, y2 = kPad;
  out << "<polygon points=\"" << fmt(x0) << ',' << fmt(y0) << ' ' << fmt(x1) << ',' << fmt(y1) << ' ' << fmt(x2)
      << ',' << fmt(y2) << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  out << "<text x=\"" << fmt(x0 - 30) << "\" y=\"" << fmt(y0 + 20) << "\" font-size=\"16\">e1</text>\n";
  out << "<text x=\"" << fmt(x1 + 10) << "\" y=\"" << fmt(y1 + 20) << "\" font-size=\"16\">e2</text>\n";
  out << "<text x=\"" << fmt(x2 - 8) << "\" y=\"" << fmt(y2 - 10) << "\" font-size=\"16\">e3</text>\n";

  // Cloud dots, thinned to one per 0.1 unit cell.
  out << "<g fill=\"#888888\">\n";
  std::set<std::pair<long, long>> cells;
  for (const auto& c : b.cloud) {
    auto [x, y] = to_svg(c.sp);
    if (!cells.insert({std::lround(x * 10), std::lround(y * 10)}).second) continue;
    out << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"1.2\"/>\n";
  }
  out << "</g>\n";

  std::size_t n = b.vertices.size();
  for (std::size_t i = 0; i < n && n >= 2; ++i) {
    auto [ax, ay] = to_svg(b.vertices[i]);
    auto [bx, by] = to_svg(b.vertices[(i + 1) % n]);
    bool az = i < b.facet_azimuthal.size() && b.facet_azimuthal[i];
    out << "<line x1=\"" << fmt(ax) << "\" y1=\"" << fmt(ay) << "\" x2=\"" << fmt(bx) << "\" y2=\"" << fmt(by)
        << (az ? "\" stroke=\"#1f4fb4\" stroke-width=\"2\"/>\n"
               : "\" stroke=\"#c0392b\" stroke-width=\"2\" stroke-dasharray=\"6,4\"/>\n");
  }
  for (const auto& c : b.curves) {
    if (c.is_vertex) continue;
    auto [x, y] = to_svg(c.sp);
    out << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"2.5\" fill=\"none\" stroke=\"black\"/>\n";
  }
  bool label_all = n <= 24;
  for (std::size_t i = 0; i < n; ++i) {
    auto [x, y] = to_svg(b.vertices[i]);
    out << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"3\" fill=\"black\"/>\n";
    const std::string& label = i < b.vertex_labels.size() ? b.vertex_labels[i] : std::string();
    if (label_all || label.size() <= 3) {
      out << "<text x=\"" << fmt(x + 5) << "\" y=\"" << fmt(y - 5) << "\" font-size=\"11\">" << escape(label)
          << "</text>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  f << content;
  if (!f) throw Error(ErrorCode::Io, "write to " + path.string() + " failed");
}

void write_bundle(const ReportBundle& b, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  write_file(dir / "report.json", report_json(b));
  write_file(dir / "curves.csv", curves_csv(b));
  write_file(dir / "cone.svg", render_svg(stored(b)));
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

cone::SimplexPoint bary_from(const json& v, Precision prec) {
  if (!v.is_array() || v.size() != 3) throw Error(ErrorCode::Config, "bundle: bary needs 3 entries");
  cone::SimplexPoint sp;
  for (const auto& x : v) sp.bary.push_back(Scalar::parse(x.get<std::string>(), prec));
  return sp;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

StoredBundle load_bundle(const std::filesystem::path& path) {
  std::filesystem::path report = std::filesystem::is_directory(path) ? path / "report.json" : path;
  std::filesystem::path csv = report.parent_path() / "curves.csv";
  json j;
  try {
    j = json::parse(read_file(report));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, "bundle " + report.string() + ": " + e.what());
  }
  StoredBundle b;
  try {
    b.scenario = j.at("scenario").get<std::string>();
    b.precision_bits = j.at("precision_bits").get<long>();
    b.verdict = j.at("verdict").get<std::string>();
    Precision prec{b.precision_bits};
    for (const auto& v : j.at("hull").at("vertices")) {
      b.vertices.push_back(bary_from(v.at("bary"), prec));
      b.vertex_labels.push_back(v.at("curves").get<std::string>());
    }
    for (const auto& f : j.at("hull").at("facets")) b.facet_azimuthal.push_back(f.at("azimuthal").get<bool>());
    for (const auto& c : j.at("curves")) {
      b.curves.push_back({c.at("id").get<std::string>(), c.at("kind").get<std::string>(), bary_from(c.at("bary"), prec),
                          !c.at("vertex").is_null()});
    }
    b.tolerance = j.at("cloud").at("tolerance").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Config, "bundle " + report.string() + ": " + e.what());
  }

  std::istringstream rows(read_file(csv));
  std::string line;
  std::getline(rows, line);
  Precision prec{b.precision_bits};
  while (std::getline(rows, line)) {
    if (line.empty()) continue;
    auto f = split(line);
    if (f.size() != 10) throw Error(ErrorCode::Config, "curves.csv: malformed row \"" + line + "\"");
    if (f[1] != "word") continue;
    cone::SimplexPoint sp;
    for (int k = 5; k < 8; ++k) sp.bary.push_back(Scalar::parse(f[k], prec));
    b.cloud.push_back({f[0], f[1], std::move(sp), false});
  }
  return b;
}

VerifyResult verify_bundle(const StoredBundle& b) {
  VerifyResult r;
  auto hull = cone::certify(cone::convex_hull(b.vertices));
  r.vertices = hull.vertices.size();
  r.verdict = hull.verdict == cone::Verdict::Certified ? "certified" : "partial";
  Precision prec{b.precision_bits};
  Scalar tol = Scalar::parse(b.tolerance, prec);
  cone::ContainmentChecker check(hull);
  auto visit = [&](const StoredCurve& c) {
    auto res = check(c.sp, tol);
    ++r.checked;
    if (res.status == cone::Containment::Outside) ++r.outside;
    if (!r.worst_margin || res.margin < *r.worst_margin) r.worst_margin = res.margin;
  };
  for (const auto& c : b.curves) visit(c);
  for (const auto& c : b.cloud) visit(c);
  r.status = r.outside > 0 ? 3 : (hull.verdict == cone::Verdict::Certified ? 0 : 2);
  return r;
}

}  // namespace limitcone::report
