#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "limitcone/scenario.hpp"

namespace limitcone::report {

// What render and verify need, as stored on disk: report.json carries the
// hull and the curves at full precision, curves.csv the cloud rows.
struct StoredCurve {
  std::string id;
  std::string kind;  // edge, chord, slope, peripheral, word
  cone::SimplexPoint sp;
  bool is_vertex = false;
};

struct StoredBundle {
  std::string scenario;
  long precision_bits = 0;
  std::string verdict;
  std::vector<cone::SimplexPoint> vertices;
  std::vector<std::string> vertex_labels;
  std::vector<bool> facet_azimuthal;
  std::vector<StoredCurve> curves;  // simple curves
  std::vector<StoredCurve> cloud;   // word rows
  std::string tolerance = "1e-12";
};

std::string report_json(const scenario::ReportBundle& bundle);
std::string curves_csv(const scenario::ReportBundle& bundle);
StoredBundle stored(const scenario::ReportBundle& bundle);

// Deterministic SVG of the simplex, the hull and the cloud. Throws
// DegenerateHull when the bundle has no hull vertex.
std::string render_svg(const StoredBundle& bundle);

// Writes report.json, curves.csv and cone.svg into dir.
void write_bundle(const scenario::ReportBundle& bundle, const std::filesystem::path& dir);

// Reads a bundle from its directory or from the path of its report.json.
StoredBundle load_bundle(const std::filesystem::path& path);

struct VerifyResult {
  int status = 0;  // 0 contained and certified, 2 partial, 3 points outside
  std::string verdict;
  std::size_t vertices = 0;
  std::size_t checked = 0;
  std::size_t outside = 0;
  std::optional<Scalar> worst_margin;
};

// Rebuilds the hull from the stored vertices and rechecks every stored curve
// and cloud point against it.
VerifyResult verify_bundle(const StoredBundle& bundle);

void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace limitcone::report
