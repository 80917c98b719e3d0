#pragma once

#include <optional>
#include <string>
#include <vector>

#include "limitcone/cone.hpp"
#include "limitcone/fricke.hpp"
#include "limitcone/polygons.hpp"
#include "limitcone/wordgen.hpp"

namespace limitcone::scenario {

enum class Kind { Pants, Hexagon, Ngon, Fish, Custom };

std::string to_string(Kind kind);

// Numeric parameters are kept as expression text and evaluated at the run
// precision, so decimal literals never round through binary64.
struct ScenarioConfig {
  Kind kind = Kind::Pants;
  // pants: multi-lengths of the boundary curves a, b, ab.
  std::vector<std::vector<std::string>> vectors;
  // hexagon and ngon.
  std::string x = "1e-4";
  std::string delta = "8";
  int genus = 3;
  std::vector<std::string> alpha;  // defaults to (8 + k sqrt(2)) / 8
  // fish.
  std::string a = "6";
  std::string b = "8";
  long q_max = 20;
  // custom: 3x3 matrix of lengths at slopes 0/1, 1/1, 1/0.
  std::vector<std::vector<std::string>> lengths;

  std::optional<long> precision_bits;
  std::optional<int> word_max_len;
  std::string out_dir = ".";
};

// JSON object with a "scenario" key; see README for the schema.
ScenarioConfig parse_config(const std::string& text);
// Canonical JSON echo of the config (sorted keys, no whitespace).
std::string config_echo(const ScenarioConfig& cfg);

int default_word_max_len(Kind kind);
// max(requested, 256, ceil(3 Lambda_max / ln 2) + 64) with Lambda_max the
// largest curve length the scenario produces.
long effective_precision(const ScenarioConfig& cfg);

struct Curve {
  std::string id;
  std::string kind;  // edge, chord, slope, peripheral
  cone::MultiLength ml;
  cone::SimplexPoint sp;
  int multiplicity = 1;  // lift multiplicity, for polygon curves
  std::optional<std::size_t> vertex;
  std::optional<Scalar> exterior_angle;
};

struct CloudSummary {
  int word_max_len = 0;
  std::size_t words = 0;
  std::size_t duplicates = 0;
  std::vector<wordgen::CloudPoint> points;
  std::vector<wordgen::NonHyperbolicWord> non_hyperbolic;
  std::size_t inside = 0;
  std::size_t boundary = 0;
  std::size_t outside = 0;
  Scalar tolerance;
  std::optional<Scalar> worst_margin;  // most negative containment margin
  // Per hull vertex: Euclidean distance in barycentric coordinates to the
  // nearest cloud point.
  std::vector<Scalar> nearest_vertex_distance;
  bool conjugation_check = true;
};

struct FacetRecords {
  std::size_t facet;
  std::size_t count;
  Scalar final_ratio;
  std::string final_word;
};

struct ReportBundle {
  ScenarioConfig config;
  long precision_bits = 0;
  std::string input_hash;
  std::vector<Curve> curves;
  cone::HullCertificate hull;
  CloudSummary cloud;
  std::vector<fricke::MutationStep> slacks;
  std::optional<polygons::AdjustResult> adjustment;
  std::vector<wordgen::Word> witness;
  std::string witness_note;
  std::vector<FacetRecords> records;
  int status = 0;  // 0 certified and contained, 2 partial, 3 containment violation
};

struct RunOptions {
  unsigned threads = 0;
  bool cloud = true;
};

ReportBundle run_scenario(const ScenarioConfig& cfg, const RunOptions& options = {});

// Git blob hash (SHA-1 of "blob <size>\0" + content), hex encoded.
std::string git_blob_hash(const std::string& content);

}  // namespace limitcone::scenario
