// limitcone: run scenarios, render bundles, re-verify stored clouds.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "limitcone/report.hpp"
#include "limitcone/scenario.hpp"

namespace {

using namespace limitcone;

enum Exit : int {
  kOk = 0,
  kUsage = 1,
  kPartial = 2,
  kContainment = 3,
  kConfig = 4,
  kIo = 5,
  kNumeric = 6,
  kAdjust = 7,
  kPrecision = 8,
};

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config: return kConfig;
    case ErrorCode::Io: return kIo;
    case ErrorCode::AdjustmentFailed: return kAdjust;
    case ErrorCode::PrecisionExhausted: return kPrecision;
    default: return kNumeric;
  }
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

struct RunArgs {
  std::string config;
  std::optional<long> precision_bits;
  std::optional<long> q_max;
  std::optional<int> word_max_len;
  std::optional<std::string> out_dir;
  unsigned threads = 0;
};

int run(const RunArgs& args) {
  scenario::ScenarioConfig cfg = scenario::parse_config(slurp(args.config));
  if (!cfg.precision_bits) {
    if (const char* env = std::getenv("LIMITCONE_PRECISION_BITS")) {
      char* end = nullptr;
      long bits = std::strtol(env, &end, 10);
      if (end == env || *end != '\0') throw Error(ErrorCode::Config, "LIMITCONE_PRECISION_BITS is not an integer");
      cfg.precision_bits = bits;
    }
  }
  if (args.precision_bits) cfg.precision_bits = args.precision_bits;
  if (cfg.precision_bits && *cfg.precision_bits < kDefaultPrecisionBits) {
    throw Error(ErrorCode::Config, "precision must be at least 256 bits");
  }
  if (args.q_max) {
    if (*args.q_max < 1) throw Error(ErrorCode::Config, "--q-max must be >= 1");
    cfg.q_max = *args.q_max;
  }
  if (args.word_max_len) {
    if (*args.word_max_len < 1) throw Error(ErrorCode::Config, "--word-max-len must be >= 1");
    cfg.word_max_len = args.word_max_len;
  }
  if (args.out_dir) cfg.out_dir = *args.out_dir;

  scenario::RunOptions options;
  options.threads = args.threads;
  auto bundle = scenario::run_scenario(cfg, options);
  report::write_bundle(bundle, cfg.out_dir);

  const auto& c = bundle.cloud;
  std::cout << scenario::to_string(cfg.kind) << ": " << bundle.hull.vertices.size() << " vertices, "
            << (bundle.hull.verdict == cone::Verdict::Certified ? "certified" : "partial") << ", "
            << bundle.precision_bits << " bits\n";
  std::cout << "cloud: " << c.points.size() << " points from " << c.words << " words, " << c.outside
            << " outside at tolerance " << c.tolerance.to_string(3) << "\n";
  std::cout << "wrote " << cfg.out_dir << "/{report.json,curves.csv,cone.svg}\n";
  return bundle.status;
}

int render(const std::string& bundle, const std::string& out) {
  report::write_file(out, report::render_svg(report::load_bundle(bundle)));
  std::cout << "wrote " << out << "\n";
  return kOk;
}

int verify(const std::string& bundle) {
  auto r = report::verify_bundle(report::load_bundle(bundle));
  std::cout << "hull: " << r.vertices << " vertices, " << r.verdict << "\n";
  std::cout << "checked " << r.checked << " points, " << r.outside << " outside";
  if (r.worst_margin) std::cout << ", worst margin " << r.worst_margin->to_string(6);
  std::cout << "\n";
  return r.status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Limit cones of multi-Fuchsian representations into (PSL2 R)^3"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario and write report.json, curves.csv, cone.svg");
  run_cmd->add_option("config", run_args.config, "Scenario config (JSON)")->required();
  run_cmd->add_option("--precision-bits", run_args.precision_bits, "Working precision in bits (>= 256)");
  run_cmd->add_option("--q-max", run_args.q_max, "Farey height bound for torus scenarios");
  run_cmd->add_option("--word-max-len", run_args.word_max_len, "Longest word in the cloud");
  run_cmd->add_option("--out-dir", run_args.out_dir, "Output directory");
  run_cmd->add_option("--threads", run_args.threads, "Worker threads for the cloud (0 = all cores)");

  std::string render_in, render_out;
  auto* render_cmd = app.add_subcommand("render", "Render a stored bundle to SVG");
  render_cmd->add_option("bundle", render_in, "Bundle directory or report.json")->required();
  render_cmd->add_option("-o,--output", render_out, "SVG path")->required();

  std::string verify_in;
  auto* verify_cmd = app.add_subcommand("verify", "Recheck containment of a stored bundle");
  verify_cmd->add_option("bundle", verify_in, "Bundle directory or report.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run_cmd) return run(run_args);
    if (*render_cmd) return render(render_in, render_out);
    if (*verify_cmd) return verify(verify_in);
  } catch (const Error& e) {
    std::cerr << "limitcone: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "limitcone: " << e.what() << "\n";
    return kNumeric;
  }
  return kUsage;
}
