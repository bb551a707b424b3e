#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "netcube/cube_tree.hpp"
#include "netcube/doubling.hpp"
#include "netcube/generators.hpp"
#include "netcube/io.hpp"
#include "netcube/measure.hpp"
#include "netcube/metric_space.hpp"
#include "netcube/net_hierarchy.hpp"
#include "netcube/spectrum.hpp"

namespace netcube::cli {

namespace {

// Dense matrices above this size get the O(n^2) pair checks only.
constexpr std::size_t kTriangleScanLimit = 1024;

struct RunConfig {
  std::string points;
  std::string matrix;
  std::string generate;
  double r = 1.0 / 7.0;
  std::optional<double> p;
  std::optional<double> beta;
  std::vector<double> weights;
  std::vector<double> q_grid{0.0, 0.5, 0.9, 0.95, 1.05, 1.1, 2.0};
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::optional<double> t;
  std::string out_dir = ".";
  bool emit_members = false;
  bool exhaustive = false;
};

// Verification failures are reported through this rather than an exception
// so that the files written so far stay on disk.
struct Outcome {
  json report = json::object();
  bool verified = true;
};

class Fault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

FiniteMetricSpace load_space(const RunConfig& cfg, json& input) {
  const int sources = !cfg.points.empty() + !cfg.matrix.empty() + !cfg.generate.empty();
  if (sources != 1) throw Fault("exactly one of --points, --matrix, --generate is required");
  if (!cfg.points.empty()) {
    input = {{"points", cfg.points}};
    return read_points_csv_file(cfg.points);
  }
  if (!cfg.matrix.empty()) {
    input = {{"matrix", cfg.matrix}};
    auto space = read_matrix_json_file(cfg.matrix);
    const double tol = 1e-9 * space.diameter();
    if (space.size() <= kTriangleScanLimit) {
      const auto report = validate_metric(space, tol);
      if (!report.valid()) {
        const auto& v = report.violations.front();
        throw Fault("distance matrix is not a metric: " + std::string(to_string(v.kind)) + " at (" +
                    std::to_string(v.i) + "," + std::to_string(v.j) + "," + std::to_string(v.k) + ")");
      }
    } else if (!(space.min_gap() > 0.0)) {
      throw Fault("distance matrix has coincident points");
    }
    return space;
  }
  json spec_doc;
  const std::string& g = cfg.generate;
  const auto first = g.find_first_not_of(" \t\n");
  try {
    if (first != std::string::npos && g[first] == '{') {
      spec_doc = json::parse(g);
    } else {
      std::ifstream in(g);
      if (!in) throw Fault("cannot open generator spec '" + g + "'");
      spec_doc = json::parse(in);
    }
  } catch (const json::exception& e) {
    throw Fault(std::string("generator spec is not valid JSON: ") + e.what());
  }
  const GeneratorSpec spec = generator_spec_from_json(spec_doc);
  input = {{"generate", to_json(spec)}};
  return netcube::generate(spec);
}

struct Built {
  FiniteMetricSpace space;
  NetHierarchy nets;
  CubeTree tree;
};

Built build_stage(const RunConfig& cfg, Outcome& outcome, std::ostream& out) {
  json input;
  FiniteMetricSpace space = load_space(cfg, input);
  if (!(cfg.r > 0.0 && cfg.r < 1.0 / 3.0)) {
    std::ostringstream msg;
    msg << "--r " << cfg.r << " must lie in (0, 1/3); for a ratio in [1/3, 1) build with r = 1/4 "
        << "and regrade the levels (see regrade_scales)";
    throw Fault(msg.str());
  }
  NetHierarchy nets = build_nets(space, cfg.r);
  const ParentMap parents = assign_parents(space, nets);
  CubeTree tree = build_cubes(nets, parents);

  VerificationReport report = verify_nets(nets, parents, space);
  const VerificationReport props = verify_tree_properties(tree, space);
  report.checks.insert(report.checks.end(), props.checks.begin(), props.checks.end());

  const auto dir = std::filesystem::path(cfg.out_dir);
  write_json_file((dir / "hierarchy.json").string(), to_json(nets));
  write_json_file((dir / "tree.json").string(), to_json(tree, cfg.emit_members));
  write_json_file((dir / "tree_report.json").string(), to_json(report));

  const auto [c, C] = sandwich_constants(cfg.r);
  outcome.report["input"] = input;
  outcome.report["space"] = {{"n", space.size()}, {"diameter", space.diameter()}, {"min_gap", space.min_gap()}};
  outcome.report["tree"] = {{"r", cfg.r},  {"c", c}, {"C", C}, {"k_min", tree.k_min()}, {"k_max", tree.k_max()},
                            {"nodes", tree.node_count()}, {"report", to_json(report)}};
  out << "tree: " << space.size() << " points, levels [" << tree.k_min() << ", " << tree.k_max() << "], "
      << tree.node_count() << " cubes, properties " << (report.pass() ? "pass" : "FAIL") << '\n';
  if (!report.pass()) outcome.verified = false;
  return {std::move(space), std::move(nets), std::move(tree)};
}

MeasureAssignment measure_stage(const RunConfig& cfg, const Built& built, Outcome& outcome, std::ostream& out) {
  MeasureAssignment measure;
  if (cfg.beta && (cfg.p || !cfg.weights.empty())) throw Fault("--beta cannot be combined with --p or --weights");
  if (cfg.beta) {
    measure = build_alpha_homogeneous(built.tree, *cfg.beta);
  } else if (cfg.p && !cfg.weights.empty()) {
    measure = build_self_similar(built.tree, *cfg.p, cfg.weights);
  } else if (cfg.p) {
    measure = build_doubling_measure(built.tree, *cfg.p);
  } else {
    throw Fault("select a measure with --p, --beta, or --p with --weights");
  }
  const VerificationReport report = check_measure(built.tree, measure);
  const auto dir = std::filesystem::path(cfg.out_dir);
  write_json_file((dir / "measure.json").string(), to_json(measure, built.tree));
  write_json_file((dir / "measure_report.json").string(), to_json(report));
  outcome.report["measure"] = {{"kind", to_string(measure.kind)}, {"p", measure.p}, {"M_max", measure.M_max},
                               {"warnings", measure.warnings}, {"report", to_json(report)}};
  out << "measure: " << to_string(measure.kind) << " p = " << measure.p << ", M_max = " << measure.M_max
      << ", invariants " << (report.pass() ? "pass" : "FAIL") << '\n';
  for (const auto& w : measure.warnings) out << "warning: " << w << '\n';
  if (!report.pass()) outcome.verified = false;
  return measure;
}

void verify_stage(const RunConfig& cfg, const Built& built, const MeasureAssignment& measure, Outcome& outcome,
                  std::ostream& out) {
  const std::size_t samples = cfg.samples == 0 ? 1000 : cfg.samples;
  json doc = json::object();
  if (measure.kind != MeasureKind::self_similar) {
    const DoublingReport cubes = verify_cube_comparability(built.tree, measure, built.space, samples, cfg.seed);
    doc["comparability"] = to_json(cubes);
    out << "comparability: worst " << cubes.worst_ratio_cubes << " vs p^-4 = " << cubes.bound_cubes
        << (cubes.bound_asserted ? (cubes.pass_cubes ? "  pass" : "  FAIL") : "  (recorded, r > 1/7)") << '\n';
    if (!cubes.pass_cubes) outcome.verified = false;
  }
  const DoublingReport balls = verify_doubling(built.space, built.tree, measure, samples, cfg.seed);
  doc["doubling"] = to_json(balls);
  out << "doubling: worst mu(B(y,2t))/mu(B(y,t)) " << balls.worst_ratio_balls << " vs M~ p^-4 = "
      << balls.bound_balls << " (M~ = " << balls.M_tilde << ")"
      << (balls.bound_asserted ? (balls.pass_balls ? "  pass" : "  FAIL") : "  (recorded)") << '\n';
  if (!balls.pass_balls) outcome.verified = false;
  if (cfg.exhaustive) {
    if (built.space.size() > kExhaustiveLimit) {
      throw Fault("--exhaustive is limited to " + std::to_string(kExhaustiveLimit) + " points");
    }
    const DoublingReport all = verify_doubling_exhaustive(built.space, built.tree, measure);
    doc["exhaustive"] = to_json(all);
    out << "exhaustive: " << all.samples << " critical (y, t), worst " << all.worst_ratio_balls
        << (all.pass() ? "  pass" : "  FAIL") << '\n';
    if (!all.pass()) outcome.verified = false;
  }
  write_json_file((std::filesystem::path(cfg.out_dir) / "doubling_report.json").string(), doc);
  outcome.report["doubling"] = doc;
}

void spectrum_stage(const RunConfig& cfg, const Built& built, const MeasureAssignment& measure, Outcome& outcome,
                    std::ostream& out) {
  const auto& space = built.space;
  const auto& tree = built.tree;
  const std::size_t count = cfg.samples == 0 ? 50 : cfg.samples;
  const double t = cfg.t.value_or(std::max(space.diameter(), 3.0 * scale_power(tree.r(), tree.k_max())));
  if (!(t > 0.0)) throw Fault("--t must be positive");
  if (tree.level_count() < 3) throw Fault("spectrum needs a tree with at least three levels");
  int k_lo = scale_level(t, tree.r(), tree.k_min(), tree.k_max()).k;
  k_lo = std::min(k_lo, tree.k_max() - 2);

  const std::vector<std::size_t> xs = sample_by_mass(measure, count, cfg.seed);
  std::vector<SpectrumEstimate> estimates;
  std::vector<DimensionEstimate> dims;
  json per_point = json::array();
  const std::vector<double> radii = resolved_radii(space, tree, t);
  const bool have_dims = radii.size() >= 4;
  for (std::size_t x : xs) {
    json taus = json::object();
    for (double q : cfg.q_grid) {
      estimates.push_back(tau_q_estimate(space, tree, measure, x, q, t, k_lo, tree.k_max()));
      std::ostringstream key;
      key << q;
      taus[key.str()] = {{"tau_fit", estimates.back().tau_fit}, {"tau_min", estimates.back().tau_min}};
    }
    json entry = {{"x", x}, {"tau", taus}};
    if (have_dims) {
      dims.push_back(local_dimension_estimate(space, measure, x, radii));
      entry["upper_dim_est"] = dims.back().upper_dim_est;
      entry["lower_dim_est"] = dims.back().lower_dim_est;
    }
    per_point.push_back(entry);
  }

  const auto dir = std::filesystem::path(cfg.out_dir);
  {
    std::ofstream csv(dir / "spectrum.csv");
    write_spectrum_csv(csv, estimates);
  }
  {
    std::ofstream csv(dir / "dimension.csv");
    write_dimension_csv(csv, dims);
  }

  json doc = {{"t", t}, {"k_window", {k_lo, tree.k_max()}}, {"points", per_point}};
  if (measure.kind != MeasureKind::self_similar) {
    doc["dimension_bound"] = dimension_bound(measure.M_max, measure.p, tree.r());
  }
  bool below = false, above = false;
  for (double q : cfg.q_grid) {
    below = below || (q >= 0.0 && q < 1.0);
    above = above || q > 1.0;
  }
  if (below && above && have_dims) {
    const ChainReport chain = check_dimension_chain(space, tree, measure, xs, cfg.q_grid, t);
    doc["dimension_chain"] = to_json(chain);
    out << "dimension chain ordered within " << chain.tolerance << " at " << chain.ordered << " of "
        << chain.points.size() << " points\n";
  }
  if (have_dims) {
    double mean = 0.0;
    for (const auto& d : dims) mean += d.upper_dim_est;
    mean /= static_cast<double>(dims.size());
    doc["mean_upper_dim_est"] = mean;
    out << "spectrum: " << xs.size() << " points, mean upper local dimension " << mean;
    if (doc.contains("dimension_bound")) out << " (bound " << doc["dimension_bound"].get<double>() << ")";
    out << '\n';
  }
  write_json_file((dir / "spectrum_report.json").string(), doc);
  outcome.report["spectrum"] = doc;
}

void add_input_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--points", cfg.points, "CSV point cloud: id,x1,...,xd");
  cmd->add_option("--matrix", cfg.matrix, "JSON distance matrix {\"n\":N,\"d\":[[...]]}");
  cmd->add_option("--generate", cfg.generate, "generator spec: file path or inline JSON");
  cmd->add_option("--r", cfg.r, "scale ratio in (0, 1/3)");
  cmd->add_option("--out", cfg.out_dir, "output directory");
  cmd->add_flag("--emit-members", cfg.emit_members, "include cube member lists in tree.json");
}

void add_measure_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--p", cfg.p, "split parameter p");
  cmd->add_option("--beta", cfg.beta, "alpha-homogeneous exponent (p = r^beta)");
  cmd->add_option("--weights", cfg.weights, "self-similar weights (with --p)")->delimiter(',');
  cmd->add_option("--seed", cfg.seed, "seed for all sampling");
  cmd->add_option("--samples", cfg.samples, "sample count");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"netcube: nested dyadic cubes and doubling measures on finite metric spaces"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* build = app.add_subcommand("build", "build nets and cubes, verify the cube properties");
  add_input_flags(build, cfg);
  auto* measure = app.add_subcommand("measure", "build a measure on the cube tree");
  add_input_flags(measure, cfg);
  add_measure_flags(measure, cfg);
  auto* verify = app.add_subcommand("verify", "check cube comparability and the doubling bound");
  add_input_flags(verify, cfg);
  add_measure_flags(verify, cfg);
  verify->add_flag("--exhaustive", cfg.exhaustive, "check every critical (y, t) (n <= 512)");
  auto* spectrum = app.add_subcommand("spectrum", "local L^q spectra and local dimensions");
  add_input_flags(spectrum, cfg);
  add_measure_flags(spectrum, cfg);
  spectrum->add_option("--q", cfg.q_grid, "q values")->delimiter(',');
  spectrum->add_option("--t", cfg.t, "window radius (default: diameter)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "netcube: " << e.what() << '\n';
    return kInputFault;
  }

  Outcome outcome;
  try {
    std::filesystem::create_directories(cfg.out_dir);
    const std::string command = app.get_subcommands().front()->get_name();
    outcome.report["command"] = command;
    Built built = build_stage(cfg, outcome, out);
    if (command != "build") {
      const MeasureAssignment m = measure_stage(cfg, built, outcome, out);
      if (command == "verify") verify_stage(cfg, built, m, outcome, out);
      if (command == "spectrum") spectrum_stage(cfg, built, m, outcome, out);
    }
    outcome.report["verified"] = outcome.verified;
    write_json_file((std::filesystem::path(cfg.out_dir) / "report.json").string(), outcome.report);
  } catch (const std::exception& e) {
    err << "netcube: " << e.what() << '\n';
    return kInputFault;
  }
  return outcome.verified ? kOk : kVerificationFailure;
}

}  // namespace netcube::cli
