// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <algorithm>
#include <iterator>
#include <string>
#include <vector>

#include "cli.hpp"
#include "netcube/cube_tree.hpp"
#include "netcube/doubling.hpp"
#include "netcube/generators.hpp"
#include "netcube/measure.hpp"
#include "netcube/spectrum.hpp"
#include "suite.hpp"

using namespace netcube;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and budgets.
constexpr double kSuiteBudgetSeconds = 60.0;
constexpr double kMeasureTol = 1e-12;
constexpr std::size_t kComparabilitySamples = 1000;
constexpr std::uint64_t kSeed = 0;
constexpr double kSpectrumTol = 0.05;
constexpr double kSpectrumBudgetSeconds = 10.0;
constexpr double kDimensionSlack = 0.1;
constexpr std::size_t kDimensionSamples = 50;
constexpr double kDimensionBudgetSeconds = 60.0;
constexpr double kAnchorTol = 1e-12;

struct Line {
  int id;
  std::string title;
  bool pass;
  std::string detail;
};

std::vector<Line> lines;

void report(int id, std::string title, bool pass, std::string detail) {
  std::printf("[%s] criterion %d: %s -- %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  lines.push_back({id, std::move(title), pass, std::move(detail)});
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Case {
  GeneratorSpec spec;
  FiniteMetricSpace space;
  CubeTree tree;  // r = 1/7
};

std::vector<double> admissible_ps(const CubeTree& tree) {
  const double p_max = 1.0 / static_cast<double>(child_counts(tree).max + 1);
  std::vector<double> out;
  for (double p : {0.01, 0.1}) {
    if (p <= p_max) out.push_back(p);
  }
  out.push_back(p_max);
  return out;
}

std::vector<Case> criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto specs = suite::property_spaces();
  std::vector<Case> cases;
  std::size_t runs = 0, failures = 0;
  std::string first_failure;
  for (const auto& spec : specs) {
    auto space = generate(spec);
    for (double r : {1.0 / 7.0, 1.0 / 5.0, 0.3}) {
      auto tree = build_tree(space, r);
      const auto [c, C] = sandwich_constants(r);
      const bool constants_ok = std::abs(c - (0.5 - r / (1.0 - r))) == 0.0 && std::abs(C - 1.0 / (1.0 - r)) == 0.0;
      const auto rep = verify_tree_properties(tree, space);
      ++runs;
      if (!rep.pass() || !constants_ok) {
        ++failures;
        if (first_failure.empty()) {
          for (const auto& ch : rep.checks) {
            if (!ch.pass) first_failure = spec.describe() + " " + ch.name + ": " + ch.witness;
          }
        }
      }
      if (r == 1.0 / 7.0) cases.push_back({spec, space, std::move(tree)});
    }
  }
  const double secs = seconds_since(t0);
  report(1, "cube properties (i)-(v) incl. sandwich c = 1/2 - r/(1-r), C = 1/(1-r)",
         failures == 0 && specs.size() >= 200 && secs < kSuiteBudgetSeconds,
         fmt("%zu spaces x 3 ratios = %zu trees, %zu failing, %.1f s (budget %.0f s)%s", specs.size(), runs, failures,
             secs, kSuiteBudgetSeconds, first_failure.empty() ? "" : ("; first: " + first_failure).c_str()));
  return cases;
}

void criterion_2(const std::vector<Case>& cases) {
  std::size_t runs = 0, failures = 0;
  std::string first_failure;
  for (const auto& c : cases) {
    for (double p : admissible_ps(c.tree)) {
      const auto m = build_doubling_measure(c.tree, p);
      const auto rep = check_measure(c.tree, m, kMeasureTol);
      ++runs;
      if (!rep.pass() || !rep.find("sibling_ratio_quantization")) {
        ++failures;
        if (first_failure.empty()) first_failure = c.spec.describe();
      }
    }
  }
  report(2, "measure conservation, positivity, ratio quantisation (rel. 1e-12)", failures == 0,
         fmt("%zu measures over %zu spaces, r = 1/7, p in {0.01, 0.1, 1/(M_max+1)} where admissible; %zu failing%s",
             runs, cases.size(), failures, first_failure.empty() ? "" : ("; first: " + first_failure).c_str()));
}

void criteria_3_4(const std::vector<Case>& cases) {
  std::size_t runs = 0, cube_failures = 0, ball_failures = 0, exhaustive_runs = 0, exhaustive_failures = 0;
  std::size_t containment = 0, violations = 0;
  double worst_cube_fraction = 0.0, worst_ball_fraction = 0.0;
  for (const auto& c : cases) {
    for (double p : admissible_ps(c.tree)) {
      const auto m = build_doubling_measure(c.tree, p);
      const auto cubes = verify_cube_comparability(c.tree, m, c.space, kComparabilitySamples, kSeed);
      const auto balls = verify_doubling(c.space, c.tree, m, kComparabilitySamples, kSeed);
      ++runs;
      if (!cubes.pass_cubes || !cubes.bound_asserted) ++cube_failures;
      if (!balls.pass_balls || !balls.bound_asserted) ++ball_failures;
      containment += cubes.containment_failures;
      violations += balls.per_sample_violations;
      const bool trivial = c.space.size() == 1;
      if (!trivial) {
        worst_cube_fraction = std::max(worst_cube_fraction, cubes.worst_ratio_cubes / cubes.bound_cubes);
        worst_ball_fraction = std::max(worst_ball_fraction, balls.worst_ratio_balls / balls.bound_balls);
      }
      if (c.space.size() <= kExhaustiveLimit) {
        const auto ex = verify_doubling_exhaustive(c.space, c.tree, m);
        ++exhaustive_runs;
        if (!ex.pass()) ++exhaustive_failures;
        if (!trivial) worst_ball_fraction = std::max(worst_ball_fraction, ex.worst_ratio_balls / ex.bound_balls);
      }
    }
  }
  report(3, "cube comparability <= p^-4 (r = 1/7, 1000 samples per run)", cube_failures == 0 && containment == 0,
         fmt("%zu runs, %zu failing, %zu containment failures, worst ratio / p^-4 = %.3g (n > 1)", runs, cube_failures,
             containment, worst_cube_fraction));
  report(4, "doubling mu(B(y,2t)) <= M~ p^-4 mu(B(y,t)), sampled and exhaustive (n <= 512)",
         ball_failures == 0 && violations == 0 && exhaustive_failures == 0,
         fmt("%zu sampled runs (%zu failing, %zu per-sample violations), %zu exhaustive runs (%zu failing), "
             "worst ratio / bound = %.3g (n > 1)",
             runs, ball_failures, violations, exhaustive_runs, exhaustive_failures, worst_ball_fraction));
}

void criterion_5() {
  const auto t0 = std::chrono::steady_clock::now();
  auto s = generate(GeneratorSpec::mary(2, 12, 0.5));
  const auto tree = build_tree(s, 0.5, NetOptions{.allow_coarse_ratio = true});
  const auto m = build_doubling_measure(tree, 0.5);
  const auto xs = sample_by_mass(m, 10, kSeed);
  double worst_tau = 0.0, worst_dim = 0.0;
  for (std::size_t x : xs) {
    for (double q : {0.0, 0.5, 2.0}) {
      const auto e = tau_q_estimate(s, tree, m, x, q, s.diameter(), tree.k_min(), tree.k_max());
      worst_tau = std::max(worst_tau, std::abs(e.tau_fit - (q - 1.0)));
    }
    const auto d = local_dimension_estimate(s, m, x, resolved_radii(s, tree, s.diameter()));
    worst_dim = std::max({worst_dim, std::abs(d.upper_dim_est - 1.0), std::abs(d.lower_dim_est - 1.0)});
  }
  const double secs = seconds_since(t0);
  report(5, "uniform binary ultrametric (depth 12, r = p = 1/2): tau_q = q - 1, local dimension 1",
         worst_tau <= kSpectrumTol && worst_dim <= kSpectrumTol && secs < kSpectrumBudgetSeconds,
         fmt("max |tau_q - (q-1)| = %.2e over q in {0, 1/2, 2}, max |dim - 1| = %.2e (tol %.2f), %zu points, "
             "%.2f s (budget %.0f s)",
             worst_tau, worst_dim, kSpectrumTol, xs.size(), secs, kSpectrumBudgetSeconds));
}

void criterion_6() {
  const auto t0 = std::chrono::steady_clock::now();
  auto s = generate(GeneratorSpec::grid1d(4096));
  const double r = 1.0 / 7.0;
  const auto tree = build_tree(s, r);
  const auto radii = resolved_radii(s, tree, s.diameter());
  bool ok = true, decreasing = true;
  double prev_bound = INFINITY;
  std::string detail;
  for (double p : {0.05, 0.01, 0.002}) {
    const auto m = build_doubling_measure(tree, p);
    const double bound = dimension_bound(m.M_max, p, r);
    double mean = 0.0;
    const auto xs = sample_by_mass(m, kDimensionSamples, kSeed);
    for (std::size_t x : xs) mean += local_dimension_estimate(s, m, x, radii).upper_dim_est;
    mean /= static_cast<double>(xs.size());
    decreasing = decreasing && bound < prev_bound;
    ok = ok && mean <= bound + kDimensionSlack;
    prev_bound = bound;
    detail += fmt("p=%g: mean %.4f vs bound %.4f + %.1f; ", p, mean, bound, kDimensionSlack);
  }
  const double secs = seconds_since(t0);
  ok = ok && decreasing && secs < kDimensionBudgetSeconds;
  detail += fmt("bound decreasing: %s, %.2f s (budget %.0f s)", decreasing ? "yes" : "no", secs,
                kDimensionBudgetSeconds);
  report(6, "grid1d(4096), r = 1/7: mean upper local dimension <= dimension_bound + 0.1", ok, detail);
}

void criterion_7() {
  double worst = 0.0;
  for (std::size_t M = 1; M <= 12; ++M) {
    for (double r : {1.0 / 7.0, 0.2, 0.25, 0.3, 0.5}) {
      const double p = 1.0 / static_cast<double>(M + 1);
      worst = std::max(worst, std::abs(dimension_bound(M, p, r) - std::log(static_cast<double>(M + 1)) / std::log(1.0 / r)));
    }
  }
  // The M = 1, p = 1/4, r = 1/7 anchor, evaluated in extended precision.
  const long double lp = 0.25L, lr = 1.0L / 7.0L;
  const long double anchor = (lp * std::log(lp) + (1.0L - lp) * std::log(1.0L - lp)) / std::log(lr);
  const double err = std::abs(dimension_bound(1, 0.25, 1.0 / 7.0) - static_cast<double>(anchor));
  report(7, "dimension_bound anchors", worst <= kAnchorTol && err <= kAnchorTol,
         fmt("max |bound(M, 1/(M+1), r) - log(M+1)/log(1/r)| = %.2e; M=1, p=1/4, r=1/7: %.15f (err %.2e; tol %.0e)",
             worst, dimension_bound(1, 0.25, 1.0 / 7.0), err, kAnchorTol));
}

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "netcube");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ofstream sink("/dev/null");
  return cli::run(static_cast<int>(argv.size()), argv.data(), sink, sink);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void criterion_8() {
  const std::string spec = R"({"kind":"euclidean_random","seed":2024,"params":{"n":400,"dim":2}})";
  const fs::path root = fs::temp_directory_path() / "netcube_acceptance_determinism";
  std::vector<fs::path> dirs{root / "run_a", root / "run_b"};
  bool codes_ok = true;
  for (const auto& dir : dirs) {
    fs::remove_all(dir);
    fs::create_directories(dir);
    for (const char* cmd : {"build", "measure", "verify", "spectrum"}) {
      const fs::path out = dir / cmd;
      std::vector<std::string> args{cmd, "--generate", spec, "--r", "0.142857142857", "--out", out.string(), "--emit-members"};
      if (std::string(cmd) != "build") {
        args.insert(args.end(), {"--p", "0.01", "--seed", "99", "--samples", std::string(cmd) == "spectrum" ? "30" : "500"});
      }
      if (std::string(cmd) == "verify") args.push_back("--exhaustive");
      codes_ok = codes_ok && run_cli(args) == 0;
    }
  }
  std::size_t files = 0, differing = 0;
  std::string first;
  for (const auto& entry : fs::recursive_directory_iterator(dirs[0])) {
    if (!entry.is_regular_file()) continue;
    ++files;
    const fs::path twin = dirs[1] / fs::relative(entry.path(), dirs[0]);
    if (!fs::exists(twin) || slurp(entry.path()) != slurp(twin)) {
      ++differing;
      if (first.empty()) first = fs::relative(entry.path(), dirs[0]).string();
    }
  }
  report(8, "determinism: two full pipeline runs give byte-identical artifacts", codes_ok && differing == 0 && files > 0,
         fmt("%zu JSON/CSV files compared, %zu differing%s%s", files, differing, first.empty() ? "" : ", first: ",
             first.c_str()));
}

}  // namespace

int main() {
  const auto cases = criterion_1();
  criterion_2(cases);
  criteria_3_4(cases);
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  std::size_t failed = 0;
  for (const auto& l : lines) failed += l.pass ? 0 : 1;
  std::printf("%zu of %zu criteria passed\n", lines.size() - failed, lines.size());
  return failed == 0 ? 0 : 1;
}
