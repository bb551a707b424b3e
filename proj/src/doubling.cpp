#include "netcube/doubling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "netcube/rng.hpp"

namespace netcube {

ScaleLevel scale_level(double t, double r, int k_min, int k_max) {
  if (!(t > 0.0)) throw std::invalid_argument("scale_level needs t > 0");
  int k = static_cast<int>(std::ceil(std::log(t / 3.0) / std::log(r)));
  while (!(3.0 * scale_power(r, k) <= t)) ++k;
  while (!(t < 3.0 * scale_power(r, k - 1))) --k;
  ScaleLevel out;
  out.unclamped = k;
  out.k = std::clamp(k, k_min, k_max);
  out.clamped = out.k != k;
  return out;
}

namespace {

// Mass ratios are products of the same factors taken in different orders;
// the bound comparison allows for that rounding and nothing more.
constexpr double kRoundingSlack = 1e-12;

struct Sample {
  std::size_t y = 0;
  double t = 0.0;
  int k = 0;
  bool clamped = false;
  bool contained = true;
  double ratio_cubes = 1.0;
  double ratio_balls = 1.0;
  std::size_t meeting = 1;
};

struct Setup {
  double lo = 0.0;
  double hi = 0.0;
  double bound = 0.0;
};

void check_inputs(const FiniteMetricSpace& space, const CubeTree& tree, const MeasureAssignment& measure) {
  if (tree.point_count() != space.size() || measure.point_mass.size() != space.size() ||
      measure.node_mass.size() != tree.level_count() || measure.k_min != tree.k_min()) {
    throw std::invalid_argument("measure, tree and space do not belong together");
  }
  for (int k = tree.k_min(); k <= tree.k_max(); ++k) {
    if (measure.node_mass[static_cast<std::size_t>(k - tree.k_min())].size() != tree.level_size(k)) {
      throw std::invalid_argument("measure, tree and space do not belong together");
    }
  }
}

Setup setup_for(const FiniteMetricSpace& space, const CubeTree& tree, const MeasureAssignment& measure) {
  Setup s;
  s.lo = 3.0 * scale_power(tree.r(), tree.k_max());
  s.hi = std::max(space.diameter(), s.lo);
  s.bound = std::pow(measure.p, -4.0);
  return s;
}

// Level-k cube inside B(y, t): y's own cube first, then a scan of level k.
std::size_t contained_cube(const FiniteMetricSpace& space, const CubeTree& tree, std::size_t y, double t,
                           int k) {
  auto inside = [&](std::size_t i) {
    for (std::size_t z : tree.members(k, i)) {
      if (space.dist(y, z) > t) return false;
    }
    return true;
  };
  const std::size_t own = tree.cube_of(y, k);
  if (inside(own)) return own;
  for (std::size_t i = 0; i < tree.level_size(k); ++i) {
    if (i != own && inside(i)) return i;
  }
  return npos;
}

Sample evaluate(const FiniteMetricSpace& space, const CubeTree& tree, const MeasureAssignment& measure,
                std::size_t y, double t) {
  Sample s;
  s.y = y;
  s.t = t;
  const ScaleLevel sl = scale_level(t, tree.r(), tree.k_min(), tree.k_max());
  s.k = sl.k;
  s.clamped = sl.clamped;

  const auto assign = tree.assignment(s.k);
  std::vector<std::size_t> meeting;
  double inner = 0.0, outer = 0.0;
  for (std::size_t z = 0; z < space.size(); ++z) {
    const double d = space.dist(y, z);
    if (d <= 2.0 * t) {
      outer += measure.point_mass[z];
      meeting.push_back(assign[z]);
      if (d <= t) inner += measure.point_mass[z];
    }
  }
  std::sort(meeting.begin(), meeting.end());
  meeting.erase(std::unique(meeting.begin(), meeting.end()), meeting.end());
  s.meeting = meeting.size();
  if (!(inner > 0.0)) throw std::logic_error("zero-mass ball: measure has a non-positive point mass");
  s.ratio_balls = outer / inner;

  const std::size_t i = contained_cube(space, tree, y, t, s.k);
  if (i == npos) {
    s.contained = false;
    return s;
  }
  double heaviest = 0.0;
  for (std::size_t j : meeting) heaviest = std::max(heaviest, measure.mass(s.k, j));
  s.ratio_cubes = heaviest / measure.mass(s.k, i);
  return s;
}

Sample draw(const FiniteMetricSpace& space, const CubeTree& tree, const MeasureAssignment& measure,
            const Setup& setup, std::uint64_t seed, std::size_t index) {
  Rng rng = Rng::for_stream(seed, index);
  const std::size_t y = rng.index(space.size());
  const double u = rng.uniform();
  const double t = setup.hi > setup.lo ? std::exp(std::log(setup.lo) + u * (std::log(setup.hi) - std::log(setup.lo)))
                                       : setup.lo;
  return evaluate(space, tree, measure, y, std::clamp(t, setup.lo, setup.hi));
}

DoublingReport merge(const std::vector<Sample>& samples, const Setup& setup, const CubeTree& tree,
                     const MeasureAssignment& measure) {
  DoublingReport rep;
  rep.samples = samples.size();
  rep.p = measure.p;
  rep.r = tree.r();
  rep.bound_cubes = setup.bound;
  rep.bound_asserted = tree.r() <= 1.0 / 7.0 && measure.kind != MeasureKind::self_similar;
  for (const Sample& s : samples) {
    if (s.clamped) ++rep.clamped;
    if (!s.contained) {
      ++rep.containment_failures;
    } else if (s.ratio_cubes > rep.worst_ratio_cubes) {
      rep.worst_ratio_cubes = s.ratio_cubes;
      rep.worst_cubes_at = {s.y, s.t, s.k};
    }
    if (s.ratio_balls > rep.worst_ratio_balls) {
      rep.worst_ratio_balls = s.ratio_balls;
      rep.worst_balls_at = {s.y, s.t, s.k};
    }
    rep.M_tilde = std::max(rep.M_tilde, s.meeting);
    if (s.ratio_balls > static_cast<double>(s.meeting) * setup.bound * (1.0 + kRoundingSlack)) {
      ++rep.per_sample_violations;
    }
  }
  rep.bound_balls = static_cast<double>(rep.M_tilde) * setup.bound;
  if (rep.bound_asserted) {
    rep.pass_cubes = rep.containment_failures == 0 &&
                     rep.worst_ratio_cubes <= rep.bound_cubes * (1.0 + kRoundingSlack);
    rep.pass_balls = rep.per_sample_violations == 0 &&
                     rep.worst_ratio_balls <= rep.bound_balls * (1.0 + kRoundingSlack);
  }
  return rep;
}

std::vector<Sample> run_samples(const FiniteMetricSpace& space, const CubeTree& tree,
                                const MeasureAssignment& measure, const Setup& setup, std::size_t count,
                                std::uint64_t seed, Exec exec) {
  std::vector<Sample> out(count);
  if (exec == Exec::parallel) {
    const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t s = 0; s < n; ++s) {
      const auto idx = static_cast<std::size_t>(s);
      out[idx] = draw(space, tree, measure, setup, seed, idx);
    }
  } else {
    for (std::size_t s = 0; s < count; ++s) out[s] = draw(space, tree, measure, setup, seed, s);
  }
  return out;
}

}  // namespace

DoublingReport verify_cube_comparability(const CubeTree& tree, const MeasureAssignment& measure,
                                         const FiniteMetricSpace& space, std::size_t samples,
                                         std::uint64_t seed, Exec exec) {
  check_inputs(space, tree, measure);
  if (measure.kind == MeasureKind::self_similar) {
    throw std::invalid_argument("cube comparability applies to the standard split recursion only");
  }
  const Setup setup = setup_for(space, tree, measure);
  DoublingReport rep = merge(run_samples(space, tree, measure, setup, samples, seed, exec), setup, tree, measure);
  rep.seed = seed;
  return rep;
}

DoublingReport verify_doubling(const FiniteMetricSpace& space, const CubeTree& tree,
                               const MeasureAssignment& measure, std::size_t samples, std::uint64_t seed,
                               Exec exec) {
  check_inputs(space, tree, measure);
  const Setup setup = setup_for(space, tree, measure);
  DoublingReport rep = merge(run_samples(space, tree, measure, setup, samples, seed, exec), setup, tree, measure);
  rep.seed = seed;
  return rep;
}

namespace {

// All critical radii around one centre, evaluated from sorted distances.
std::vector<Sample> exhaustive_centre(const FiniteMetricSpace& space, const CubeTree& tree,
                                      const MeasureAssignment& measure, const Setup& setup, std::size_t y) {
  const std::size_t n = space.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> d(n);
  for (std::size_t z = 0; z < n; ++z) d[z] = space.dist(y, z);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  std::vector<double> sorted(n), prefix(n + 1, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    sorted[m] = d[order[m]];
    prefix[m + 1] = prefix[m] + measure.point_mass[order[m]];
  }

  // Per level: distinct cubes and heaviest cube among the nearest m points.
  const std::size_t levels = tree.level_count();
  std::vector<std::vector<std::size_t>> distinct(levels, std::vector<std::size_t>(n + 1, 0));
  std::vector<std::vector<double>> heaviest(levels, std::vector<double>(n + 1, 0.0));
  std::vector<double> own_radius(levels, 0.0);
  for (std::size_t li = 0; li < levels; ++li) {
    const int k = tree.k_min() + static_cast<int>(li);
    const auto assign = tree.assignment(k);
    std::vector<char> seen(tree.level_size(k), 0);
    for (std::size_t m = 0; m < n; ++m) {
      const std::size_t c = assign[order[m]];
      distinct[li][m + 1] = distinct[li][m] + (seen[c] ? 0 : 1);
      heaviest[li][m + 1] = std::max(heaviest[li][m], measure.mass(k, c));
      seen[c] = 1;
    }
    for (std::size_t z : tree.members(k, assign[y])) own_radius[li] = std::max(own_radius[li], d[z]);
  }

  std::vector<double> radii{setup.lo};
  for (double v : sorted) {
    radii.push_back(v);
    radii.push_back(v / 2.0);
  }
  for (int k = tree.k_min(); k <= tree.k_max(); ++k) radii.push_back(3.0 * scale_power(tree.r(), k));
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

  auto count_within = [&](double t) {
    return static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
  };

  std::vector<Sample> out;
  for (double t : radii) {
    if (t < setup.lo || t > setup.hi) continue;
    Sample s;
    s.y = y;
    s.t = t;
    const ScaleLevel sl = scale_level(t, tree.r(), tree.k_min(), tree.k_max());
    s.k = sl.k;
    s.clamped = sl.clamped;
    const auto li = static_cast<std::size_t>(s.k - tree.k_min());
    const std::size_t in1 = count_within(t);
    const std::size_t in2 = count_within(2.0 * t);
    s.ratio_balls = prefix[in2] / prefix[in1];
    s.meeting = distinct[li][in2];
    std::size_t i = npos;
    if (own_radius[li] <= t) {
      i = tree.cube_of(y, s.k);
    } else {
      i = contained_cube(space, tree, y, t, s.k);
    }
    if (i == npos) {
      s.contained = false;
    } else {
      s.ratio_cubes = heaviest[li][in2] / measure.mass(s.k, i);
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace

DoublingReport verify_doubling_exhaustive(const FiniteMetricSpace& space, const CubeTree& tree,
                                          const MeasureAssignment& measure, Exec exec) {
  check_inputs(space, tree, measure);
  if (space.size() > kExhaustiveLimit) {
    throw std::invalid_argument("exhaustive doubling check is limited to " + std::to_string(kExhaustiveLimit) +
                                " points");
  }
  const Setup setup = setup_for(space, tree, measure);
  const std::size_t n = space.size();
  std::vector<std::vector<Sample>> per_centre(n);
  if (exec == Exec::parallel) {
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t y = 0; y < count; ++y) {
      per_centre[static_cast<std::size_t>(y)] = exhaustive_centre(space, tree, measure, setup, static_cast<std::size_t>(y));
    }
  } else {
    for (std::size_t y = 0; y < n; ++y) per_centre[y] = exhaustive_centre(space, tree, measure, setup, y);
  }
  std::vector<Sample> all;
  for (auto& v : per_centre) all.insert(all.end(), v.begin(), v.end());
  DoublingReport rep = merge(all, setup, tree, measure);
  rep.exhaustive = true;
  return rep;
}

}  // namespace netcube
