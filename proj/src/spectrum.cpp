#include "netcube/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

#include "netcube/doubling.hpp"
#include "netcube/rng.hpp"

namespace netcube {

double ls_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope needs two or more paired values");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("slope needs at least two distinct abscissae");
  return sxy / sxx;
}

double lq_sum(const FiniteMetricSpace& space, const CubeTree& tree, const MeasureAssignment& measure,
              std::size_t x, double t, int k, double q, CubeWeight weight) {
  if (!(q >= 0.0)) throw std::invalid_argument("q must be >= 0");
  if (!(t > 0.0)) throw std::invalid_argument("window radius must be > 0");
  if (x >= space.size()) throw std::out_of_range("point index out of range");
  const auto assign = tree.assignment(k);
  std::map<std::size_t, double> hit;
  for (std::size_t z = 0; z < space.size(); ++z) {
    if (space.dist(x, z) <= t) hit[assign[z]] += measure.point_mass[z];
  }
  double sum = 0.0;
  for (const auto& [cube, inside] : hit) {
    const double w = weight == CubeWeight::whole_cube ? measure.mass(k, cube) : inside;
    sum += std::pow(w, q);
  }
  return sum;
}

SpectrumEstimate tau_q_estimate(const FiniteMetricSpace& space, const CubeTree& tree,
                                const MeasureAssignment& measure, std::size_t x, double q, double t, int k_lo,
                                int k_hi, CubeWeight weight) {
  if (k_lo < tree.k_min() || k_hi > tree.k_max() || k_hi - k_lo < 2) {
    throw std::invalid_argument("spectrum window [" + std::to_string(k_lo) + ", " + std::to_string(k_hi) +
                                "] must hold three levels inside [" + std::to_string(tree.k_min()) + ", " +
                                std::to_string(tree.k_max()) + "]");
  }
  SpectrumEstimate est;
  est.x = x;
  est.q = q;
  est.t = t;
  est.k_lo = k_lo;
  est.k_hi = k_hi;
  const double log_r = std::log(tree.r());
  std::vector<double> abscissa;
  est.tau_min = std::numeric_limits<double>::infinity();
  for (int k = k_lo; k <= k_hi; ++k) {
    const double ls = std::log(lq_sum(space, tree, measure, x, t, k, q, weight));
    est.levels.push_back(k);
    est.log_sums.push_back(ls);
    abscissa.push_back(static_cast<double>(k) * log_r);
    if (k != 0) est.tau_min = std::min(est.tau_min, ls / (static_cast<double>(k) * log_r));
  }
  est.tau_fit = ls_slope(abscissa, est.log_sums);
  return est;
}

DimensionEstimate local_dimension_estimate(const FiniteMetricSpace& space, const MeasureAssignment& measure,
                                           std::size_t x, std::span<const double> t_grid) {
  if (x >= space.size()) throw std::out_of_range("point index out of range");
  if (t_grid.size() < 4) throw std::invalid_argument("local dimension needs at least four radii");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0)) throw std::invalid_argument("radii must be positive");
    if (i > 0 && !(t_grid[i] < t_grid[i - 1])) throw std::invalid_argument("radii must be strictly decreasing");
    if (space.size() > 1 && t_grid[i] < space.min_gap() / 2.0) {
      throw std::invalid_argument("radius below half the minimum gap");
    }
  }
  DimensionEstimate est;
  est.x = x;
  est.t_grid.assign(t_grid.begin(), t_grid.end());
  std::vector<double> log_t;
  for (double t : t_grid) {
    double mass = 0.0;
    for (std::size_t z = 0; z < space.size(); ++z) {
      if (space.dist(x, z) <= t) mass += measure.point_mass[z];
    }
    if (!(mass > 0.0)) throw std::logic_error("ball of zero mass");
    log_t.push_back(std::log(t));
    est.log_ball_masses.push_back(std::log(mass));
  }
  est.upper_dim_est = -std::numeric_limits<double>::infinity();
  est.lower_dim_est = std::numeric_limits<double>::infinity();
  const std::size_t n = t_grid.size();
  for (std::size_t start = 0; start + 4 <= n; ++start) {
    const double s = ls_slope(std::span<const double>(log_t).subspan(start),
                              std::span<const double>(est.log_ball_masses).subspan(start));
    est.upper_dim_est = std::max(est.upper_dim_est, s);
    est.lower_dim_est = std::min(est.lower_dim_est, s);
  }
  return est;
}

std::vector<double> dyadic_radii(double hi, double lo) {
  if (!(hi > 0.0 && lo > 0.0)) throw std::invalid_argument("radii bounds must be positive");
  std::vector<double> out;
  for (double t = hi; t >= lo; t /= 2.0) out.push_back(t);
  return out;
}

std::vector<double> resolved_radii(const FiniteMetricSpace& space, const CubeTree& tree, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("radius must be positive");
  const double gap = space.size() > 1 ? space.min_gap() : t / 8.0;
  const double floor_radius = std::max(3.0 * scale_power(tree.r(), tree.k_max()), gap / 2.0);
  std::vector<double> radii = floor_radius < t ? dyadic_radii(t, floor_radius) : std::vector<double>{};
  if (radii.size() < 4) {
    const double lo = std::max(t / 8.0, gap / 2.0);
    radii.clear();
    for (int j = 0; j < 4; ++j) radii.push_back(t * std::pow(lo / t, j / 3.0));
  }
  return radii;
}

double dimension_bound(std::size_t M, double p, double r) {
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("r must lie in (0, 1)");
  const double bound = 1.0 / static_cast<double>(M + 1);
  if (!(p > 0.0 && p <= bound)) {
    throw std::invalid_argument("p must lie in (0, 1/(M+1)]");
  }
  const double mp = static_cast<double>(M) * p;
  const double central = 1.0 - mp;
  const double spread = M == 0 ? 0.0 : mp * std::log(p);
  return (spread + central * std::log(central)) / std::log(r);
}

std::vector<std::size_t> sample_by_mass(const MeasureAssignment& measure, std::size_t count, std::uint64_t seed) {
  std::vector<double> cumulative(measure.point_mass.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < cumulative.size(); ++i) {
    acc += measure.point_mass[i];
    cumulative[i] = acc;
  }
  Rng rng(seed);
  std::vector<std::size_t> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    out.push_back(static_cast<std::size_t>(it - cumulative.begin()));
  }
  return out;
}

namespace {

ChainPoint chain_point(const FiniteMetricSpace& space, const CubeTree& tree, const MeasureAssignment& measure,
                       std::size_t x, double q_below, double q_above, double t, double tolerance) {
  int k_lo = scale_level(t, tree.r(), tree.k_min(), tree.k_max()).k;
  k_lo = std::max(tree.k_min(), std::min(k_lo, tree.k_max() - 2));
  ChainPoint cp;
  cp.x = x;
  cp.from_below = tau_q_estimate(space, tree, measure, x, q_below, t, k_lo, tree.k_max()).tau_fit / (q_below - 1.0);
  cp.from_above = tau_q_estimate(space, tree, measure, x, q_above, t, k_lo, tree.k_max()).tau_fit / (q_above - 1.0);
  const std::vector<double> radii = resolved_radii(space, tree, t);
  const DimensionEstimate dim = local_dimension_estimate(space, measure, x, radii);
  cp.lower_dim = dim.lower_dim_est;
  cp.upper_dim = dim.upper_dim_est;
  cp.ordered = cp.from_above - tolerance <= cp.lower_dim && cp.lower_dim <= cp.upper_dim &&
               cp.upper_dim <= cp.from_below + tolerance;
  return cp;
}

}  // namespace

ChainReport check_dimension_chain(const FiniteMetricSpace& space, const CubeTree& tree,
                                  const MeasureAssignment& measure, std::span<const std::size_t> points,
                                  std::span<const double> q_grid, double t, double tolerance, Exec exec) {
  double q_below = -std::numeric_limits<double>::infinity();
  double q_above = std::numeric_limits<double>::infinity();
  for (double q : q_grid) {
    if (q < 1.0) q_below = std::max(q_below, q);
    if (q > 1.0) q_above = std::min(q_above, q);
  }
  if (std::isinf(q_below) || std::isinf(q_above) || q_below < 0.0) {
    throw std::invalid_argument("q grid must straddle 1 with nonnegative values");
  }
  if (tree.level_count() < 3) throw std::invalid_argument("tree needs at least three levels");

  ChainReport rep;
  rep.tolerance = tolerance;
  rep.points.resize(points.size());
  const auto count = static_cast<std::int64_t>(points.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < count; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      rep.points[ii] = chain_point(space, tree, measure, points[ii], q_below, q_above, t, tolerance);
    }
  } else {
    for (std::size_t i = 0; i < points.size(); ++i) {
      rep.points[i] = chain_point(space, tree, measure, points[i], q_below, q_above, t, tolerance);
    }
  }
  for (const auto& cp : rep.points) rep.ordered += cp.ordered ? 1 : 0;
  return rep;
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_spectrum_csv(std::ostream& os, std::span<const SpectrumEstimate> estimates) {
  os << "x,q,k,log_sum\n";
  for (const auto& e : estimates) {
    for (std::size_t i = 0; i < e.levels.size(); ++i) {
      os << e.x << ',' << num(e.q) << ',' << e.levels[i] << ',' << num(e.log_sums[i]) << '\n';
    }
  }
}

void write_dimension_csv(std::ostream& os, std::span<const DimensionEstimate> estimates) {
  os << "x,log_t,log_mass\n";
  for (const auto& e : estimates) {
    for (std::size_t i = 0; i < e.t_grid.size(); ++i) {
      os << e.x << ',' << num(std::log(e.t_grid[i])) << ',' << num(e.log_ball_masses[i]) << '\n';
    }
  }
}

}  // namespace netcube
