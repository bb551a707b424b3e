#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "netcube/cube_tree.hpp"
#include "netcube/exec.hpp"
#include "netcube/measure.hpp"
#include "netcube/metric_space.hpp"

namespace netcube {

// How a cube meeting B(x, t) is weighted in the L^q sum.
enum class CubeWeight {
  whole_cube,    // mu(Q_{k,i})
  intersection,  // mu(Q_{k,i} ∩ B(x, t))
};

// Sum over level-k cubes meeting B(x, t) of their weight raised to q.
double lq_sum(const FiniteMetricSpace& space, const CubeTree& tree, const MeasureAssignment& measure,
              std::size_t x, double t, int k, double q, CubeWeight weight = CubeWeight::whole_cube);

struct SpectrumEstimate {
  std::size_t x = 0;
  double q = 0.0;
  double t = 0.0;
  int k_lo = 0;
  int k_hi = 0;
  std::vector<int> levels;
  std::vector<double> log_sums;
  // Least-squares slope of log_sums against k log r.
  double tau_fit = 0.0;
  // Minimum over nonzero levels of log_sum / (k log r).
  double tau_min = 0.0;
};

// Needs at least three levels in [k_lo, k_hi], inside [k_min, k_max].
SpectrumEstimate tau_q_estimate(const FiniteMetricSpace& space, const CubeTree& tree,
                                const MeasureAssignment& measure, std::size_t x, double q, double t,
                                int k_lo, int k_hi, CubeWeight weight = CubeWeight::whole_cube);

struct DimensionEstimate {
  std::size_t x = 0;
  std::vector<double> t_grid;
  std::vector<double> log_ball_masses;
  // Extremes of the slope of log mu(B(x,t)) against log t over the tail
  // windows: every suffix of the radius grid with at least four radii.
  double upper_dim_est = 0.0;
  double lower_dim_est = 0.0;
};

// t_grid must be strictly decreasing with at least four radii.
DimensionEstimate local_dimension_estimate(const FiniteMetricSpace& space, const MeasureAssignment& measure,
                                           std::size_t x, std::span<const double> t_grid);

// Geometric radii hi, hi/2, hi/4, ... down to lo (inclusive bounds).
std::vector<double> dyadic_radii(double hi, double lo);

// (M p log p + (1 - M p) log(1 - M p)) / log r.
// Dyadic radii from t down to the finest radius the scale-level map resolves
// (3 r^k_max, and never below half the minimum gap); four geometric radii in
// [t/8, t] when fewer than four dyadic steps fit.
std::vector<double> resolved_radii(const FiniteMetricSpace& space, const CubeTree& tree, double t);

double dimension_bound(std::size_t M, double p, double r);

// Points drawn with probability proportional to their mass.
std::vector<std::size_t> sample_by_mass(const MeasureAssignment& measure, std::size_t count,
                                        std::uint64_t seed);

struct ChainPoint {
  std::size_t x = 0;
  // tau_q / (q - 1) at the q below 1 closest to 1, and at the q above 1.
  double from_below = 0.0;
  double from_above = 0.0;
  double lower_dim = 0.0;
  double upper_dim = 0.0;
  bool ordered = false;
};

struct ChainReport {
  std::vector<ChainPoint> points;
  double tolerance = 0.15;
  std::size_t ordered = 0;
  double fraction_ordered() const {
    return points.empty() ? 1.0 : static_cast<double>(ordered) / static_cast<double>(points.size());
  }
};

// For each point: tau_q / (q - 1) surrogates on both sides of q = 1 over the
// levels finer than t, and the local dimension over dyadic radii from t down
// to the minimum gap. Records whether
//   from_above <= lower_dim <= upper_dim <= from_below
// holds within `tolerance`; nothing is asserted.
ChainReport check_dimension_chain(const FiniteMetricSpace& space, const CubeTree& tree,
                                  const MeasureAssignment& measure, std::span<const std::size_t> points,
                                  std::span<const double> q_grid, double t, double tolerance = 0.15,
                                  Exec exec = Exec::parallel);

// Least-squares slope of y against x.
double ls_slope(std::span<const double> x, std::span<const double> y);

// Rows "x,q,k,log_sum" and "x,log_t,log_mass" (with header lines).
void write_spectrum_csv(std::ostream& os, std::span<const SpectrumEstimate> estimates);
void write_dimension_csv(std::ostream& os, std::span<const DimensionEstimate> estimates);

}  // namespace netcube
