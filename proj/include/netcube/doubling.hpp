#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "netcube/cube_tree.hpp"
#include "netcube/exec.hpp"
#include "netcube/measure.hpp"
#include "netcube/metric_space.hpp"

namespace netcube {

// The level k with 3 r^k <= t < 3 r^(k-1), clamped into [k_min, k_max].
struct ScaleLevel {
  int k = 0;
  int unclamped = 0;
  bool clamped = false;
};
ScaleLevel scale_level(double t, double r, int k_min, int k_max);

// Worst case of one sampled (y, t).
struct Witness {
  std::size_t y = 0;
  double t = 0.0;
  int k = 0;
};

struct DoublingReport {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double p = 0.0;
  double r = 0.0;
  // Comparability: max mu(Q_{k,j}) / mu(Q_{k,i}) over level-k cubes Q_{k,j}
  // meeting B(y, 2t), against a level-k cube Q_{k,i} inside B(y, t).
  double worst_ratio_cubes = 1.0;
  double bound_cubes = 0.0;
  Witness worst_cubes_at;
  // Doubling: max mu(B(y, 2t)) / mu(B(y, t)).
  double worst_ratio_balls = 1.0;
  Witness worst_balls_at;
  std::size_t M_tilde = 0;
  double bound_balls = 0.0;
  // Samples whose ratio exceeded count(cubes meeting B(y,2t)) * p^-4.
  std::size_t per_sample_violations = 0;
  std::size_t containment_failures = 0;
  std::size_t clamped = 0;
  // The p^-4 bound is asserted only for r <= 1/7; above that it is recorded.
  bool bound_asserted = true;
  bool pass_cubes = true;
  bool pass_balls = true;
  bool exhaustive = false;

  bool pass() const { return pass_cubes && pass_balls; }
};

// Samples (y, t): y uniform over points, log t uniform over
// [log(3 r^k_max), log(diameter)]. Sample s draws from Rng::for_stream(seed, s).
DoublingReport verify_cube_comparability(const CubeTree& tree, const MeasureAssignment& measure,
                                         const FiniteMetricSpace& space, std::size_t samples,
                                         std::uint64_t seed, Exec exec = Exec::parallel);

DoublingReport verify_doubling(const FiniteMetricSpace& space, const CubeTree& tree,
                               const MeasureAssignment& measure, std::size_t samples,
                               std::uint64_t seed, Exec exec = Exec::parallel);

// Every centre y and every radius where mu(B(y,t)), mu(B(y,2t)) or the
// scale level changes, within [3 r^k_max, diameter]. Limited to 512 points.
inline constexpr std::size_t kExhaustiveLimit = 512;
DoublingReport verify_doubling_exhaustive(const FiniteMetricSpace& space, const CubeTree& tree,
                                          const MeasureAssignment& measure,
                                          Exec exec = Exec::parallel);

}  // namespace netcube
