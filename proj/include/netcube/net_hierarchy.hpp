#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "netcube/exec.hpp"
#include "netcube/metric_space.hpp"

namespace netcube {

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

// r^k. Every scale threshold in the library goes through this one function
// so that equal levels always compare against bit-identical radii.
inline double scale_power(double r, int k) { return std::pow(r, k); }

// Nested maximal separated nets x_{k,i}, k_min <= k <= k_max.
//
// levels[k - k_min] lists the point indices of N_k; the position of a point
// in that list is its index i. Level k_max holds every point (x_0 first,
// then ascending index) and level k_min is {x_0}. Level k is the greedy
// r^k-separated subsequence of level k + 1, so N_k is a subset of N_{k+1}.
struct NetHierarchy {
  double r = 0.0;
  int k_min = 0;
  int k_max = 0;
  std::size_t base_point = 0;
  std::vector<std::vector<std::size_t>> levels;

  std::size_t level_count() const { return levels.size(); }
  const std::vector<std::size_t>& level(int k) const {
    return levels.at(static_cast<std::size_t>(k - k_min));
  }
  double scale(int k) const { return scale_power(r, k); }
};

struct NetOptions {
  // Accept r in [1/3, 1). The nets and parents stay well defined but the
  // cube sandwich constants no longer apply. Used for trees whose levels
  // must coincide with a space's own branching (e.g. r = 1/2 on a binary
  // ultrametric).
  bool allow_coarse_ratio = false;
};

// Least k with r^k <= min_gap, and greatest k with r^k > diameter.
int finest_level(double r, double min_gap);
int coarsest_level(double r, double diameter);

NetHierarchy build_nets(const FiniteMetricSpace& space, double r, NetOptions options = {});

// parent[k - k_min][i] is the index j in N_{k-1} of the nearest level-(k-1)
// net point to x_{k,i}, ties to the smallest j. Empty at k_min.
// central_child[k - k_min][j] is the i in N_{k+1} with x_{k+1,i} = x_{k,j}.
// Empty at k_max.
struct ParentMap {
  std::vector<std::vector<std::size_t>> parent;
  std::vector<std::vector<std::size_t>> central_child;
};

ParentMap assign_parents(const FiniteMetricSpace& space, const NetHierarchy& nets,
                         Exec exec = Exec::parallel);

}  // namespace netcube
