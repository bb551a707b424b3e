#pragma once

// Brute-force reference computations. Each one works from raw distances and
// the parent pointers alone, never from the structures under test.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "netcube/cube_tree.hpp"
#include "netcube/measure.hpp"
#include "netcube/metric_space.hpp"
#include "netcube/net_hierarchy.hpp"

namespace oracle {

using netcube::CubeTree;
using netcube::FiniteMetricSpace;
using netcube::MeasureAssignment;

struct Triple {
  std::size_t i, j, k;
  auto operator<=>(const Triple&) const = default;
};

inline std::vector<Triple> triangle_violations(const std::vector<double>& d, std::size_t n, double tol) {
  std::vector<Triple> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = i + 1; k < n; ++k) {
        if (j == i || j == k) continue;
        if (d[i * n + k] > d[i * n + j] + d[j * n + k] + tol) out.push_back({i, j, k});
      }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::size_t> ball(const FiniteMetricSpace& s, std::size_t x, double t, bool closed) {
  std::vector<std::size_t> out;
  for (std::size_t y = 0; y < s.size(); ++y) {
    const double d = s.dist(x, y);
    if (closed ? d <= t : d < t) out.push_back(y);
  }
  return out;
}

// Level-k ancestor of every point, walking parent pointers from the leaves.
inline std::vector<std::size_t> ancestors_at(const netcube::NetHierarchy& nets, const netcube::ParentMap& parents,
                                             int k) {
  const auto& leaves = nets.level(nets.k_max);
  std::vector<std::size_t> leaf_index(leaves.size());
  for (std::size_t i = 0; i < leaves.size(); ++i) leaf_index[leaves[i]] = i;
  std::vector<std::size_t> out(leaves.size());
  for (std::size_t p = 0; p < leaves.size(); ++p) {
    std::size_t idx = leaf_index[p];
    for (int l = nets.k_max; l > k; --l) idx = parents.parent[static_cast<std::size_t>(l - nets.k_min)][idx];
    out[p] = idx;
  }
  return out;
}

// Members of every level-k cube of a built tree, recomputed by ancestor walk.
inline std::vector<std::vector<std::size_t>> members_by_walk(const CubeTree& tree, int k) {
  std::vector<std::vector<std::size_t>> out(tree.level_size(k));
  const auto& leaves = tree.level(tree.k_max());
  for (const auto& leaf : leaves) {
    std::size_t idx = leaf.i;
    for (int l = tree.k_max(); l > k; --l) idx = tree.node(l, idx).parent;
    out[idx].push_back(leaf.center);
  }
  for (auto& m : out) std::sort(m.begin(), m.end());
  return out;
}

// Sandwich failures: points inside the open c r^k ball but outside the cube,
// and members beyond C r^k.
inline std::size_t sandwich_failures(const CubeTree& tree, const FiniteMetricSpace& s) {
  const auto [c, C] = netcube::sandwich_constants(tree.r());
  std::size_t bad = 0;
  for (int k = tree.k_min(); k <= tree.k_max(); ++k) {
    const double rk = netcube::scale_power(tree.r(), k);
    const auto members = members_by_walk(tree, k);
    for (std::size_t i = 0; i < members.size(); ++i) {
      const std::size_t z = tree.node(k, i).center;
      std::set<std::size_t> in(members[i].begin(), members[i].end());
      for (std::size_t y = 0; y < s.size(); ++y) {
        const double d = s.dist(y, z);
        if (d < c * rk && !in.count(y)) ++bad;
        if (in.count(y) && d > C * rk) ++bad;
      }
    }
  }
  return bad;
}

// Masses of the standard recursion, top down, with child counts read off
// the children lists.
inline std::map<std::pair<int, std::size_t>, double> doubling_masses(const CubeTree& tree, double p) {
  std::map<std::pair<int, std::size_t>, double> m;
  m[{tree.k_min(), 0}] = 1.0;
  for (int k = tree.k_min(); k < tree.k_max(); ++k) {
    for (const auto& node : tree.level(k)) {
      const double mass = m.at({k, node.i});
      const double M = static_cast<double>(node.children.size()) - 1.0;
      for (std::size_t c : node.children) {
        const bool central = tree.node(k + 1, c).center == node.center;
        m[{k + 1, c}] = central ? (1.0 - M * p) * mass : p * mass;
      }
    }
  }
  return m;
}

inline double ball_mass(const FiniteMetricSpace& s, const MeasureAssignment& mu, std::size_t x, double t) {
  double acc = 0.0;
  for (std::size_t y = 0; y < s.size(); ++y)
    if (s.dist(x, y) <= t) acc += mu.point_mass[y];
  return acc;
}

inline double lq_sum(const FiniteMetricSpace& s, const CubeTree& tree, const MeasureAssignment& mu, std::size_t x,
                     double t, int k, double q) {
  const auto members = members_by_walk(tree, k);
  double acc = 0.0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    bool meets = false;
    for (std::size_t y : members[i]) meets = meets || s.dist(x, y) <= t;
    if (meets) acc += std::pow(mu.mass(k, i), q);
  }
  return acc;
}

inline double dimension_bound(long double M, long double p, long double r) {
  return static_cast<double>((M * p * std::log(p) + (1 - M * p) * std::log(1 - M * p)) / std::log(r));
}

}  // namespace oracle
