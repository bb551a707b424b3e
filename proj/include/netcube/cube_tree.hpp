#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netcube/exec.hpp"
#include "netcube/metric_space.hpp"
#include "netcube/net_hierarchy.hpp"
#include "netcube/report.hpp"

namespace netcube {

// Cube Q_{k,i}. Parent and children are indices into the neighbouring levels.
struct CubeNode {
  int k = 0;
  std::size_t i = 0;
  std::size_t center = 0;
  std::size_t parent = npos;
  std::vector<std::size_t> children;
  std::size_t central_child = npos;
};

// The nested partitions {Q_{k,i}} on a finite space.
//
// On a finite set the closures are the sets themselves and the unique
// nearest-parent rule already puts every point on exactly one chain, so a
// cube is the set of points whose level-k ancestor is (k, i). Membership is
// stored per level as a point -> cube index table plus a CSR member list.
class CubeTree {
 public:
  double r() const { return r_; }
  int k_min() const { return k_min_; }
  int k_max() const { return k_max_; }
  std::size_t base_point() const { return base_point_; }
  std::size_t point_count() const { return n_points_; }
  std::size_t level_count() const { return levels_.size(); }

  bool has_level(int k) const { return k >= k_min_ && k <= k_max_; }
  std::size_t level_size(int k) const { return level(k).size(); }
  const std::vector<CubeNode>& level(int k) const;
  const CubeNode& node(int k, std::size_t i) const { return level(k).at(i); }
  const CubeNode& root() const { return levels_.front().front(); }

  // Index i of the level-k cube containing `point`.
  std::size_t cube_of(std::size_t point, int k) const;
  // Point -> cube index table of level k.
  std::span<const std::size_t> assignment(int k) const;
  // Member points of Q_{k,i}, ascending.
  std::span<const std::size_t> members(int k, std::size_t i) const;

  std::size_t node_count() const;

 private:
  friend CubeTree build_cubes(const NetHierarchy&, const ParentMap&);
  std::size_t slot(int k) const;

  double r_ = 0.0;
  int k_min_ = 0;
  int k_max_ = 0;
  std::size_t base_point_ = 0;
  std::size_t n_points_ = 0;
  std::vector<std::vector<CubeNode>> levels_;
  std::vector<std::vector<std::size_t>> assignment_;
  std::vector<std::vector<std::size_t>> member_offsets_;
  std::vector<std::vector<std::size_t>> member_points_;
};

CubeTree build_cubes(const NetHierarchy& nets, const ParentMap& parents);

// Convenience: nets, parents and cubes in one call.
CubeTree build_tree(const FiniteMetricSpace& space, double r, NetOptions options = {},
                    Exec exec = Exec::parallel);

// Throws std::out_of_range for levels outside [k_min, k_max].
std::size_t cube_at(const CubeTree& tree, std::size_t point, int k);

// Inner and outer radius factors of the ball sandwich:
// c = 1/2 - r/(1-r), C = 1/(1-r).
struct SandwichConstants {
  double c;
  double C;
};
SandwichConstants sandwich_constants(double r);

// Separation, relative maximality, nesting and parent distance of the nets.
VerificationReport verify_nets(const NetHierarchy& nets, const ParentMap& parents,
                               const FiniteMetricSpace& space);

// Checks the partition (i), nesting (ii), ball sandwich (iii), base point
// ball (iv) and net nesting (v) on every level. Sandwich slacks are reported
// in units of r^k.
VerificationReport verify_tree_properties(const CubeTree& tree, const FiniteMetricSpace& space,
                                          Exec exec = Exec::parallel);

// The level k with r_base^k < r_tilde^n <= r_base^(k-1): level n of a
// ratio-r_tilde family is level k of a ratio-r_base tree.
int regrade_scales(double r_base, double r_tilde, int n);

// regrade_scales for n = 0 .. count-1.
std::vector<int> regraded_levels(double r_base, double r_tilde, int count);

}  // namespace netcube
