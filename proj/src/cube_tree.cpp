#include "netcube/cube_tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace netcube {

std::size_t CubeTree::slot(int k) const {
  if (!has_level(k)) {
    throw std::out_of_range("level " + std::to_string(k) + " outside [" + std::to_string(k_min_) +
                            ", " + std::to_string(k_max_) + "]");
  }
  return static_cast<std::size_t>(k - k_min_);
}

const std::vector<CubeNode>& CubeTree::level(int k) const { return levels_[slot(k)]; }

std::size_t CubeTree::cube_of(std::size_t point, int k) const {
  if (point >= n_points_) throw std::out_of_range("point index out of range");
  return assignment_[slot(k)][point];
}

std::span<const std::size_t> CubeTree::assignment(int k) const { return assignment_[slot(k)]; }

std::span<const std::size_t> CubeTree::members(int k, std::size_t i) const {
  const std::size_t s = slot(k);
  const auto& off = member_offsets_[s];
  if (i + 1 >= off.size()) throw std::out_of_range("cube index out of range");
  return std::span<const std::size_t>(member_points_[s]).subspan(off[i], off[i + 1] - off[i]);
}

std::size_t CubeTree::node_count() const {
  std::size_t total = 0;
  for (const auto& lv : levels_) total += lv.size();
  return total;
}

CubeTree build_cubes(const NetHierarchy& nets, const ParentMap& parents) {
  CubeTree tree;
  tree.r_ = nets.r;
  tree.k_min_ = nets.k_min;
  tree.k_max_ = nets.k_max;
  tree.base_point_ = nets.base_point;
  tree.n_points_ = nets.levels.back().size();

  const std::size_t levels = nets.level_count();
  tree.levels_.resize(levels);
  for (std::size_t li = 0; li < levels; ++li) {
    const auto& pts = nets.levels[li];
    auto& nodes = tree.levels_[li];
    nodes.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      nodes[i].k = nets.k_min + static_cast<int>(li);
      nodes[i].i = i;
      nodes[i].center = pts[i];
      if (li > 0) nodes[i].parent = parents.parent[li][i];
      if (li + 1 < levels) nodes[i].central_child = parents.central_child[li][i];
    }
    if (li > 0) {
      for (std::size_t i = 0; i < pts.size(); ++i) {
        tree.levels_[li - 1][nodes[i].parent].children.push_back(i);
      }
    }
  }

  const std::size_t n = tree.n_points_;
  tree.assignment_.assign(levels, std::vector<std::size_t>(n, npos));
  {
    const auto& finest = nets.levels.back();
    auto& leaf = tree.assignment_.back();
    for (std::size_t i = 0; i < finest.size(); ++i) leaf[finest[i]] = i;
  }
  for (std::size_t li = levels - 1; li-- > 0;) {
    const auto& below = tree.assignment_[li + 1];
    auto& here = tree.assignment_[li];
    for (std::size_t p = 0; p < n; ++p) here[p] = parents.parent[li + 1][below[p]];
  }

  tree.member_offsets_.resize(levels);
  tree.member_points_.resize(levels);
  for (std::size_t li = 0; li < levels; ++li) {
    const auto& assign = tree.assignment_[li];
    auto& off = tree.member_offsets_[li];
    auto& pts = tree.member_points_[li];
    off.assign(tree.levels_[li].size() + 1, 0);
    for (std::size_t p = 0; p < n; ++p) ++off[assign[p] + 1];
    for (std::size_t i = 1; i < off.size(); ++i) off[i] += off[i - 1];
    pts.resize(n);
    std::vector<std::size_t> cursor(off.begin(), off.end() - 1);
    for (std::size_t p = 0; p < n; ++p) pts[cursor[assign[p]]++] = p;
  }
  return tree;
}

CubeTree build_tree(const FiniteMetricSpace& space, double r, NetOptions options, Exec exec) {
  const NetHierarchy nets = build_nets(space, r, options);
  const ParentMap parents = assign_parents(space, nets, exec);
  return build_cubes(nets, parents);
}

std::size_t cube_at(const CubeTree& tree, std::size_t point, int k) { return tree.cube_of(point, k); }

SandwichConstants sandwich_constants(double r) { return {0.5 - r / (1.0 - r), 1.0 / (1.0 - r)}; }

namespace {

std::string node_name(int k, std::size_t i) {
  return "(" + std::to_string(k) + "," + std::to_string(i) + ")";
}

}  // namespace

VerificationReport verify_nets(const NetHierarchy& nets, const ParentMap& parents,
                               const FiniteMetricSpace& space) {
  PropertyCheck separation{"separation"};
  PropertyCheck maximality{"relative_maximality"};
  PropertyCheck nesting{"net_nesting"};
  PropertyCheck parent_rule{"parent_nearest"};
  PropertyCheck parent_dist{"parent_distance"};
  PropertyCheck ends{"base_point_and_ends"};

  const std::size_t n = space.size();
  if (nets.levels.back().size() != n) ends.fail("finest level does not contain every point");
  if (nets.levels.front() != std::vector<std::size_t>{nets.base_point}) {
    ends.fail("coarsest level is not {x_0}");
  }

  std::vector<char> present(n, 0);
  for (std::size_t li = 0; li < nets.level_count(); ++li) {
    const int k = nets.k_min + static_cast<int>(li);
    const double rk = nets.scale(k);
    const auto& pts = nets.levels[li];
    if (pts.empty() || pts.front() != nets.base_point) {
      ends.fail("x_0 is not first in level " + std::to_string(k));
    }
    for (std::size_t a = 0; a < pts.size(); ++a) {
      for (std::size_t b = a + 1; b < pts.size(); ++b) {
        const double d = space.dist(pts[a], pts[b]);
        separation.observe((d - rk) / rk);
        if (d < rk) separation.fail("level " + std::to_string(k) + " points " + std::to_string(pts[a]) +
                                    "," + std::to_string(pts[b]));
      }
    }
    if (li + 1 < nets.level_count()) {
      const auto& finer = nets.levels[li + 1];
      for (std::size_t p : finer) present[p] = 1;
      for (std::size_t p : pts) {
        if (!present[p]) nesting.fail("point " + std::to_string(p) + " of level " + std::to_string(k));
      }
      for (std::size_t p : finer) present[p] = 0;

      const auto& parent = parents.parent[li + 1];
      for (std::size_t i = 0; i < finer.size(); ++i) {
        double nearest = std::numeric_limits<double>::infinity();
        std::size_t arg = npos;
        for (std::size_t l = 0; l < pts.size(); ++l) {
          const double d = space.dist(finer[i], pts[l]);
          if (d < nearest) {
            nearest = d;
            arg = l;
          }
        }
        maximality.observe((rk - nearest) / rk);
        if (!(nearest < rk)) maximality.fail("point " + std::to_string(finer[i]) + " at level " + std::to_string(k));
        parent_rule.observe(0.0);
        if (parent[i] != arg) parent_rule.fail("node " + node_name(k + 1, i));
        const double dp = space.dist(finer[i], pts[parent[i]]);
        parent_dist.observe((rk - dp) / rk);
        if (dp > rk) parent_dist.fail("node " + node_name(k + 1, i));
      }
    }
  }
  VerificationReport report;
  report.checks = {separation, maximality, nesting, parent_rule, parent_dist, ends};
  return report;
}

namespace {

struct NodeExtent {
  double farthest_member = 0.0;
  double nearest_outsider = std::numeric_limits<double>::infinity();
  std::size_t outsider = npos;
  std::size_t far_member = npos;
};

NodeExtent node_extent(const CubeTree& tree, const FiniteMetricSpace& space, int k, std::size_t i) {
  const auto assign = tree.assignment(k);
  const std::size_t center = tree.node(k, i).center;
  NodeExtent e;
  for (std::size_t p = 0; p < assign.size(); ++p) {
    const double d = space.dist(center, p);
    if (assign[p] == i) {
      if (d > e.farthest_member || e.far_member == npos) {
        e.farthest_member = std::max(e.farthest_member, d);
        e.far_member = p;
      }
    } else if (d < e.nearest_outsider) {
      e.nearest_outsider = d;
      e.outsider = p;
    }
  }
  return e;
}

}  // namespace

VerificationReport verify_tree_properties(const CubeTree& tree, const FiniteMetricSpace& space,
                                          Exec exec) {
  if (tree.point_count() != space.size()) {
    throw std::invalid_argument("tree and space have different point counts");
  }
  const auto [c, C] = sandwich_constants(tree.r());
  const std::size_t n = space.size();

  PropertyCheck partition{"(i) partition"};
  PropertyCheck nesting{"(ii) nesting"};
  PropertyCheck inner{"(iii) inner ball"};
  PropertyCheck outer{"(iii) outer ball"};
  PropertyCheck base{"(iv) base point ball"};
  PropertyCheck centers{"(v) center nesting"};

  for (int k = tree.k_min(); k <= tree.k_max(); ++k) {
    const auto& nodes = tree.level(k);
    const auto assign = tree.assignment(k);
    std::vector<std::size_t> seen(n, 0);
    std::size_t total = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto mem = tree.members(k, i);
      total += mem.size();
      if (mem.empty()) partition.fail("empty cube " + node_name(k, i));
      for (std::size_t p : mem) {
        ++seen[p];
        if (assign[p] != i) partition.fail("membership table mismatch at point " + std::to_string(p));
      }
    }
    partition.observe(0.0);
    if (total != n) partition.fail("level " + std::to_string(k) + " sizes sum to " + std::to_string(total));
    for (std::size_t p = 0; p < n; ++p) {
      if (seen[p] != 1) {
        partition.fail("point " + std::to_string(p) + " lies in " + std::to_string(seen[p]) +
                       " cubes of level " + std::to_string(k));
      }
    }

    if (k > tree.k_min()) {
      const auto above = tree.assignment(k - 1);
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        nesting.observe(0.0);
        for (std::size_t p : tree.members(k, i)) {
          if (above[p] != nodes[i].parent) {
            nesting.fail("cube " + node_name(k, i) + " not inside its parent at point " + std::to_string(p));
            break;
          }
        }
      }
    }

    if (k < tree.k_max()) {
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        centers.observe(0.0);
        const std::size_t cc = nodes[i].central_child;
        if (cc == npos || tree.node(k + 1, cc).center != nodes[i].center) {
          centers.fail("center of " + node_name(k, i) + " missing from level " + std::to_string(k + 1));
        }
      }
    }

    std::vector<NodeExtent> extents(nodes.size());
    const auto count = static_cast<std::int64_t>(nodes.size());
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
      for (std::int64_t i = 0; i < count; ++i) {
        extents[static_cast<std::size_t>(i)] = node_extent(tree, space, k, static_cast<std::size_t>(i));
      }
    } else {
      for (std::size_t i = 0; i < nodes.size(); ++i) extents[i] = node_extent(tree, space, k, i);
    }

    const double rk = scale_power(tree.r(), k);
    const double inner_radius = c * rk;
    const double outer_radius = C * rk;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& e = extents[i];
      outer.observe((outer_radius - e.farthest_member) / rk);
      if (e.farthest_member > outer_radius) {
        outer.fail("member " + std::to_string(e.far_member) + " of " + node_name(k, i) + " beyond C r^k");
      }
      if (e.outsider != npos) {
        inner.observe((e.nearest_outsider - inner_radius) / rk);
        if (e.nearest_outsider < inner_radius) {
          inner.fail("point " + std::to_string(e.outsider) + " within c r^k of " + node_name(k, i) +
                     " but outside it");
        }
      }
    }

    const std::size_t home = tree.cube_of(tree.base_point(), k);
    if (nodes[home].center != tree.base_point()) {
      base.fail("level " + std::to_string(k) + " cube of x_0 is not centred at x_0");
    }
    const auto& e = extents[home];
    if (e.outsider != npos) {
      base.observe((e.nearest_outsider - inner_radius) / rk);
      if (e.nearest_outsider < inner_radius) {
        base.fail("level " + std::to_string(k) + " open ball around x_0 leaves its cube");
      }
    }
  }

  VerificationReport report;
  report.checks = {partition, nesting, inner, outer, base, centers};
  return report;
}

int regrade_scales(double r_base, double r_tilde, int n) {
  if (!(r_base > 0.0 && r_base < 1.0 / 3.0)) throw std::invalid_argument("r_base must lie in (0, 1/3)");
  if (!(r_tilde >= 1.0 / 3.0 && r_tilde < 1.0)) throw std::invalid_argument("r_tilde must lie in [1/3, 1)");
  if (n < 0) throw std::invalid_argument("regraded level must be >= 0");
  const double value = std::pow(r_tilde, n);
  int k = static_cast<int>(std::floor(std::log(value) / std::log(r_base))) + 1;
  while (!(scale_power(r_base, k) < value)) ++k;
  while (!(value <= scale_power(r_base, k - 1))) --k;
  return k;
}

std::vector<int> regraded_levels(double r_base, double r_tilde, int count) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int n = 0; n < count; ++n) out.push_back(regrade_scales(r_base, r_tilde, n));
  return out;
}

}  // namespace netcube
