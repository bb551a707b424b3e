#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netcube/cube_tree.hpp"
#include "netcube/report.hpp"

namespace netcube {

// M_{k,i} = (number of children of Q_{k,i}) - 1. Leaves at k_max continue
// below as single-child chains, so their count is 0.
struct ChildCounts {
  std::vector<std::vector<std::size_t>> per_node;  // [k - k_min][i]
  std::size_t max = 0;

  std::size_t at(const CubeTree& tree, int k, std::size_t i) const {
    return per_node.at(static_cast<std::size_t>(k - tree.k_min())).at(i);
  }
};

ChildCounts child_counts(const CubeTree& tree);

enum class MeasureKind { doubling, alpha_homogeneous, self_similar };

const char* to_string(MeasureKind kind);

// Mass of every cube, with the root normalised to 1, and the induced point
// masses (the mass of each point's leaf). On a finite space the mass of a
// cube is both the cylinder weight and the measure of the cube.
struct MeasureAssignment {
  MeasureKind kind = MeasureKind::doubling;
  double p = 0.0;
  std::optional<double> beta;
  std::vector<double> weights;
  std::size_t M_max = 0;
  int k_min = 0;
  std::vector<std::vector<double>> node_mass;  // [k - k_min][i]
  std::vector<std::vector<double>> log_mass;   // natural log of node_mass
  std::vector<double> point_mass;
  std::vector<std::string> warnings;

  double mass(int k, std::size_t i) const {
    return node_mass.at(static_cast<std::size_t>(k - k_min)).at(i);
  }
  double total_mass(std::span<const std::size_t> points) const;
};

// Splits each cube's mass among its children: p to every non-central child
// and 1 - M_{k,i} p to the central one. Requires 0 < p <= 1/(M_max + 1).
MeasureAssignment build_doubling_measure(const CubeTree& tree, double p);

// The same recursion with p = r^beta; beta must be at least
// log(M_max + 1) / log(1/r).
MeasureAssignment build_alpha_homogeneous(const CubeTree& tree, double beta);
double min_admissible_beta(const CubeTree& tree);

// Two-level split from every even-depth cube (depth counted from the root):
// the first weights.size() children by index are selected, every grandchild
// not centred at a selected child's center receives p times the cube mass,
// and the remainder goes to the selected children's central grandchildren
// in proportion to `weights`. Throws unless p times the number of such
// grandchildren stays below 1 in every split.
MeasureAssignment build_self_similar(const CubeTree& tree, double p, const std::vector<double>& weights);

// Root mass, conservation, positivity, point mass total and (for the
// standard recursion) the sibling ratio quantisation, all at relative
// tolerance `tol`.
VerificationReport check_measure(const CubeTree& tree, const MeasureAssignment& measure,
                                 double tol = 1e-12);

}  // namespace netcube
