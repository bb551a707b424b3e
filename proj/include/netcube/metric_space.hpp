#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "netcube/exec.hpp"

namespace netcube {

// Largest point count stored as a dense distance matrix.
inline constexpr std::size_t kDenseLimit = 8192;

// A finite metric space (X, d) with a distinguished base point x_0.
//
// Distances come either from a stored dense matrix or from a closed form
// evaluated on demand (coordinates under an l^p norm, or the leaf ultrametric
// of a complete m-ary tree). Any of these may additionally be snowflaked,
// d -> d^eps. The object is immutable after construction.
class FiniteMetricSpace {
 public:
  enum class Backing { dense, coordinates, tree_ultrametric };

  // Row-major n x n matrix. Axioms are not enforced here; see validate_metric.
  static FiniteMetricSpace from_matrix(std::vector<double> matrix, std::size_t n,
                                       Exec exec = Exec::parallel);

  // n points of dimension `dim`, stored row-major, under the l^p norm
  // (p >= 1, or infinity for the max norm).
  static FiniteMetricSpace from_coordinates(std::vector<double> coords, std::size_t dim,
                                            double lp = 2.0, Exec exec = Exec::parallel);

  // Leaves of the complete `arity`-ary tree of height `depth`, with
  // d(u, v) = ratio^(depth of deepest common ancestor), root depth 0.
  static FiniteMetricSpace tree_ultrametric(std::size_t arity, std::size_t depth, double ratio,
                                            Exec exec = Exec::parallel);

  // Same points with every distance raised to eps in (0, 1].
  FiniteMetricSpace snowflake(double eps, Exec exec = Exec::parallel) const;

  FiniteMetricSpace with_labels(std::vector<std::string> labels) const;
  FiniteMetricSpace with_base_point(std::size_t x0) const;

  std::size_t size() const { return n_; }
  std::size_t base_point() const { return base_point_; }
  double diameter() const { return diameter_; }
  // Smallest positive pairwise distance; equals the diameter (0) when n = 1.
  double min_gap() const { return min_gap_; }
  Backing backing() const { return backing_; }
  double snowflake_exponent() const { return eps_; }
  const std::vector<std::string>& labels() const { return labels_; }

  double dist(std::size_t i, std::size_t j) const {
    const double d = raw_dist(i, j);
    return eps_ == 1.0 ? d : std::pow(d, eps_);
  }

 private:
  FiniteMetricSpace() = default;
  double raw_dist(std::size_t i, std::size_t j) const;
  void compute_extent(Exec exec);

  std::size_t n_ = 0;
  std::size_t base_point_ = 0;
  Backing backing_ = Backing::dense;
  double eps_ = 1.0;

  std::vector<double> matrix_;

  std::vector<double> coords_;
  std::size_t dim_ = 0;
  double lp_ = 2.0;

  std::size_t arity_ = 0;
  std::size_t depth_ = 0;
  double ratio_ = 0.0;

  double diameter_ = 0.0;
  double min_gap_ = 0.0;
  std::vector<std::string> labels_;
};

enum class ViolationKind { nonzero_diagonal, negative, zero_off_diagonal, asymmetry, triangle };

const char* to_string(ViolationKind kind);

// For triangle violations d(i, k) > d(i, j) + d(j, k) + tol, with i < k.
// Pair-level violations leave k unused (== j).
struct Violation {
  ViolationKind kind;
  std::size_t i;
  std::size_t j;
  std::size_t k;
  double excess;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
};

// Exhaustive O(n^3) axiom scan. Violations are listed in (i, k, j) order.
ValidationReport validate_metric(const FiniteMetricSpace& space, double tol,
                                 Exec exec = Exec::parallel);

enum class BallKind { open, closed };

// Indices y with d(x, y) <= t (closed) or d(x, y) < t (open), ascending.
std::vector<std::size_t> ball(const FiniteMetricSpace& space, std::size_t x, double t,
                              BallKind kind = BallKind::closed);

// Size of a greedy cover of the closed ball B(x, 2t) by closed t-balls
// centred at its own points (first uncovered point in index order becomes
// the next centre). Upper bound on the minimal cover.
std::size_t covering_number(const FiniteMetricSpace& space, std::size_t x, double t);

}  // namespace netcube
