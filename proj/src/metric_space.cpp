#include "netcube/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace netcube {

namespace {

struct Extent {
  double diameter = 0.0;
  double min_gap = std::numeric_limits<double>::infinity();
};

template <class Dist>
Extent pairwise_extent_serial(std::size_t n, const Dist& dist) {
  Extent e;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = dist(i, j);
      e.diameter = std::max(e.diameter, d);
      if (d > 0.0) e.min_gap = std::min(e.min_gap, d);
    }
  }
  return e;
}

template <class Dist>
Extent pairwise_extent_parallel(std::size_t n, const Dist& dist) {
  double diameter = 0.0;
  double min_gap = std::numeric_limits<double>::infinity();
  const auto rows = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 16) reduction(max : diameter) reduction(min : min_gap)
  for (std::int64_t ii = 0; ii < rows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = dist(i, j);
      diameter = std::max(diameter, d);
      if (d > 0.0) min_gap = std::min(min_gap, d);
    }
  }
  return {diameter, min_gap};
}

}  // namespace

FiniteMetricSpace FiniteMetricSpace::from_matrix(std::vector<double> matrix, std::size_t n,
                                                 Exec exec) {
  if (n == 0) throw std::invalid_argument("metric space must contain at least one point");
  if (n > kDenseLimit) {
    throw std::invalid_argument("dense distance matrix limited to " + std::to_string(kDenseLimit) +
                                " points, got " + std::to_string(n));
  }
  if (matrix.size() != n * n) {
    throw std::invalid_argument("distance matrix has " + std::to_string(matrix.size()) +
                                " entries, expected " + std::to_string(n * n));
  }
  FiniteMetricSpace s;
  s.n_ = n;
  s.backing_ = Backing::dense;
  s.matrix_ = std::move(matrix);
  s.compute_extent(exec);
  return s;
}

FiniteMetricSpace FiniteMetricSpace::from_coordinates(std::vector<double> coords, std::size_t dim,
                                                      double lp, Exec exec) {
  if (dim == 0) throw std::invalid_argument("coordinate dimension must be positive");
  if (coords.empty() || coords.size() % dim != 0) {
    throw std::invalid_argument("coordinate array is empty or not a multiple of the dimension");
  }
  if (!(lp >= 1.0)) throw std::invalid_argument("l^p exponent must be >= 1");
  for (double v : coords) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite coordinate");
  }
  FiniteMetricSpace s;
  s.n_ = coords.size() / dim;
  s.backing_ = Backing::coordinates;
  s.coords_ = std::move(coords);
  s.dim_ = dim;
  s.lp_ = lp;
  s.compute_extent(exec);
  return s;
}

FiniteMetricSpace FiniteMetricSpace::tree_ultrametric(std::size_t arity, std::size_t depth,
                                                      double ratio, Exec exec) {
  if (arity < 2) throw std::invalid_argument("ultrametric arity must be at least 2");
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("ultrametric ratio must lie in (0, 1)");
  std::size_t n = 1;
  for (std::size_t h = 0; h < depth; ++h) {
    if (n > std::numeric_limits<std::uint32_t>::max() / arity) {
      throw std::invalid_argument("ultrametric leaf count overflows");
    }
    n *= arity;
  }
  FiniteMetricSpace s;
  s.n_ = n;
  s.backing_ = Backing::tree_ultrametric;
  s.arity_ = arity;
  s.depth_ = depth;
  s.ratio_ = ratio;
  s.compute_extent(exec);
  return s;
}

FiniteMetricSpace FiniteMetricSpace::snowflake(double eps, Exec exec) const {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("snowflake exponent must lie in (0, 1]");
  FiniteMetricSpace s = *this;
  s.eps_ = eps_ * eps;
  s.compute_extent(exec);
  return s;
}

FiniteMetricSpace FiniteMetricSpace::with_labels(std::vector<std::string> labels) const {
  if (!labels.empty() && labels.size() != n_) {
    throw std::invalid_argument("label count does not match point count");
  }
  FiniteMetricSpace s = *this;
  s.labels_ = std::move(labels);
  return s;
}

FiniteMetricSpace FiniteMetricSpace::with_base_point(std::size_t x0) const {
  if (x0 >= n_) throw std::out_of_range("base point index out of range");
  FiniteMetricSpace s = *this;
  s.base_point_ = x0;
  return s;
}

double FiniteMetricSpace::raw_dist(std::size_t i, std::size_t j) const {
  switch (backing_) {
    case Backing::dense:
      return matrix_[i * n_ + j];
    case Backing::coordinates: {
      const double* a = coords_.data() + i * dim_;
      const double* b = coords_.data() + j * dim_;
      if (lp_ == 2.0) {
        double s = 0.0;
        for (std::size_t c = 0; c < dim_; ++c) s += (a[c] - b[c]) * (a[c] - b[c]);
        return std::sqrt(s);
      }
      if (lp_ == 1.0) {
        double s = 0.0;
        for (std::size_t c = 0; c < dim_; ++c) s += std::abs(a[c] - b[c]);
        return s;
      }
      if (std::isinf(lp_)) {
        double s = 0.0;
        for (std::size_t c = 0; c < dim_; ++c) s = std::max(s, std::abs(a[c] - b[c]));
        return s;
      }
      double s = 0.0;
      for (std::size_t c = 0; c < dim_; ++c) s += std::pow(std::abs(a[c] - b[c]), lp_);
      return std::pow(s, 1.0 / lp_);
    }
    case Backing::tree_ultrametric: {
      if (i == j) return 0.0;
      // Leaf index digits, most significant first, are the root-to-leaf path.
      std::size_t a = i, b = j, place = 1;
      for (std::size_t h = 1; h < depth_; ++h) place *= arity_;
      std::size_t common = 0;
      while (place > 0 && a / place == b / place) {
        a %= place;
        b %= place;
        place /= arity_;
        ++common;
      }
      return std::pow(ratio_, static_cast<double>(common));
    }
  }
  return 0.0;
}

void FiniteMetricSpace::compute_extent(Exec exec) {
  auto d = [this](std::size_t i, std::size_t j) { return dist(i, j); };
  const Extent e = exec == Exec::parallel ? pairwise_extent_parallel(n_, d)
                                          : pairwise_extent_serial(n_, d);
  diameter_ = e.diameter;
  min_gap_ = std::isinf(e.min_gap) ? diameter_ : e.min_gap;
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::nonzero_diagonal: return "nonzero_diagonal";
    case ViolationKind::negative: return "negative";
    case ViolationKind::zero_off_diagonal: return "zero_off_diagonal";
    case ViolationKind::asymmetry: return "asymmetry";
    case ViolationKind::triangle: return "triangle";
  }
  return "unknown";
}

namespace {

void pair_violations(const FiniteMetricSpace& space, double tol, std::vector<Violation>& out) {
  const std::size_t n = space.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double dii = space.dist(i, i);
    if (dii != 0.0) out.push_back({ViolationKind::nonzero_diagonal, i, i, i, std::abs(dii)});
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = space.dist(i, j);
      const double b = space.dist(j, i);
      if (a < 0.0 || b < 0.0) {
        out.push_back({ViolationKind::negative, i, j, j, -std::min(a, b)});
      } else if (a == 0.0 || b == 0.0) {
        out.push_back({ViolationKind::zero_off_diagonal, i, j, j, 0.0});
      }
      if (std::abs(a - b) > tol) out.push_back({ViolationKind::asymmetry, i, j, j, std::abs(a - b)});
    }
  }
}

// Triangle violations with first index i, in (k, j) order.
void triangle_row(const FiniteMetricSpace& space, std::size_t i, double tol,
                  std::vector<Violation>& out) {
  const std::size_t n = space.size();
  for (std::size_t k = i + 1; k < n; ++k) {
    const double dik = space.dist(i, k);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || j == k) continue;
      const double excess = dik - (space.dist(i, j) + space.dist(j, k));
      if (excess > tol) out.push_back({ViolationKind::triangle, i, j, k, excess});
    }
  }
}

}  // namespace

ValidationReport validate_metric(const FiniteMetricSpace& space, double tol, Exec exec) {
  if (!(tol >= 0.0)) throw std::invalid_argument("validation tolerance must be >= 0");
  ValidationReport report;
  pair_violations(space, tol, report.violations);

  const std::size_t n = space.size();
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) triangle_row(space, i, tol, report.violations);
    return report;
  }

  std::vector<std::vector<Violation>> rows(n);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < count; ++i) {
    triangle_row(space, static_cast<std::size_t>(i), tol, rows[static_cast<std::size_t>(i)]);
  }
  for (auto& row : rows) {
    report.violations.insert(report.violations.end(), row.begin(), row.end());
  }
  return report;
}

std::vector<std::size_t> ball(const FiniteMetricSpace& space, std::size_t x, double t,
                              BallKind kind) {
  if (x >= space.size()) throw std::out_of_range("ball centre index out of range");
  if (!(t >= 0.0)) throw std::invalid_argument("ball radius must be >= 0");
  std::vector<std::size_t> out;
  for (std::size_t y = 0; y < space.size(); ++y) {
    const double d = space.dist(x, y);
    if (kind == BallKind::closed ? d <= t : d < t) out.push_back(y);
  }
  return out;
}

std::size_t covering_number(const FiniteMetricSpace& space, std::size_t x, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("covering radius must be > 0");
  const std::vector<std::size_t> big = ball(space, x, 2.0 * t, BallKind::closed);
  std::vector<char> covered(big.size(), 0);
  std::size_t centres = 0;
  for (std::size_t a = 0; a < big.size(); ++a) {
    if (covered[a]) continue;
    ++centres;
    for (std::size_t b = a; b < big.size(); ++b) {
      if (!covered[b] && space.dist(big[a], big[b]) <= t) covered[b] = 1;
    }
  }
  return centres;
}

}  // namespace netcube
