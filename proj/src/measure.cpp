#include "netcube/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace netcube {

ChildCounts child_counts(const CubeTree& tree) {
  ChildCounts counts;
  counts.per_node.resize(tree.level_count());
  for (int k = tree.k_min(); k <= tree.k_max(); ++k) {
    auto& row = counts.per_node[static_cast<std::size_t>(k - tree.k_min())];
    for (const CubeNode& node : tree.level(k)) {
      const std::size_t m = node.children.empty() ? 0 : node.children.size() - 1;
      row.push_back(m);
      counts.max = std::max(counts.max, m);
    }
  }
  return counts;
}

const char* to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::doubling: return "doubling";
    case MeasureKind::alpha_homogeneous: return "alpha_homogeneous";
    case MeasureKind::self_similar: return "self_similar";
  }
  return "unknown";
}

double MeasureAssignment::total_mass(std::span<const std::size_t> points) const {
  double s = 0.0;
  for (std::size_t p : points) s += point_mass.at(p);
  return s;
}

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

MeasureAssignment empty_assignment(const CubeTree& tree) {
  MeasureAssignment m;
  m.k_min = tree.k_min();
  m.node_mass.resize(tree.level_count());
  m.log_mass.resize(tree.level_count());
  for (int k = tree.k_min(); k <= tree.k_max(); ++k) {
    const auto s = static_cast<std::size_t>(k - tree.k_min());
    m.node_mass[s].assign(tree.level_size(k), 0.0);
    m.log_mass[s].assign(tree.level_size(k), 0.0);
  }
  return m;
}

void fill_point_masses(const CubeTree& tree, MeasureAssignment& m) {
  const auto leaves = tree.assignment(tree.k_max());
  m.point_mass.resize(tree.point_count());
  for (std::size_t p = 0; p < leaves.size(); ++p) m.point_mass[p] = m.node_mass.back()[leaves[p]];
}

MeasureAssignment split_recursively(const CubeTree& tree, double p, const ChildCounts& counts) {
  MeasureAssignment m = empty_assignment(tree);
  m.p = p;
  m.M_max = counts.max;
  m.node_mass[0][0] = 1.0;
  m.log_mass[0][0] = 0.0;
  const double log_p = std::log(p);
  for (int k = tree.k_min(); k < tree.k_max(); ++k) {
    const auto s = static_cast<std::size_t>(k - tree.k_min());
    const auto& nodes = tree.level(k);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double parent = m.node_mass[s][i];
      const double log_parent = m.log_mass[s][i];
      const double central = 1.0 - static_cast<double>(counts.per_node[s][i]) * p;
      for (std::size_t child : nodes[i].children) {
        const bool is_central = child == nodes[i].central_child;
        m.node_mass[s + 1][child] = (is_central ? central : p) * parent;
        m.log_mass[s + 1][child] = log_parent + (is_central ? std::log(central) : log_p);
      }
    }
  }
  fill_point_masses(tree, m);
  if (tree.r() > 1.0 / 7.0) {
    m.warnings.push_back("r = " + fmt_double(tree.r()) +
                         " exceeds 1/7; the p^-4 cube comparability bound is not guaranteed");
  }
  return m;
}

}  // namespace

MeasureAssignment build_doubling_measure(const CubeTree& tree, double p) {
  const ChildCounts counts = child_counts(tree);
  const double bound = 1.0 / static_cast<double>(counts.max + 1);
  if (!(p > 0.0 && p <= bound)) {
    throw std::invalid_argument("p = " + fmt_double(p) + " must lie in (0, 1/(M_max+1)] = (0, " +
                                fmt_double(bound) + "] with M_max = " + std::to_string(counts.max));
  }
  MeasureAssignment m = split_recursively(tree, p, counts);
  m.kind = MeasureKind::doubling;
  return m;
}

double min_admissible_beta(const CubeTree& tree) {
  const ChildCounts counts = child_counts(tree);
  return std::log(static_cast<double>(counts.max + 1)) / std::log(1.0 / tree.r());
}

MeasureAssignment build_alpha_homogeneous(const CubeTree& tree, double beta) {
  const ChildCounts counts = child_counts(tree);
  const double beta_min = std::log(static_cast<double>(counts.max + 1)) / std::log(1.0 / tree.r());
  // Relative slack absorbs the rounding in r^beta at the boundary beta_min.
  if (!(beta >= beta_min * (1.0 - 1e-12))) {
    throw std::invalid_argument("beta = " + fmt_double(beta) + " is below the minimal admissible beta " +
                                fmt_double(beta_min) + " = log(M_max+1)/log(1/r)");
  }
  const double p = std::min(std::pow(tree.r(), beta), 1.0 / static_cast<double>(counts.max + 1));
  MeasureAssignment m = split_recursively(tree, p, counts);
  m.kind = MeasureKind::alpha_homogeneous;
  m.beta = beta;
  return m;
}

MeasureAssignment build_self_similar(const CubeTree& tree, double p, const std::vector<double>& weights) {
  if (weights.empty()) throw std::invalid_argument("self-similar split needs at least one weight");
  double wsum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw std::invalid_argument("self-similar weights must be positive");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-12) throw std::invalid_argument("self-similar weights must sum to 1");

  const ChildCounts counts = child_counts(tree);
  if (counts.max > 0) {
    const double bound = 1.0 / static_cast<double>(counts.max * counts.max);
    if (!(p > 0.0 && p < bound)) {
      throw std::invalid_argument("p = " + fmt_double(p) + " must lie in (0, M_max^-2) = (0, " +
                                  fmt_double(bound) + ")");
    }
  } else if (!(p > 0.0)) {
    throw std::invalid_argument("p must be positive");
  }

  const std::size_t n_sel = weights.size();
  MeasureAssignment m = empty_assignment(tree);
  m.kind = MeasureKind::self_similar;
  m.p = p;
  m.weights = weights;
  m.M_max = counts.max;
  m.node_mass[0][0] = 1.0;

  for (int k = tree.k_min(); k < tree.k_max(); k += 2) {
    const auto s = static_cast<std::size_t>(k - tree.k_min());
    const bool children_are_leaves = k + 1 == tree.k_max();
    const auto& nodes = tree.level(k);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const CubeNode& node = nodes[i];
      const double mass = m.node_mass[s][i];
      if (node.children.size() < n_sel) {
        throw std::invalid_argument("cube (" + std::to_string(k) + "," + std::to_string(i) + ") has " +
                                    std::to_string(node.children.size()) + " children, fewer than " +
                                    std::to_string(n_sel) + " weights");
      }
      std::unordered_set<std::size_t> selected_centers;
      for (std::size_t m_idx = 0; m_idx < n_sel; ++m_idx) {
        selected_centers.insert(tree.node(k + 1, node.children[m_idx]).center);
      }

      if (children_are_leaves) {
        // Below k_max every cube continues as its own single descendant.
        const double remainder = mass * (1.0 - p * static_cast<double>(node.children.size() - n_sel));
        if (!(remainder > 0.0)) throw std::invalid_argument("p too large: no mass left for central subcubes");
        for (std::size_t c = 0; c < node.children.size(); ++c) {
          m.node_mass[s + 1][node.children[c]] = c < n_sel ? weights[c] * remainder : p * mass;
        }
        continue;
      }

      std::size_t outer = 0;
      for (std::size_t child : node.children) {
        for (std::size_t g : tree.node(k + 1, child).children) {
          if (!selected_centers.count(tree.node(k + 2, g).center)) ++outer;
        }
      }
      const double remainder = mass * (1.0 - p * static_cast<double>(outer));
      if (!(remainder > 0.0)) throw std::invalid_argument("p too large: no mass left for central subcubes");

      for (std::size_t c = 0; c < node.children.size(); ++c) {
        const CubeNode& child = tree.node(k + 1, node.children[c]);
        double child_mass = 0.0;
        for (std::size_t g : child.children) {
          double gm = p * mass;
          if (c < n_sel && g == child.central_child) gm = weights[c] * remainder;
          m.node_mass[s + 2][g] = gm;
          child_mass += gm;
        }
        m.node_mass[s + 1][child.i] = child_mass;
      }
    }
  }

  for (std::size_t s = 0; s < m.node_mass.size(); ++s) {
    for (std::size_t i = 0; i < m.node_mass[s].size(); ++i) m.log_mass[s][i] = std::log(m.node_mass[s][i]);
  }
  fill_point_masses(tree, m);
  return m;
}

VerificationReport check_measure(const CubeTree& tree, const MeasureAssignment& measure, double tol) {
  PropertyCheck root{"root_mass"};
  PropertyCheck conservation{"conservation"};
  PropertyCheck positivity{"positivity"};
  PropertyCheck points{"point_mass_total"};
  PropertyCheck quantization{"sibling_ratio_quantization"};

  if (measure.node_mass.size() != tree.level_count() || measure.point_mass.size() != tree.point_count()) {
    throw std::invalid_argument("measure does not match the tree");
  }

  const double root_err = std::abs(measure.mass(tree.k_min(), 0) - 1.0);
  root.observe(-root_err);
  if (root_err > tol) root.fail("root mass " + fmt_double(measure.mass(tree.k_min(), 0)));

  const ChildCounts counts = child_counts(tree);
  for (int k = tree.k_min(); k <= tree.k_max(); ++k) {
    const auto& nodes = tree.level(k);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double mass = measure.mass(k, i);
      positivity.observe(mass);
      if (!(mass > 0.0)) positivity.fail("cube (" + std::to_string(k) + "," + std::to_string(i) + ")");
      if (nodes[i].children.empty()) continue;

      double sum = 0.0;
      for (std::size_t c : nodes[i].children) sum += measure.mass(k + 1, c);
      const double rel = std::abs(sum - mass) / mass;
      conservation.observe(-rel);
      if (rel > tol) conservation.fail("cube (" + std::to_string(k) + "," + std::to_string(i) + ") relative error " + fmt_double(rel));

      if (measure.kind == MeasureKind::self_similar || nodes[i].children.size() < 2) continue;
      const double p = measure.p;
      const double central = 1.0 - static_cast<double>(counts.at(tree, k, i)) * p;
      const double allowed[] = {1.0, p / central, central / p};
      const auto& ch = nodes[i].children;
      for (std::size_t a = 0; a < ch.size(); ++a) {
        for (std::size_t b = a + 1; b < ch.size(); ++b) {
          const double ratio = measure.mass(k + 1, ch[a]) / measure.mass(k + 1, ch[b]);
          double best = std::numeric_limits<double>::infinity();
          for (double q : allowed) best = std::min(best, std::abs(ratio - q) / q);
          quantization.observe(-best);
          if (best > tol) {
            quantization.fail("siblings " + std::to_string(ch[a]) + "," + std::to_string(ch[b]) +
                              " of (" + std::to_string(k) + "," + std::to_string(i) + ") ratio " + fmt_double(ratio));
          }
        }
      }
    }
  }

  // Neumaier summation keeps the total independent of the point count.
  double sum = 0.0, comp = 0.0;
  for (double v : measure.point_mass) {
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  const double err = std::abs(sum + comp - 1.0);
  points.observe(-err);
  if (err > tol) points.fail("point masses sum to " + fmt_double(sum + comp));

  VerificationReport report;
  report.checks = {root, conservation, positivity, points};
  if (measure.kind != MeasureKind::self_similar) report.checks.push_back(quantization);
  return report;
}

}  // namespace netcube
