#include "netcube/net_hierarchy.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace netcube {

int finest_level(double r, double min_gap) {
  int k = static_cast<int>(std::ceil(std::log(min_gap) / std::log(r)));
  while (scale_power(r, k) > min_gap) ++k;
  while (scale_power(r, k - 1) <= min_gap) --k;
  return k;
}

int coarsest_level(double r, double diameter) {
  int k = static_cast<int>(std::floor(std::log(diameter) / std::log(r)));
  while (!(scale_power(r, k) > diameter)) --k;
  while (scale_power(r, k + 1) > diameter) ++k;
  return k;
}

NetHierarchy build_nets(const FiniteMetricSpace& space, double r, NetOptions options) {
  const double upper = options.allow_coarse_ratio ? 1.0 : 1.0 / 3.0;
  if (!(r > 0.0 && r < upper)) {
    throw std::invalid_argument("scale ratio r = " + std::to_string(r) +
                                " must lie in (0, 1/3); use regrade_scales for larger ratios");
  }
  const std::size_t n = space.size();
  if (n == 0) throw std::invalid_argument("cannot build nets on an empty space");
  if (n > 1 && !(space.min_gap() > 0.0)) {
    throw std::invalid_argument("space has coincident points (zero minimum gap)");
  }

  NetHierarchy nets;
  nets.r = r;
  nets.base_point = space.base_point();
  if (n == 1) {
    nets.k_min = nets.k_max = 0;
    nets.levels = {{space.base_point()}};
    return nets;
  }
  nets.k_max = finest_level(r, space.min_gap());
  nets.k_min = coarsest_level(r, space.diameter());
  nets.levels.resize(static_cast<std::size_t>(nets.k_max - nets.k_min + 1));

  auto& finest = nets.levels.back();
  finest.reserve(n);
  finest.push_back(space.base_point());
  for (std::size_t p = 0; p < n; ++p) {
    if (p != space.base_point()) finest.push_back(p);
  }

  for (int k = nets.k_max - 1; k >= nets.k_min; --k) {
    const auto& finer = nets.levels[static_cast<std::size_t>(k + 1 - nets.k_min)];
    auto& kept = nets.levels[static_cast<std::size_t>(k - nets.k_min)];
    const double sep = scale_power(r, k);
    for (std::size_t p : finer) {
      bool separated = true;
      for (std::size_t q : kept) {
        if (space.dist(p, q) < sep) {
          separated = false;
          break;
        }
      }
      if (separated) kept.push_back(p);
    }
  }
  return nets;
}

namespace {

std::size_t nearest_in(const FiniteMetricSpace& space, std::size_t p,
                       const std::vector<std::size_t>& coarse) {
  std::size_t best = 0;
  double best_d = space.dist(p, coarse[0]);
  for (std::size_t l = 1; l < coarse.size(); ++l) {
    const double d = space.dist(p, coarse[l]);
    if (d < best_d) {
      best_d = d;
      best = l;
    }
  }
  return best;
}

}  // namespace

ParentMap assign_parents(const FiniteMetricSpace& space, const NetHierarchy& nets, Exec exec) {
  const std::size_t levels = nets.level_count();
  ParentMap map;
  map.parent.resize(levels);
  map.central_child.resize(levels);

  std::vector<std::size_t> position(space.size(), npos);
  for (std::size_t li = 1; li < levels; ++li) {
    const auto& fine = nets.levels[li];
    const auto& coarse = nets.levels[li - 1];
    auto& parent = map.parent[li];
    parent.assign(fine.size(), npos);

    const auto count = static_cast<std::int64_t>(fine.size());
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
      for (std::int64_t i = 0; i < count; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        parent[ii] = nearest_in(space, fine[ii], coarse);
      }
    } else {
      for (std::size_t i = 0; i < fine.size(); ++i) parent[i] = nearest_in(space, fine[i], coarse);
    }

    for (std::size_t i = 0; i < fine.size(); ++i) position[fine[i]] = i;
    auto& central = map.central_child[li - 1];
    central.resize(coarse.size());
    for (std::size_t j = 0; j < coarse.size(); ++j) {
      const std::size_t i = position[coarse[j]];
      if (i == npos || parent[i] != j) {
        throw std::logic_error("net level " + std::to_string(nets.k_min + static_cast<int>(li) - 1) +
                               " is not nested in the next finer level");
      }
      central[j] = i;
    }
    for (std::size_t p : fine) position[p] = npos;
  }
  return map;
}

}  // namespace netcube
