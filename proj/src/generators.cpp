#include "netcube/generators.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "netcube/rng.hpp"

namespace netcube {

GeneratorSpec GeneratorSpec::grid1d(std::size_t n, double spacing) {
  GeneratorSpec s;
  s.kind = Kind::grid1d;
  s.n = n;
  s.spacing = spacing;
  return s;
}

GeneratorSpec GeneratorSpec::grid2d(std::size_t width, std::size_t height, double spacing) {
  GeneratorSpec s;
  s.kind = Kind::grid2d;
  s.width = width;
  s.height = height;
  s.spacing = spacing;
  return s;
}

GeneratorSpec GeneratorSpec::euclidean_random(std::size_t n, std::size_t dim, std::uint64_t seed) {
  GeneratorSpec s;
  s.kind = Kind::euclidean_random;
  s.n = n;
  s.dim = dim;
  s.seed = seed;
  return s;
}

GeneratorSpec GeneratorSpec::cantor(std::size_t depth, double ratio) {
  GeneratorSpec s;
  s.kind = Kind::cantor_ultrametric;
  s.depth = depth;
  s.ratio = ratio;
  return s;
}

GeneratorSpec GeneratorSpec::mary(std::size_t arity, std::size_t depth, double ratio) {
  GeneratorSpec s;
  s.kind = Kind::mary_ultrametric;
  s.arity = arity;
  s.depth = depth;
  s.ratio = ratio;
  return s;
}

GeneratorSpec GeneratorSpec::snowflaked(GeneratorSpec base, double epsilon) {
  GeneratorSpec s;
  s.kind = Kind::snowflake;
  s.epsilon = epsilon;
  s.seed = base.seed;
  s.max_points = base.max_points;
  s.base = std::make_shared<const GeneratorSpec>(std::move(base));
  return s;
}

const char* to_string(GeneratorSpec::Kind kind) {
  switch (kind) {
    case GeneratorSpec::Kind::grid1d: return "grid1d";
    case GeneratorSpec::Kind::grid2d: return "grid2d";
    case GeneratorSpec::Kind::euclidean_random: return "euclidean_random";
    case GeneratorSpec::Kind::cantor_ultrametric: return "cantor_ultrametric";
    case GeneratorSpec::Kind::mary_ultrametric: return "mary_ultrametric";
    case GeneratorSpec::Kind::snowflake: return "snowflake";
  }
  return "unknown";
}

GeneratorSpec::Kind generator_kind_from_string(const std::string& name) {
  using K = GeneratorSpec::Kind;
  for (K k : {K::grid1d, K::grid2d, K::euclidean_random, K::cantor_ultrametric,
              K::mary_ultrametric, K::snowflake}) {
    if (name == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown generator kind '" + name + "'");
}

std::string GeneratorSpec::describe() const {
  std::ostringstream os;
  os << to_string(kind) << '(';
  switch (kind) {
    case Kind::grid1d: os << "n=" << n << ",spacing=" << spacing; break;
    case Kind::grid2d: os << width << 'x' << height << ",spacing=" << spacing; break;
    case Kind::euclidean_random: os << "n=" << n << ",dim=" << dim << ",seed=" << seed; break;
    case Kind::cantor_ultrametric: os << "depth=" << depth << ",ratio=" << ratio; break;
    case Kind::mary_ultrametric: os << "m=" << arity << ",h=" << depth << ",ratio=" << ratio; break;
    case Kind::snowflake: os << "eps=" << epsilon << ',' << (base ? base->describe() : "?"); break;
  }
  os << ')';
  return os.str();
}

namespace {

void check_cap(std::size_t count, const GeneratorSpec& spec) {
  if (count == 0) throw std::invalid_argument("generator produces an empty space");
  if (count > spec.max_points) {
    throw std::invalid_argument("generator would produce " + std::to_string(count) +
                                " points, above the cap of " + std::to_string(spec.max_points));
  }
}

std::size_t checked_power(std::size_t base, std::size_t exp, const GeneratorSpec& spec) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (n > spec.max_points) break;
    n *= base;
  }
  return n;
}

}  // namespace

FiniteMetricSpace generate(const GeneratorSpec& spec) {
  using K = GeneratorSpec::Kind;
  switch (spec.kind) {
    case K::grid1d: {
      check_cap(spec.n, spec);
      if (!(spec.spacing > 0.0)) throw std::invalid_argument("grid spacing must be positive");
      std::vector<double> xs(spec.n);
      for (std::size_t i = 0; i < spec.n; ++i) xs[i] = spec.spacing * static_cast<double>(i);
      return FiniteMetricSpace::from_coordinates(std::move(xs), 1);
    }
    case K::grid2d: {
      check_cap(spec.width * spec.height, spec);
      if (!(spec.spacing > 0.0)) throw std::invalid_argument("grid spacing must be positive");
      std::vector<double> xy;
      xy.reserve(2 * spec.width * spec.height);
      for (std::size_t row = 0; row < spec.height; ++row) {
        for (std::size_t col = 0; col < spec.width; ++col) {
          xy.push_back(spec.spacing * static_cast<double>(col));
          xy.push_back(spec.spacing * static_cast<double>(row));
        }
      }
      return FiniteMetricSpace::from_coordinates(std::move(xy), 2);
    }
    case K::euclidean_random: {
      check_cap(spec.n, spec);
      if (spec.dim == 0) throw std::invalid_argument("dimension must be positive");
      Rng rng(spec.seed);
      std::vector<double> xs(spec.n * spec.dim);
      for (double& v : xs) v = rng.uniform();
      auto space = FiniteMetricSpace::from_coordinates(std::move(xs), spec.dim);
      if (space.size() > 1 && !(space.min_gap() > 0.0)) {
        throw std::invalid_argument("random cloud contains coincident points");
      }
      return space;
    }
    case K::cantor_ultrametric: {
      if (!(spec.ratio > 0.0 && spec.ratio < 0.5)) {
        throw std::invalid_argument("Cantor contraction ratio must lie in (0, 1/2)");
      }
      const std::size_t n = checked_power(2, spec.depth, spec);
      check_cap(n, spec);
      // Digit b at level h (most significant first) shifts by b * (1 - ratio) * ratio^h.
      std::vector<double> xs(n, 0.0);
      for (std::size_t leaf = 0; leaf < n; ++leaf) {
        double x = 0.0, scale = 1.0;
        for (std::size_t h = 0; h < spec.depth; ++h) {
          const std::size_t bit = (leaf >> (spec.depth - 1 - h)) & 1u;
          if (bit) x += (1.0 - spec.ratio) * scale;
          scale *= spec.ratio;
        }
        xs[leaf] = x;
      }
      return FiniteMetricSpace::from_coordinates(std::move(xs), 1);
    }
    case K::mary_ultrametric: {
      if (spec.arity < 2) throw std::invalid_argument("arity must be at least 2");
      if (!(spec.ratio > 0.0 && spec.ratio < 1.0)) {
        throw std::invalid_argument("ultrametric ratio must lie in (0, 1)");
      }
      check_cap(checked_power(spec.arity, spec.depth, spec), spec);
      return FiniteMetricSpace::tree_ultrametric(spec.arity, spec.depth, spec.ratio);
    }
    case K::snowflake: {
      if (!spec.base) throw std::invalid_argument("snowflake generator needs a base spec");
      if (!(spec.epsilon > 0.0 && spec.epsilon <= 1.0)) {
        throw std::invalid_argument("snowflake exponent must lie in (0, 1]");
      }
      return generate(*spec.base).snowflake(spec.epsilon);
    }
  }
  throw std::invalid_argument("unhandled generator kind");
}

}  // namespace netcube
