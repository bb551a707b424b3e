#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>

#include "netcube/metric_space.hpp"

namespace netcube {

// Seeded description of a synthetic test space.
//
//   grid1d              n, spacing
//   grid2d              width, height, spacing
//   euclidean_random    n, dim            (uniform in the unit cube)
//   cantor_ultrametric  depth, ratio      (left endpoints of the level-depth
//                                          intervals of the ratio-Cantor set,
//                                          Euclidean metric on the line)
//   mary_ultrametric    arity, depth, ratio
//   snowflake           epsilon, base     (base is itself a GeneratorSpec)
//
// Index 0 of every generated ordering is the base point x_0.
struct GeneratorSpec {
  enum class Kind { grid1d, grid2d, euclidean_random, cantor_ultrametric, mary_ultrametric, snowflake };

  Kind kind = Kind::grid1d;
  std::size_t n = 0;
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t dim = 2;
  std::size_t arity = 2;
  std::size_t depth = 0;
  double spacing = 1.0;
  double ratio = 0.5;
  double epsilon = 1.0;
  std::shared_ptr<const GeneratorSpec> base;
  std::uint64_t seed = 0;
  std::size_t max_points = 1u << 16;

  static GeneratorSpec grid1d(std::size_t n, double spacing = 1.0);
  static GeneratorSpec grid2d(std::size_t width, std::size_t height, double spacing = 1.0);
  static GeneratorSpec euclidean_random(std::size_t n, std::size_t dim, std::uint64_t seed);
  static GeneratorSpec cantor(std::size_t depth, double ratio);
  static GeneratorSpec mary(std::size_t arity, std::size_t depth, double ratio);
  static GeneratorSpec snowflaked(GeneratorSpec base, double epsilon);

  std::string describe() const;
};

const char* to_string(GeneratorSpec::Kind kind);
GeneratorSpec::Kind generator_kind_from_string(const std::string& name);

// Throws std::invalid_argument on bad parameters or when the point count
// exceeds spec.max_points.
FiniteMetricSpace generate(const GeneratorSpec& spec);

}  // namespace netcube
