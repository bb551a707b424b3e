#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "netcube/generators.hpp"
#include "netcube/metric_space.hpp"
#include "netcube/rng.hpp"
#include "oracles.hpp"

using namespace netcube;

TEST_SUITE("metric") {

TEST_CASE("two points at distance one form a metric") {
  auto s = FiniteMetricSpace::from_matrix({0, 1, 1, 0}, 2);
  CHECK(validate_metric(s, 0.0).valid());
  CHECK(s.diameter() == 1.0);
  CHECK(s.min_gap() == 1.0);
}

TEST_CASE("triangle violation reports the witness triple") {
  auto s = FiniteMetricSpace::from_matrix({0, 1, 3, 1, 0, 1, 3, 1, 0}, 3);
  const auto rep = validate_metric(s, 0.0);
  REQUIRE(rep.violations.size() == 1);
  const auto& v = rep.violations.front();
  CHECK(v.kind == ViolationKind::triangle);
  CHECK(v.i == 0);
  CHECK(v.j == 1);
  CHECK(v.k == 2);
  CHECK(v.excess == doctest::Approx(1.0));
}

TEST_CASE("pair axiom violations are reported") {
  SUBCASE("nonzero diagonal") {
    auto s = FiniteMetricSpace::from_matrix({0.5, 1, 1, 0}, 2);
    REQUIRE_FALSE(validate_metric(s, 0.0).valid());
    CHECK(validate_metric(s, 0.0).violations.front().kind == ViolationKind::nonzero_diagonal);
  }
  SUBCASE("asymmetry") {
    auto s = FiniteMetricSpace::from_matrix({0, 1, 2, 0}, 2);
    const auto rep = validate_metric(s, 0.0);
    REQUIRE_FALSE(rep.valid());
    CHECK(rep.violations.front().kind == ViolationKind::asymmetry);
  }
  SUBCASE("coincident points") {
    auto s = FiniteMetricSpace::from_matrix({0, 0, 0, 0}, 2);
    CHECK(validate_metric(s, 0.0).violations.front().kind == ViolationKind::zero_off_diagonal);
  }
  SUBCASE("negative distance") {
    auto s = FiniteMetricSpace::from_matrix({0, -1, -1, 0}, 2);
    CHECK(validate_metric(s, 0.0).violations.front().kind == ViolationKind::negative);
  }
}

TEST_CASE("perturbed random matrix: flagged triples match the exhaustive scan") {
  const std::size_t n = 50;
  Rng rng(17);
  std::vector<double> pts(n * 2);
  for (auto& v : pts) v = rng.uniform();
  auto base = FiniteMetricSpace::from_coordinates(pts, 2);
  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = base.dist(i, j);
  d[3 * n + 41] = d[41 * n + 3] = 5.0;
  const double tol = 1e-12;
  const auto expect = oracle::triangle_violations(d, n, tol);
  REQUIRE_FALSE(expect.empty());
  for (Exec exec : {Exec::serial, Exec::parallel}) {
    const auto rep = validate_metric(FiniteMetricSpace::from_matrix(d, n), tol, exec);
    std::vector<oracle::Triple> got;
    for (const auto& v : rep.violations) {
      REQUIRE(v.kind == ViolationKind::triangle);
      got.push_back({v.i, v.j, v.k});
    }
    std::sort(got.begin(), got.end());
    CHECK(got == expect);
  }
}

TEST_CASE("balls on the 8-point grid") {
  auto s = generate(GeneratorSpec::grid1d(8));
  CHECK(ball(s, 3, 0.0) == std::vector<std::size_t>{3});
  CHECK(ball(s, 3, 0.0, BallKind::open).empty());
  CHECK(ball(s, 3, 7.0).size() == 8);
  CHECK(ball(s, 3, 1.5) == std::vector<std::size_t>{2, 3, 4});
  CHECK(ball(s, 3, 1.0, BallKind::open) == std::vector<std::size_t>{3});
  CHECK(ball(s, 3, 1.0) == oracle::ball(s, 3, 1.0, true));
}

TEST_CASE("ball monotonicity and open within closed") {
  auto s = generate(GeneratorSpec::euclidean_random(120, 2, 5));
  Rng rng(9);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t x = rng.index(s.size());
    const double t1 = rng.uniform(0.0, 1.0);
    const double t2 = t1 + rng.uniform(0.0, 0.5);
    for (BallKind kind : {BallKind::open, BallKind::closed}) {
      const auto b1 = ball(s, x, t1, kind);
      const auto b2 = ball(s, x, t2, kind);
      CHECK(std::includes(b2.begin(), b2.end(), b1.begin(), b1.end()));
    }
    const auto open = ball(s, x, t1, BallKind::open);
    const auto closed = ball(s, x, t1, BallKind::closed);
    CHECK(std::includes(closed.begin(), closed.end(), open.begin(), open.end()));
    CHECK(closed == oracle::ball(s, x, t1, true));
    CHECK(open == oracle::ball(s, x, t1, false));
  }
}

TEST_CASE("covering numbers") {
  SUBCASE("single point") {
    auto s = generate(GeneratorSpec::grid1d(1));
    CHECK(covering_number(s, 0, 1.0) == 1);
  }
  SUBCASE("two points farther apart than 2t") {
    auto s = FiniteMetricSpace::from_matrix({0, 10, 10, 0}, 2);
    CHECK(covering_number(s, 0, 1.0) == 1);
  }
  SUBCASE("unit grid with t = 1 needs at most five balls") {
    auto s = generate(GeneratorSpec::grid1d(40));
    for (std::size_t x = 0; x < s.size(); ++x) CHECK(covering_number(s, x, 1.0) <= 5);
  }
  SUBCASE("greedy is not monotone in t") {
    auto s = generate(GeneratorSpec::grid1d(8));
    CHECK(covering_number(s, 3, 1.0) == 3);
    CHECK(covering_number(s, 3, 1.5) == 4);
  }
  SUBCASE("greedy centres are t-separated and cover the 2t-ball") {
    auto s = generate(GeneratorSpec::euclidean_random(200, 2, 3));
    for (double t : {0.05, 0.1, 0.2}) {
      for (std::size_t x = 0; x < 20; ++x) {
        const auto big = oracle::ball(s, x, 2 * t, true);
        std::vector<std::size_t> centres;
        for (std::size_t y : big) {
          bool covered = false;
          for (std::size_t c : centres) covered = covered || s.dist(c, y) <= t;
          if (!covered) centres.push_back(y);
        }
        CHECK(covering_number(s, x, t) == centres.size());
        for (std::size_t a = 0; a < centres.size(); ++a)
          for (std::size_t b = a + 1; b < centres.size(); ++b) CHECK(s.dist(centres[a], centres[b]) > t);
      }
    }
  }
}

TEST_CASE("lp norms and snowflake") {
  auto l1 = FiniteMetricSpace::from_coordinates({0, 0, 3, 4}, 2, 1.0);
  auto l2 = FiniteMetricSpace::from_coordinates({0, 0, 3, 4}, 2, 2.0);
  auto linf = FiniteMetricSpace::from_coordinates({0, 0, 3, 4}, 2, INFINITY);
  auto l3 = FiniteMetricSpace::from_coordinates({0, 0, 3, 4}, 2, 3.0);
  CHECK(l1.dist(0, 1) == 7.0);
  CHECK(l2.dist(0, 1) == 5.0);
  CHECK(linf.dist(0, 1) == 4.0);
  CHECK(l3.dist(0, 1) == doctest::Approx(std::cbrt(91.0)));
  auto snow = l2.snowflake(0.5);
  CHECK(snow.dist(0, 1) == doctest::Approx(std::sqrt(5.0)));
  CHECK(snow.diameter() == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("single point space") {
  auto s = FiniteMetricSpace::from_matrix({0}, 1);
  CHECK(s.size() == 1);
  CHECK(s.diameter() == 0.0);
  CHECK(s.min_gap() == 0.0);
  CHECK(validate_metric(s, 0.0).valid());
}

TEST_CASE("serial and parallel extent agree") {
  auto pts = generate(GeneratorSpec::euclidean_random(300, 3, 4));
  std::vector<double> d(300 * 300);
  for (std::size_t i = 0; i < 300; ++i)
    for (std::size_t j = 0; j < 300; ++j) d[i * 300 + j] = pts.dist(i, j);
  auto a = FiniteMetricSpace::from_matrix(d, 300, Exec::serial);
  auto b = FiniteMetricSpace::from_matrix(d, 300, Exec::parallel);
  CHECK(a.diameter() == b.diameter());
  CHECK(a.min_gap() == b.min_gap());
}

}  // TEST_SUITE
