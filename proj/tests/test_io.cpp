#include <doctest.h>

#include <cmath>
#include <sstream>

#include "netcube/cube_tree.hpp"
#include "netcube/generators.hpp"
#include "netcube/io.hpp"
#include "netcube/measure.hpp"

using namespace netcube;

TEST_SUITE("io") {

TEST_CASE("points csv with and without header") {
  std::istringstream with("id,x,y\na,0,0\nb,3,4\n");
  auto s = read_points_csv(with);
  CHECK(s.size() == 2);
  CHECK(s.dist(0, 1) == 5.0);
  CHECK(s.labels() == std::vector<std::string>{"a", "b"});
  std::istringstream without("0,0\n1,1\n2,2.5\n");
  auto t = read_points_csv(without);
  CHECK(t.size() == 3);
  CHECK(t.dist(0, 2) == 2.5);
}

TEST_CASE("malformed csv") {
  std::istringstream ragged("0,0,0\n1,1\n");
  CHECK_THROWS_AS(read_points_csv(ragged), InputError);
  std::istringstream text("id,x\n0,zero\n");
  CHECK_THROWS_AS(read_points_csv(text), InputError);
  std::istringstream empty("id,x\n");
  CHECK_THROWS_AS(read_points_csv(empty), InputError);
  std::istringstream lone("7\n");
  CHECK_THROWS_AS(read_points_csv(lone), InputError);
  CHECK_THROWS_AS(read_points_csv_file("/nonexistent/points.csv"), InputError);
}

TEST_CASE("matrix json") {
  auto s = read_matrix_json(json::parse(R"({"n":3,"d":[[0,1,2],[1,0,1],[2,1,0]]})"));
  CHECK(s.size() == 3);
  CHECK(s.dist(0, 2) == 2.0);
  CHECK(s.backing() == FiniteMetricSpace::Backing::dense);
  CHECK_THROWS_AS(read_matrix_json(json::parse(R"({"n":2,"d":[[0,1]]})")), InputError);
  CHECK_THROWS_AS(read_matrix_json(json::parse(R"({"n":2,"d":[[0,1],[1]]})")), InputError);
  CHECK_THROWS_AS(read_matrix_json(json::parse(R"({"n":1,"d":[["x"]]})")), InputError);
  CHECK_THROWS_AS(read_matrix_json(json::parse(R"({"d":[[0]]})")), InputError);
}

TEST_CASE("generator specs round trip") {
  const auto doc = json::parse(
      R"({"kind":"snowflake","seed":9,"params":{"epsilon":0.5,"base":{"kind":"euclidean_random","params":{"n":30,"dim":3}}}})");
  const auto spec = generator_spec_from_json(doc);
  CHECK(spec.kind == GeneratorSpec::Kind::snowflake);
  REQUIRE(spec.base);
  CHECK(spec.base->seed == 9);
  CHECK(spec.base->dim == 3);
  const auto again = generator_spec_from_json(to_json(spec));
  auto a = generate(spec);
  auto b = generate(again);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.dist(0, i) == b.dist(0, i));
  CHECK_THROWS_AS(generator_spec_from_json(json::parse(R"({"kind":"torus"})")), InputError);
  CHECK_THROWS_AS(generator_spec_from_json(json::parse(R"({"kind":"grid1d","params":{}})")), InputError);
}

TEST_CASE("tree and measure serialization") {
  auto s = generate(GeneratorSpec::grid1d(8));
  const auto nets = build_nets(s, 1.0 / 7.0);
  const auto tree = build_tree(s, 1.0 / 7.0);
  const auto m = build_doubling_measure(tree, 0.1);

  const json h = to_json(nets);
  CHECK(h["k_min"] == -2);
  CHECK(h["levels"]["-1"] == json::array({0, 7}));

  const json t = to_json(tree, true);
  CHECK(t["nodes"].size() == 11);
  const json& root = t["nodes"][0];
  CHECK(root["parent"].is_null());
  CHECK(root["children"] == json::array({json::array({-1, 0}), json::array({-1, 1})}));
  CHECK(t["nodes"][2]["members"] == json::array({4, 5, 6, 7}));
  CHECK_FALSE(to_json(tree)["nodes"][0].contains("members"));

  const json mj = to_json(m, tree);
  double total = 0.0;
  for (const auto& v : mj["points"]) total += v.get<double>();
  CHECK(total == doctest::Approx(1.0));
  CHECK(mj["M_max"] == 3);
  CHECK(mj["kind"] == "doubling");
}

TEST_CASE("non-finite slacks become null") {
  VerificationReport rep;
  rep.checks.emplace_back("empty");
  const json j = to_json(rep);
  CHECK(j["checks"][0]["worst_slack"].is_null());
  CHECK(j["pass"] == true);
}

}  // TEST_SUITE
