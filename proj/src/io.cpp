#include "netcube/io.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace netcube {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(out);
}

// Nulls stand for NaN/inf slacks that JSON cannot carry.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

FiniteMetricSpace read_points_csv(std::istream& in) {
  std::vector<std::string> labels;
  std::vector<double> coords;
  std::size_t dim = 0;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() < 2) {
      throw InputError("line " + std::to_string(line_no) + ": expected id and at least one coordinate");
    }
    std::vector<double> row;
    bool numeric = true;
    for (std::size_t f = 1; f < fields.size(); ++f) {
      double v;
      if (!parse_number(fields[f], v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      throw InputError("line " + std::to_string(line_no) + ": non-numeric coordinate");
    }
    first = false;
    if (dim == 0) dim = row.size();
    if (row.size() != dim) {
      throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(dim) +
                       " coordinates, got " + std::to_string(row.size()));
    }
    labels.push_back(fields[0]);
    coords.insert(coords.end(), row.begin(), row.end());
  }
  if (labels.empty()) throw InputError("no points in CSV input");
  auto space = FiniteMetricSpace::from_coordinates(std::move(coords), dim);
  return space.with_labels(std::move(labels));
}

FiniteMetricSpace read_points_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open points file '" + path + "'");
  return read_points_csv(in);
}

FiniteMetricSpace read_matrix_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("d")) {
    throw InputError("distance matrix JSON needs keys \"n\" and \"d\"");
  }
  const auto n = doc.at("n").get<std::size_t>();
  const json& rows = doc.at("d");
  if (!rows.is_array() || rows.size() != n) throw InputError("\"d\" must hold n rows");
  std::vector<double> matrix;
  matrix.reserve(n * n);
  for (const json& row : rows) {
    if (!row.is_array() || row.size() != n) throw InputError("every row of \"d\" must hold n entries");
    for (const json& v : row) {
      if (!v.is_number()) throw InputError("distance entries must be numbers");
      matrix.push_back(v.get<double>());
    }
  }
  return FiniteMetricSpace::from_matrix(std::move(matrix), n);
}

FiniteMetricSpace read_matrix_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open matrix file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("matrix file '" + path + "': " + e.what());
  }
  return read_matrix_json(doc);
}

GeneratorSpec generator_spec_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("kind")) throw InputError("generator spec needs a \"kind\"");
  GeneratorSpec s;
  try {
    s.kind = generator_kind_from_string(doc.at("kind").get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  const json params = doc.value("params", json::object());
  s.seed = doc.value("seed", std::uint64_t{0});
  s.max_points = params.value("max_points", s.max_points);
  using K = GeneratorSpec::Kind;
  try {
    switch (s.kind) {
      case K::grid1d:
        s.n = params.at("n").get<std::size_t>();
        s.spacing = params.value("spacing", 1.0);
        break;
      case K::grid2d:
        s.width = params.at("width").get<std::size_t>();
        s.height = params.at("height").get<std::size_t>();
        s.spacing = params.value("spacing", 1.0);
        break;
      case K::euclidean_random:
        s.n = params.at("n").get<std::size_t>();
        s.dim = params.value("dim", std::size_t{2});
        break;
      case K::cantor_ultrametric:
        s.depth = params.at("depth").get<std::size_t>();
        s.ratio = params.value("ratio", 1.0 / 3.0);
        break;
      case K::mary_ultrametric:
        s.arity = params.at("arity").get<std::size_t>();
        s.depth = params.at("depth").get<std::size_t>();
        s.ratio = params.at("ratio").get<double>();
        break;
      case K::snowflake: {
        s.epsilon = params.at("epsilon").get<double>();
        json base = params.at("base");
        if (!base.contains("seed")) base["seed"] = s.seed;
        s.base = std::make_shared<const GeneratorSpec>(generator_spec_from_json(base));
        break;
      }
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("generator spec: ") + e.what());
  }
  return s;
}

json to_json(const GeneratorSpec& spec) {
  json params = json::object();
  using K = GeneratorSpec::Kind;
  switch (spec.kind) {
    case K::grid1d: params = {{"n", spec.n}, {"spacing", spec.spacing}}; break;
    case K::grid2d: params = {{"width", spec.width}, {"height", spec.height}, {"spacing", spec.spacing}}; break;
    case K::euclidean_random: params = {{"n", spec.n}, {"dim", spec.dim}}; break;
    case K::cantor_ultrametric: params = {{"depth", spec.depth}, {"ratio", spec.ratio}}; break;
    case K::mary_ultrametric: params = {{"arity", spec.arity}, {"depth", spec.depth}, {"ratio", spec.ratio}}; break;
    case K::snowflake: params = {{"epsilon", spec.epsilon}, {"base", spec.base ? to_json(*spec.base) : json()}}; break;
  }
  return {{"kind", to_string(spec.kind)}, {"params", params}, {"seed", spec.seed}};
}

json to_json(const NetHierarchy& nets) {
  json levels = json::object();
  for (int k = nets.k_min; k <= nets.k_max; ++k) levels[std::to_string(k)] = nets.level(k);
  return {{"r", nets.r}, {"k_min", nets.k_min}, {"k_max", nets.k_max}, {"base_point", nets.base_point},
          {"levels", levels}};
}

json to_json(const CubeTree& tree, bool emit_members) {
  json nodes = json::array();
  for (int k = tree.k_min(); k <= tree.k_max(); ++k) {
    for (const CubeNode& node : tree.level(k)) {
      json children = json::array();
      for (std::size_t c : node.children) children.push_back({k + 1, c});
      json entry = {{"k", k},
                    {"i", node.i},
                    {"center", node.center},
                    {"parent", node.parent == npos ? json(nullptr) : json::array({k - 1, node.parent})},
                    {"children", children}};
      if (emit_members) {
        const auto mem = tree.members(k, node.i);
        entry["members"] = std::vector<std::size_t>(mem.begin(), mem.end());
      }
      nodes.push_back(std::move(entry));
    }
  }
  return {{"r", tree.r()}, {"k_min", tree.k_min()}, {"k_max", tree.k_max()}, {"base_point", tree.base_point()},
          {"nodes", nodes}};
}

json to_json(const MeasureAssignment& measure, const CubeTree& tree) {
  json nodes = json::array();
  for (int k = tree.k_min(); k <= tree.k_max(); ++k) {
    for (std::size_t i = 0; i < tree.level_size(k); ++i) {
      nodes.push_back({{"k", k}, {"i", i}, {"mass", measure.mass(k, i)}});
    }
  }
  json doc = {{"kind", to_string(measure.kind)},
              {"p", measure.p},
              {"M_max", measure.M_max},
              {"nodes", nodes},
              {"points", measure.point_mass},
              {"warnings", measure.warnings}};
  if (measure.beta) doc["beta"] = *measure.beta;
  if (!measure.weights.empty()) doc["weights"] = measure.weights;
  return doc;
}

json to_json(const VerificationReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"checked", c.checked},
                      {"violations", c.violations},
                      {"worst_slack", number_or_null(c.worst_slack)},
                      {"witness", c.witness}});
  }
  return {{"pass", report.pass()}, {"checks", checks}};
}

json to_json(const DoublingReport& r) {
  auto witness = [](const Witness& w) { return json{{"y", w.y}, {"t", w.t}, {"k", w.k}}; };
  return {{"samples", r.samples},
          {"seed", r.seed},
          {"exhaustive", r.exhaustive},
          {"p", r.p},
          {"r", r.r},
          {"worst_ratio_cubes", r.worst_ratio_cubes},
          {"worst_cubes_at", witness(r.worst_cubes_at)},
          {"bound_cubes", r.bound_cubes},
          {"worst_ratio_balls", r.worst_ratio_balls},
          {"worst_balls_at", witness(r.worst_balls_at)},
          {"M_tilde", r.M_tilde},
          {"bound_balls", r.bound_balls},
          {"per_sample_violations", r.per_sample_violations},
          {"containment_failures", r.containment_failures},
          {"clamped", r.clamped},
          {"bound_asserted", r.bound_asserted},
          {"pass_cubes", r.pass_cubes},
          {"pass_balls", r.pass_balls}};
}

json to_json(const ChainReport& report) {
  json pts = json::array();
  for (const auto& p : report.points) {
    pts.push_back({{"x", p.x},
                   {"from_below", number_or_null(p.from_below)},
                   {"from_above", number_or_null(p.from_above)},
                   {"lower_dim", number_or_null(p.lower_dim)},
                   {"upper_dim", number_or_null(p.upper_dim)},
                   {"ordered", p.ordered}});
  }
  return {{"tolerance", report.tolerance},
          {"ordered", report.ordered},
          {"fraction_ordered", report.fraction_ordered()},
          {"points", pts}};
}

json to_json(const ValidationReport& report) {
  json v = json::array();
  for (const auto& x : report.violations) {
    v.push_back({{"kind", to_string(x.kind)}, {"i", x.i}, {"j", x.j}, {"k", x.k}, {"excess", x.excess}});
  }
  return {{"valid", report.valid()}, {"violations", v}};
}

void write_json_file(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << doc.dump(2) << '\n';
}

}  // namespace netcube
