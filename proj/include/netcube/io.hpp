#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "netcube/cube_tree.hpp"
#include "netcube/doubling.hpp"
#include "netcube/generators.hpp"
#include "netcube/measure.hpp"
#include "netcube/metric_space.hpp"
#include "netcube/net_hierarchy.hpp"
#include "netcube/report.hpp"
#include "netcube/spectrum.hpp"

namespace netcube {

using json = nlohmann::json;

// Thrown for malformed input files; carries a human-readable reason.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// `id,x1,...,xd` per line, Euclidean metric; a header line is detected when
// its coordinate fields are not numbers.
FiniteMetricSpace read_points_csv(std::istream& in);
FiniteMetricSpace read_points_csv_file(const std::string& path);

// {"n": N, "d": [[...], ...]} with a full row-major matrix.
FiniteMetricSpace read_matrix_json(const json& doc);
FiniteMetricSpace read_matrix_json_file(const std::string& path);

// {"kind": ..., "params": {...}, "seed": ...}
GeneratorSpec generator_spec_from_json(const json& doc);
json to_json(const GeneratorSpec& spec);

json to_json(const NetHierarchy& nets);
json to_json(const CubeTree& tree, bool emit_members = false);
json to_json(const MeasureAssignment& measure, const CubeTree& tree);
json to_json(const VerificationReport& report);
json to_json(const DoublingReport& report);
json to_json(const ChainReport& report);
json to_json(const ValidationReport& report);

// Pretty-printed with a trailing newline.
void write_json_file(const std::string& path, const json& doc);

}  // namespace netcube
