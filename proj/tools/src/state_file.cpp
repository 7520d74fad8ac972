#include "minl_cli/state_file.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "minl/errors.hpp"

namespace minl::cli {

using nlohmann::json;

namespace {

double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) throw ValidationError("state file: " + where + " is not a number");
  return j.get<double>();
}

}  // namespace

DensityMatrix parse_state(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("state file: malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("dims") || !doc.contains("matrix")) {
    throw ValidationError("state file: expected an object with \"dims\" and \"matrix\"");
  }
  const json& jd = doc["dims"];
  if (!jd.is_array() || jd.empty()) throw ValidationError("state file: \"dims\" must be a non-empty array");
  Dims dims;
  for (const json& d : jd) {
    if (!d.is_number_integer() || d.get<long long>() < 1) {
      throw ValidationError("state file: dims entries must be positive integers");
    }
    dims.push_back(d.get<std::size_t>());
  }

  const json& jm = doc["matrix"];
  if (!jm.is_array()) throw ValidationError("state file: \"matrix\" must be an array of rows");
  const auto n = static_cast<Eigen::Index>(jm.size());
  ComplexMatrix mat(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const json& row = jm[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw DimensionError("state file: matrix must be square (row " + std::to_string(r) +
                           " has the wrong length)");
    }
    for (Eigen::Index c = 0; c < n; ++c) {
      const json& entry = row[static_cast<std::size_t>(c)];
      const std::string where = "entry (" + std::to_string(r) + "," + std::to_string(c) + ")";
      if (!entry.is_array() || entry.size() != 2) {
        throw ValidationError("state file: " + where + " must be a [re, im] pair");
      }
      mat(r, c) = Complex(number_at(entry[0], where), number_at(entry[1], where));
    }
  }
  return DensityMatrix(std::move(mat), std::move(dims));
}

DensityMatrix read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read state file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_state(ss.str());
}

std::string format_state(const DensityMatrix& rho) {
  json doc;
  doc["dims"] = rho.dims();
  json rows = json::array();
  const ComplexMatrix& m = rho.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  doc["matrix"] = std::move(rows);
  return doc.dump() + "\n";
}

}  // namespace minl::cli
