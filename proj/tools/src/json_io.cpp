#include "json_io.hpp"

#include <fstream>

#include "cnngp/error.hpp"

namespace cnngp::cli {

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json to_json(const ResponseScores& s) {
  return Json{{"per_response", to_json(s.per_response)}, {"combined", s.combined}};
}

Json to_json(const DrawSummary& s) {
  return Json{{"mean", to_json(s.mean)},
              {"sd", to_json(s.sd)},
              {"lower", to_json(s.lower)},
              {"upper", to_json(s.upper)}};
}

Json to_json(const MetricsReport& r) {
  Json j;
  j["sites"] = r.sites;
  j["responses"] = r.responses;
  j["rmspe"] = to_json(r.rmspe);
  if (r.cvg) j["cvg"] = to_json(*r.cvg);
  if (r.cvgl) j["cvgl"] = to_json(*r.cvgl);
  if (r.mcrps) j["mcrps"] = to_json(*r.mcrps);
  if (r.msel) j["msel"] = to_json(*r.msel);
  return j;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw DataError("expected a JSON array of rows");
  const auto rows = static_cast<Index>(j.size());
  const Index cols = rows ? static_cast<Index>(j[0].size()) : 0;
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw DataError("ragged matrix in JSON");
    }
    for (Index c = 0; c < cols; ++c) m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace cnngp::cli
