#pragma once

#include <string>

#include "cnngp/linalg.hpp"
#include "cnngp/metrics.hpp"
#include "cnngp/summary.hpp"
#include "json.hpp"

namespace cnngp::cli {

using Json = nlohmann::ordered_json;

/// Row-major nested arrays.
Json to_json(const Matrix& m);
Json to_json(const Vector& v);
Json to_json(const ResponseScores& s);
Json to_json(const DrawSummary& s);
Json to_json(const MetricsReport& r);

Matrix matrix_from_json(const Json& j);

Json read_json(const std::string& path);
void write_json(const std::string& path, const Json& j);

}  // namespace cnngp::cli
