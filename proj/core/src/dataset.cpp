#include "cnngp/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cnngp/error.hpp"
#include "cnngp/spatial.hpp"

namespace cnngp {

void Dataset::validate() const {
  const Index n = coords.rows();
  if (n == 0) throw DataError("dataset has no rows");
  if (coords.cols() == 0) throw DataError("dataset has no coordinate columns");
  if (x.rows() != n || y.rows() != n) {
    throw DimensionError("dataset blocks disagree on row count: coords " + std::to_string(n) +
                         ", x " + std::to_string(x.rows()) + ", y " + std::to_string(y.rows()));
  }
  if (y.cols() == 0) throw DataError("dataset has no response columns");
  if (!holdout.empty() && static_cast<Index>(holdout.size()) != n) {
    throw DimensionError("holdout flags do not match row count");
  }
  if (!x.allFinite() || !y.allFinite()) throw DataError("dataset contains non-finite values");
  check_locations(coords);
}

Dataset Dataset::subset(const std::vector<Index>& rows) const {
  Dataset out;
  const auto k = static_cast<Index>(rows.size());
  out.coords.resize(k, coords.cols());
  out.x.resize(k, x.cols());
  out.y.resize(k, y.cols());
  for (Index r = 0; r < k; ++r) {
    const Index src = rows[static_cast<std::size_t>(r)];
    if (src < 0 || src >= size()) throw DimensionError("subset row out of range");
    out.coords.row(r) = coords.row(src);
    out.x.row(r) = x.row(src);
    out.y.row(r) = y.row(src);
    if (!holdout.empty()) out.holdout.push_back(holdout[static_cast<std::size_t>(src)]);
  }
  return out;
}

namespace {

Dataset pick(const Dataset& d, bool want_holdout) {
  std::vector<Index> rows;
  for (Index i = 0; i < d.size(); ++i) {
    const bool h = !d.holdout.empty() && d.holdout[static_cast<std::size_t>(i)];
    if (h == want_holdout) rows.push_back(i);
  }
  Dataset out = d.subset(rows);
  out.holdout.clear();
  return out;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r\"");
    const auto e = cell.find_last_not_of(" \t\r\"");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s, std::size_t line, std::size_t col) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw DataError("line " + std::to_string(line) + ", column " + std::to_string(col + 1) +
                    ": cannot parse '" + s + "' as a number");
  }
  return v;
}

}  // namespace

Dataset Dataset::training() const { return pick(*this, false); }
Dataset Dataset::held_out() const { return pick(*this, true); }

Index CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<Index>(i);
  }
  return -1;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  CsvTable t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    t.header = split_line(line);
    break;
  }
  if (t.header.empty()) throw DataError("'" + path + "' is empty");
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_line(line);
    if (cells.size() != t.header.size()) {
      throw DataError("'" + path + "' line " + std::to_string(lineno) + ": expected " +
                      std::to_string(t.header.size()) + " fields, found " +
                      std::to_string(cells.size()));
    }
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) row[c] = parse_number(cells[c], lineno, c);
    rows.push_back(std::move(row));
  }
  t.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(t.header.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      t.values(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
    }
  }
  return t;
}

void write_csv(const std::string& path, const CsvTable& table) {
  if (static_cast<Index>(table.header.size()) != table.values.cols()) {
    throw DimensionError("csv header has " + std::to_string(table.header.size()) +
                         " names for " + std::to_string(table.values.cols()) + " columns");
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    out << (c ? "," : "") << table.header[c];
  }
  out << '\n';
  for (Index r = 0; r < table.values.rows(); ++r) {
    for (Index c = 0; c < table.values.cols(); ++c) {
      out << (c ? "," : "") << format_number(table.values(r, c));
    }
    out << '\n';
  }
  if (!out) throw DataError("write to '" + path + "' failed");
}

std::vector<std::string> numbered_columns(const std::string& prefix, Index k) {
  std::vector<std::string> out;
  for (Index i = 1; i <= k; ++i) out.push_back(prefix + "_" + std::to_string(i));
  return out;
}

namespace {

// Collects consecutive prefix_1, prefix_2, ... columns.
std::vector<Index> prefixed(const CsvTable& t, const std::string& prefix) {
  std::vector<Index> cols;
  for (Index k = 1;; ++k) {
    const Index c = t.column(prefix + "_" + std::to_string(k));
    if (c < 0) break;
    cols.push_back(c);
  }
  return cols;
}

Matrix gather(const CsvTable& t, const std::vector<Index>& cols) {
  Matrix m(t.values.rows(), static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) m.col(static_cast<Index>(k)) = t.values.col(cols[k]);
  return m;
}

}  // namespace

Dataset dataset_from_table(const CsvTable& t) {
  const auto c = prefixed(t, "coord");
  const auto x = prefixed(t, "x");
  const auto y = prefixed(t, "y");
  if (c.empty()) throw DataError("dataset needs columns coord_1, coord_2, ...");
  if (y.empty()) throw DataError("dataset needs columns y_1, y_2, ...");
  Dataset d;
  d.coords = gather(t, c);
  d.x = gather(t, x);
  d.y = gather(t, y);
  const Index h = t.column("holdout");
  if (h >= 0) {
    d.holdout.resize(static_cast<std::size_t>(t.values.rows()));
    for (Index r = 0; r < t.values.rows(); ++r) {
      const double v = t.values(r, h);
      if (v != 0.0 && v != 1.0) {
        throw DataError("holdout column must hold 0 or 1 (row " + std::to_string(r + 1) + ")");
      }
      d.holdout[static_cast<std::size_t>(r)] = v == 1.0;
    }
  }
  const std::size_t used = c.size() + x.size() + y.size() + (h >= 0 ? 1 : 0);
  if (used != t.header.size()) {
    for (const auto& name : t.header) {
      bool known = name == "holdout";
      for (const auto& p : {"coord_", "x_", "y_"}) known = known || name.rfind(p, 0) == 0;
      if (!known) throw DataError("unexpected dataset column '" + name + "'");
    }
    throw DataError("dataset columns must be numbered consecutively from 1");
  }
  d.validate();
  return d;
}

CsvTable dataset_to_table(const Dataset& d) {
  CsvTable t;
  for (const auto& v : {numbered_columns("coord", d.dim()), numbered_columns("x", d.covariates()),
                        numbered_columns("y", d.responses())}) {
    t.header.insert(t.header.end(), v.begin(), v.end());
  }
  const bool flags = !d.holdout.empty();
  if (flags) t.header.push_back("holdout");
  t.values.resize(d.size(), static_cast<Index>(t.header.size()));
  t.values.leftCols(d.dim()) = d.coords;
  t.values.middleCols(d.dim(), d.covariates()) = d.x;
  t.values.middleCols(d.dim() + d.covariates(), d.responses()) = d.y;
  for (Index r = 0; flags && r < d.size(); ++r) {
    t.values(r, t.values.cols() - 1) = d.holdout[static_cast<std::size_t>(r)] ? 1.0 : 0.0;
  }
  return t;
}

Dataset read_dataset(const std::string& path) { return dataset_from_table(read_csv(path)); }

void write_dataset(const std::string& path, const Dataset& data) {
  write_csv(path, dataset_to_table(data));
}

}  // namespace cnngp
