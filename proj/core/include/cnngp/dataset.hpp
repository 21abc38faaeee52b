#pragma once

#include <string>
#include <vector>

#include "cnngp/linalg.hpp"

namespace cnngp {

/// Observations at n sites: coordinates (n x d), covariates (n x p, p may be
/// 0) and responses (n x q). Rows are in the caller's (input) order.
struct Dataset {
  Matrix coords;
  Matrix x;
  Matrix y;
  /// Per-row holdout flag; empty when the source had no holdout column.
  std::vector<bool> holdout;

  Index size() const { return coords.rows(); }
  Index dim() const { return coords.cols(); }
  Index covariates() const { return x.cols(); }
  Index responses() const { return y.cols(); }

  /// Shapes agree, values finite, sites distinct.
  void validate() const;

  Dataset subset(const std::vector<Index>& rows) const;
  /// Rows with holdout flag unset / set. Without flags: everything / nothing.
  Dataset training() const;
  Dataset held_out() const;
};

/// Header plus numeric body of a CSV file.
struct CsvTable {
  std::vector<std::string> header;
  Matrix values;

  /// Column position by name, or -1.
  Index column(const std::string& name) const;
};

/// Numbers are written with 17 significant digits so they re-parse exactly.
std::string format_number(double v);

CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const CsvTable& table);

/// Columns coord_1..coord_d, x_1..x_p, y_1..y_q and optionally `holdout` (0/1).
Dataset dataset_from_table(const CsvTable& table);
CsvTable dataset_to_table(const Dataset& data);

Dataset read_dataset(const std::string& path);
void write_dataset(const std::string& path, const Dataset& data);

/// `prefix_1 .. prefix_k`.
std::vector<std::string> numbered_columns(const std::string& prefix, Index k);

}  // namespace cnngp
