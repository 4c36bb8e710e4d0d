#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "flocksim/engine.hpp"

namespace flocksim {

/// Writes the complete log as CSV: one header row, then one row per logged
/// sample.  Columns: t, leader q(3) and qd(3), then per follower q(3),
/// qd(3), v(3), theta, and (for the gain-adaptive law) alpha_i_j for every
/// other agent j plus beta_i; then V1, V2, V3, V, velerr_i, min_dist,
/// lambda_min_H and the cumulative edge counters.  Numbers use 9
/// significant digits and LF line endings.
void emit_csv(const SimLog& log, const std::filesystem::path& path);

/// Generic numeric CSV, used to re-load emitted logs for plotting.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;  // [column][row]

  std::size_t rows() const { return header.empty() ? 0 : columns[0].size(); }
  /// Index of a named column; throws ConfigError when absent.
  int col(const std::string& name) const;
  bool has_col(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace flocksim
