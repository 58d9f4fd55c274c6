#pragma once
#include <string>
#include <vector>

namespace corner {

// Minimal CSV writer with deterministic numeric formatting (%.12g), so that
// repeated runs with the same seed produce byte-identical files.
struct csv_writer {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  explicit csv_writer(std::vector<std::string> cols) : header(std::move(cols)) {}

  static std::string fmt(double v);

  void add_row(const std::vector<double>& vals);
  void add_row_mixed(const std::vector<std::string>& vals) { rows.push_back(vals); }
  std::string str() const;
  void write(const std::string& path) const;
};

}  // namespace corner
