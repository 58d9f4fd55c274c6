#include "corner/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "corner/errors.hpp"

namespace corner {

std::string csv_writer::fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void csv_writer::add_row(const std::vector<double>& vals) {
  std::vector<std::string> r;
  r.reserve(vals.size());
  for (double v : vals) r.push_back(fmt(v));
  rows.push_back(std::move(r));
}

std::string csv_writer::str() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i)
      out << (i ? "," : "") << r[i];
    out << "\n";
  }
  return out.str();
}

void csv_writer::write(const std::string& path) const {
  std::ofstream f(path);
  if (!f) fail_solver("cannot open output file: " + path);
  f << str();
}

}  // namespace corner
