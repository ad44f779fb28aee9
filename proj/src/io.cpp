// SPDX-License-Identifier: Apache-2.0
#include "levyscope/io.hpp"

#include <cstdio>
#include <stdexcept>

namespace levyscope {

CsvWriter::CsvWriter(const std::string& path,
                     const std::map<std::string, std::string>& provenance,
                     const std::vector<std::string>& columns)
    : out_(path), columns_(columns.size()) {
  if (!out_) throw std::runtime_error("cannot open output file '" + path + "'");
  for (const auto& [key, value] : provenance)
    out_ << "# " << key << " = " << value << "\n";
  for (size_t c = 0; c < columns.size(); ++c)
    out_ << columns[c] << (c + 1 < columns.size() ? "," : "\n");
}

std::string CsvWriter::format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_)
    throw std::invalid_argument("csv row width mismatch");
  for (size_t c = 0; c < values.size(); ++c)
    out_ << format(values[c]) << (c + 1 < values.size() ? "," : "\n");
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw std::invalid_argument("csv row width mismatch");
  for (size_t c = 0; c < cells.size(); ++c)
    out_ << cells[c] << (c + 1 < cells.size() ? "," : "\n");
}

}  // namespace levyscope
